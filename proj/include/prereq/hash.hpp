#ifndef PREREQ_HASH_HPP
#define PREREQ_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace prereq {

// FNV-1a, 64-bit. Used for cache file names and input digests.
inline std::uint64_t fnv1a_64(std::string_view data) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string fnv1a_hex(std::string_view data);

}  // namespace prereq

#endif  // PREREQ_HASH_HPP
