#ifndef PREREQ_CORPUS_HPP
#define PREREQ_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prereq {

// Concept ids are normalized wiki-style titles, e.g. "Machine_learning".
using ConceptId = std::string;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Canonical form of a concept id: whitespace/underscore runs collapse to a
// single underscore, surrounding runs are trimmed, and the first character is
// uppercased (wiki title convention). The rest of the string keeps its case.
ConceptId normalize_id(const std::string& raw);

// Fully case-folded key used to detect ids that differ only by case.
std::string id_fold_key(const ConceptId& id);

// Position of a concept inside a course hierarchy. Lexicographic order over
// (course, topic, channel, material) is the learning order.
struct HierarchyPosition {
    int course = 0;
    int topic = 0;
    int channel = 0;
    int material = 0;

    auto operator<=>(const HierarchyPosition&) const = default;
};

// All per-concept evidence the criteria read. Referenced ids that do not
// resolve in the snapshot are external: they participate in membership tests
// but never generate pairs.
struct ConceptRecord {
    ConceptId id;
    std::set<ConceptId> article_links;           // concepts hyperlinked anywhere in the article
    std::set<ConceptId> abstract_links;          // concepts hyperlinked in the abstract
    std::map<ConceptId, double> related;         // related concept -> similarity weight in [0,1]
    std::set<ConceptId> categories;
    std::set<ConceptId> super_categories;        // categories of the categories, one hop up
    std::uint64_t inbound_count = 0;
    std::uint64_t outbound_count = 0;
    std::optional<std::uint64_t> doc_position;   // first occurrence in the learning material
    std::optional<HierarchyPosition> hierarchy_position;
    std::optional<std::map<std::string, double>> topic_distribution;

    bool operator==(const ConceptRecord&) const = default;
};

struct SnapshotMetadata {
    std::string name;
    std::string created_at;
    std::string source;

    bool operator==(const SnapshotMetadata&) const = default;
};

// Immutable, validated collection of concept records. Construction checks all
// invariants, strips self-references (with a warning), and records soft
// findings such as abstract links missing from the article links.
class CorpusSnapshot {
public:
    CorpusSnapshot(SnapshotMetadata metadata, std::map<ConceptId, ConceptRecord> concepts);

    const std::map<ConceptId, ConceptRecord>& concepts() const { return concepts_; }
    const SnapshotMetadata& metadata() const { return metadata_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    std::size_t size() const { return concepts_.size(); }
    bool contains(const ConceptId& id) const { return concepts_.count(id) != 0; }

    // Throws ValidationError for ids not in the snapshot.
    const ConceptRecord& at(const ConceptId& id) const;

    bool operator==(const CorpusSnapshot& other) const {
        return metadata_ == other.metadata_ && concepts_ == other.concepts_;
    }

private:
    SnapshotMetadata metadata_;
    std::map<ConceptId, ConceptRecord> concepts_;
    std::vector<std::string> warnings_;
};

CorpusSnapshot load_snapshot(const std::filesystem::path& path);
void save_snapshot(const CorpusSnapshot& snapshot, const std::filesystem::path& path);

// Canonical serialization: concepts sorted by id, sets sorted, LF line ends.
std::string snapshot_to_json(const CorpusSnapshot& snapshot);
CorpusSnapshot snapshot_from_json(const std::string& text);

// Every unordered pair of snapshot concepts exactly once, sorted by id.
// Never yields (c, c).
std::vector<std::pair<ConceptId, ConceptId>> concept_pairs(const CorpusSnapshot& snapshot);

// One labeled unordered pair; stored with a < b, label 1 meaning "a is a
// prerequisite of b", -1 the reverse, 0 no relation.
struct LabeledPair {
    ConceptId a;
    ConceptId b;
    int label = 0;

    bool operator==(const LabeledPair&) const = default;
};

struct LabeledPairSet {
    std::vector<LabeledPair> pairs;

    bool operator==(const LabeledPairSet&) const = default;
};

// Canonicalizes raw rows: orders each pair, flips the label when the pair is
// swapped, drops consistent duplicates, rejects conflicting ones.
LabeledPairSet normalize_labeled_pairs(const std::vector<LabeledPair>& raw,
                                       const CorpusSnapshot& snapshot);

// CSV with header "concept_a,concept_b,label"; labels in {1,-1,0}.
LabeledPairSet load_labeled_pairs(const std::filesystem::path& path,
                                  const CorpusSnapshot& snapshot);

}  // namespace prereq

#endif  // PREREQ_CORPUS_HPP
