#ifndef PREREQ_FETCH_HPP
#define PREREQ_FETCH_HPP

#include <chrono>
#include <functional>
#include <memory>
#include <optional>

#include "prereq/corpus.hpp"

namespace prereq {

struct NetworkError : std::runtime_error {
    explicit NetworkError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotFoundError : std::runtime_error {
    explicit NotFoundError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CacheMissError : std::runtime_error {
    explicit CacheMissError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SourceConfig {
    std::string article_api_base = "https://en.wikipedia.org/w/api.php";
    std::string sparql_endpoint = "https://dbpedia.org/sparql";
    // SPARQL templates; "{uri}" is replaced by the concept's resource URI.
    // Empty strings select the built-in DBpedia templates.
    std::string category_query;
    std::string supercategory_query;
    std::filesystem::path cache_dir = ".prereq-cache";
    double rate_limit = 2.0;  // requests per second
    double timeout_seconds = 30.0;
    bool offline_only = false;
    int related_top_n = 10;

    void validate() const;
};

struct CacheKey {
    std::string kind;  // "wikitext", "backlinks", "categories", "supercategories"
    std::string id;

    auto operator<=>(const CacheKey&) const = default;
};

// One cached raw response. Entries are immutable once written.
struct CacheEntry {
    CacheKey key;
    std::string payload;
    std::string fetched_at;        // ISO-8601 UTC
    std::string source_revision;   // optional, source-defined

    bool operator==(const CacheEntry&) const = default;
};

// One file per entry under dir/<kind>/, named by the sanitized id plus a short
// hash of the exact id, so entries stay human-inspectable and lookups exact.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path dir);

    std::optional<CacheEntry> get(const CacheKey& key) const;
    void put(const CacheEntry& entry);
    std::filesystem::path entry_path(const CacheKey& key) const;

private:
    std::filesystem::path dir_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

class HttpClient {
public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& url) = 0;
    virtual HttpResponse post_form(const std::string& url, const std::string& body) = 0;
};

// Real client backed by cpp-httplib.
std::unique_ptr<HttpClient> make_http_client(double timeout_seconds);

// Spaces successive requests at least 1/per_second apart. reserve() returns
// how long the caller must wait before issuing the request it just reserved.
class RateLimiter {
public:
    explicit RateLimiter(double per_second);
    std::chrono::microseconds reserve(std::chrono::steady_clock::time_point now);

private:
    std::chrono::microseconds interval_;
    std::optional<std::chrono::steady_clock::time_point> next_slot_;
};

std::string url_encode(const std::string& raw);

// Link targets of [[...]] markup, article namespace only: targets with a
// namespace prefix, interwiki colon or empty page part are skipped; section
// anchors and display text are stripped; ids are normalized. self is excluded.
std::set<ConceptId> extract_wiki_links(const std::string& wikitext, const ConceptId& self);

// Source text before the first section heading (a line starting with "==").
std::string lead_section(const std::string& wikitext);

// Evidence for one concept as fetched from the article and category sources.
struct ConceptEvidence {
    ConceptId id;
    bool found = false;
    std::set<ConceptId> article_links;
    std::set<ConceptId> abstract_links;
    std::set<ConceptId> categories;
    std::set<ConceptId> super_categories;
    std::uint64_t inbound_count = 0;
    std::uint64_t outbound_count = 0;
};

// Fetches through the cache: every network response is written through, and
// offline_only mode is served from the cache alone (cache miss is an error).
class EvidenceFetcher {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::microseconds)>;
    using Timestamper = std::function<std::string()>;

    EvidenceFetcher(SourceConfig cfg, HttpClient* http);

    // Test seams: simulated steady clock / sleep and wall-clock stamping.
    void set_clock(Clock clock, Sleeper sleeper);
    void set_timestamper(Timestamper now);

    // Throws NotFoundError when the concept has no article.
    ConceptEvidence fetch_concept_evidence(const ConceptId& id);

    std::string fetch_wikitext(const ConceptId& id);
    std::uint64_t fetch_backlink_count(const ConceptId& id);
    std::set<ConceptId> fetch_categories(const ConceptId& id, bool super);

    const SourceConfig& config() const { return cfg_; }
    DiskCache& cache() { return cache_; }

    // Latest fetched_at timestamp among cache entries used since the last
    // reset; empty when nothing has been touched.
    const std::string& latest_fetched_at() const { return latest_fetched_at_; }
    void reset_latest_fetched_at() { latest_fetched_at_.clear(); }

private:
    std::string cached_payload(const CacheKey& key, const std::function<std::string()>& miss);
    HttpResponse http_get(const std::string& url);
    HttpResponse http_post_form(const std::string& url, const std::string& body);
    void throttle();

    SourceConfig cfg_;
    HttpClient* http_;
    DiskCache cache_;
    RateLimiter limiter_;
    Clock clock_;
    Sleeper sleeper_;
    Timestamper timestamper_;
    std::string latest_fetched_at_;
};

// Optional sidecar inputs merged into built snapshots.
struct AuxInputs {
    std::map<ConceptId, std::uint64_t> doc_positions;
    std::map<ConceptId, HierarchyPosition> hierarchy;
    std::map<ConceptId, std::map<std::string, double>> topics;
    // When present, replaces the derived related-concept lists entirely.
    std::optional<std::map<ConceptId, std::map<ConceptId, double>>> related_weights;
};

AuxInputs load_aux_inputs(const std::optional<std::filesystem::path>& positions_csv,
                          const std::optional<std::filesystem::path>& hierarchy_csv,
                          const std::optional<std::filesystem::path>& topics_json,
                          const std::optional<std::filesystem::path>& weights_csv);

// Fetches evidence for all ids plus their related concepts and assembles a
// validated snapshot. Concepts without an article become empty records and
// every criterion abstains on them. Rebuilding from an unchanged cache yields
// byte-identical snapshots: the metadata timestamp is the latest fetched_at
// of the cache entries used, not the wall clock.
CorpusSnapshot build_snapshot(const std::vector<ConceptId>& ids, EvidenceFetcher& fetcher,
                              const AuxInputs& aux, const std::string& name = "snapshot");

}  // namespace prereq

#endif  // PREREQ_FETCH_HPP
