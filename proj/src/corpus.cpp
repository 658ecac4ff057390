#include "prereq/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace prereq {

namespace {

bool is_space_like(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == '_';
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open file for writing: " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace

ConceptId normalize_id(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_sep = false;
    for (char c : raw) {
        if (is_space_like(c)) {
            if (!out.empty()) {
                pending_sep = true;
            }
            continue;
        }
        if (pending_sep) {
            out.push_back('_');
            pending_sep = false;
        }
        out.push_back(c);
    }
    if (!out.empty()) {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

std::string id_fold_key(const ConceptId& id) {
    std::string key = normalize_id(id);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return key;
}

const ConceptRecord& CorpusSnapshot::at(const ConceptId& id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) {
        throw ValidationError("unknown concept id: " + id);
    }
    return it->second;
}

CorpusSnapshot::CorpusSnapshot(SnapshotMetadata metadata, std::map<ConceptId, ConceptRecord> concepts)
    : metadata_(std::move(metadata)), concepts_(std::move(concepts)) {
    if (concepts_.size() < 2) {
        throw ValidationError("snapshot must contain at least 2 concepts, got " +
                              std::to_string(concepts_.size()));
    }

    std::map<std::string, ConceptId> fold_keys;
    for (auto& [id, record] : concepts_) {
        if (id.empty()) {
            throw ValidationError("empty concept id");
        }
        if (normalize_id(id) != id) {
            throw ValidationError("concept id not in canonical form: " + id);
        }
        if (record.id != id) {
            throw ValidationError("record id mismatch for concept: " + id);
        }
        auto [it, inserted] = fold_keys.emplace(id_fold_key(id), id);
        if (!inserted) {
            throw ValidationError("duplicate concept id (differs only by case): \"" + it->second +
                                  "\" vs \"" + id + "\"");
        }

        auto check_refs = [&](const std::set<ConceptId>& ids, const char* field) {
            for (const auto& ref : ids) {
                if (normalize_id(ref) != ref) {
                    throw ValidationError("concept " + id + ": " + field +
                                          " id not in canonical form: " + ref);
                }
            }
        };
        check_refs(record.article_links, "article_links");
        check_refs(record.abstract_links, "abstract_links");
        check_refs(record.categories, "categories");
        check_refs(record.super_categories, "super_categories");
        for (const auto& [rid, weight] : record.related) {
            if (normalize_id(rid) != rid) {
                throw ValidationError("concept " + id + ": related id not in canonical form: " + rid);
            }
            if (!(weight >= 0.0 && weight <= 1.0)) {
                throw ValidationError("concept " + id + ": related weight out of [0,1] for " + rid);
            }
        }

        if (record.topic_distribution) {
            double sum = 0.0;
            for (const auto& [label, p] : *record.topic_distribution) {
                if (!(p >= 0.0) || !std::isfinite(p)) {
                    throw ValidationError("concept " + id + ": negative topic probability for \"" +
                                          label + "\"");
                }
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                std::ostringstream msg;
                msg << "concept " << id << ": topic probabilities sum to " << sum
                    << ", expected 1 within 1e-6";
                throw ValidationError(msg.str());
            }
        }

        // Self-references are dropped; criteria never see them.
        auto strip_self = [&](std::set<ConceptId>& ids, const char* field) {
            if (ids.erase(id) > 0) {
                warnings_.push_back("concept " + id + ": self-link ignored in " + field);
            }
        };
        strip_self(record.article_links, "article_links");
        strip_self(record.abstract_links, "abstract_links");
        strip_self(record.categories, "categories");
        strip_self(record.super_categories, "super_categories");
        if (record.related.erase(id) > 0) {
            warnings_.push_back("concept " + id + ": self-link ignored in related");
        }

        for (const auto& ab : record.abstract_links) {
            if (record.article_links.count(ab) == 0) {
                warnings_.push_back("concept " + id + ": abstract link " + ab +
                                    " is not among article links");
                break;
            }
        }
    }
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t parse_count(const json& j, const std::string& concept, const char* field) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) {
        throw ParseError("concept " + concept + ": " + field + " must be an integer");
    }
    if (j.is_number_integer() && j.get<std::int64_t>() < 0) {
        throw ValidationError("concept " + concept + ": negative " + field);
    }
    return j.get<std::uint64_t>();
}

std::set<ConceptId> parse_id_set(const json& j, const std::string& concept, const char* field) {
    if (!j.is_array()) {
        throw ParseError("concept " + concept + ": " + field + " must be an array of strings");
    }
    std::set<ConceptId> out;
    for (const auto& e : j) {
        if (!e.is_string()) {
            throw ParseError("concept " + concept + ": " + field + " must contain strings");
        }
        ConceptId id = normalize_id(e.get<std::string>());
        if (!id.empty()) {
            out.insert(std::move(id));
        }
    }
    return out;
}

ConceptRecord parse_record(const json& j) {
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
        throw ParseError("concept entry missing string \"id\"");
    }
    ConceptRecord rec;
    rec.id = normalize_id(j["id"].get<std::string>());
    if (rec.id.empty()) {
        throw ValidationError("concept id empty after normalization: \"" +
                              j["id"].get<std::string>() + "\"");
    }

    if (j.contains("article_links")) rec.article_links = parse_id_set(j["article_links"], rec.id, "article_links");
    if (j.contains("abstract_links")) rec.abstract_links = parse_id_set(j["abstract_links"], rec.id, "abstract_links");
    if (j.contains("categories")) rec.categories = parse_id_set(j["categories"], rec.id, "categories");
    if (j.contains("super_categories")) rec.super_categories = parse_id_set(j["super_categories"], rec.id, "super_categories");

    if (j.contains("related")) {
        const auto& rel = j["related"];
        if (!rel.is_array()) {
            throw ParseError("concept " + rec.id + ": related must be an array");
        }
        for (const auto& entry : rel) {
            ConceptId rid;
            double weight = 1.0;  // snapshots may omit weights; similarity defaults to 1
            if (entry.is_string()) {
                rid = normalize_id(entry.get<std::string>());
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_string() &&
                       entry[1].is_number()) {
                rid = normalize_id(entry[0].get<std::string>());
                weight = entry[1].get<double>();
            } else {
                throw ParseError("concept " + rec.id + ": related entries must be \"id\" or [\"id\", weight]");
            }
            if (rid.empty()) {
                continue;
            }
            auto [it, inserted] = rec.related.emplace(rid, weight);
            if (!inserted && it->second != weight) {
                throw ValidationError("concept " + rec.id + ": conflicting weights for related " + rid);
            }
        }
    }

    if (j.contains("inbound_count")) rec.inbound_count = parse_count(j["inbound_count"], rec.id, "inbound_count");
    if (j.contains("outbound_count")) rec.outbound_count = parse_count(j["outbound_count"], rec.id, "outbound_count");

    if (j.contains("doc_position") && !j["doc_position"].is_null()) {
        rec.doc_position = parse_count(j["doc_position"], rec.id, "doc_position");
    }
    if (j.contains("hierarchy_position") && !j["hierarchy_position"].is_null()) {
        const auto& hp = j["hierarchy_position"];
        if (!hp.is_array() || hp.size() != 4) {
            throw ParseError("concept " + rec.id +
                             ": hierarchy_position must be [course, topic, channel, material]");
        }
        HierarchyPosition pos;
        int* slots[4] = {&pos.course, &pos.topic, &pos.channel, &pos.material};
        for (std::size_t i = 0; i < 4; ++i) {
            if (!hp[i].is_number_integer()) {
                throw ParseError("concept " + rec.id + ": hierarchy_position must contain integers");
            }
            int v = hp[i].get<int>();
            if (v < 0) {
                throw ValidationError("concept " + rec.id + ": negative hierarchy_position index");
            }
            *slots[i] = v;
        }
        rec.hierarchy_position = pos;
    }
    if (j.contains("topic_distribution") && !j["topic_distribution"].is_null()) {
        const auto& td = j["topic_distribution"];
        if (!td.is_object()) {
            throw ParseError("concept " + rec.id + ": topic_distribution must be an object");
        }
        std::map<std::string, double> topics;
        for (auto it = td.begin(); it != td.end(); ++it) {
            if (!it.value().is_number()) {
                throw ParseError("concept " + rec.id + ": topic probabilities must be numbers");
            }
            topics[it.key()] = it.value().get<double>();
        }
        rec.topic_distribution = std::move(topics);
    }
    return rec;
}

}  // namespace

CorpusSnapshot snapshot_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("concepts") || !doc["concepts"].is_array()) {
        throw ParseError("snapshot must be an object with a \"concepts\" array");
    }

    SnapshotMetadata meta;
    if (doc.contains("metadata") && doc["metadata"].is_object()) {
        const auto& m = doc["metadata"];
        meta.name = m.value("name", "");
        meta.created_at = m.value("created_at", "");
        meta.source = m.value("source", "");
    }

    std::map<ConceptId, ConceptRecord> concepts;
    for (const auto& entry : doc["concepts"]) {
        ConceptRecord rec = parse_record(entry);
        ConceptId id = rec.id;
        auto [it, inserted] = concepts.emplace(id, std::move(rec));
        if (!inserted) {
            throw ValidationError("duplicate concept id after normalization: " + id);
        }
    }
    return CorpusSnapshot(std::move(meta), std::move(concepts));
}

CorpusSnapshot load_snapshot(const std::filesystem::path& path) {
    return snapshot_from_json(read_file(path));
}

std::string snapshot_to_json(const CorpusSnapshot& snapshot) {
    ordered_json doc;
    doc["metadata"] = {{"name", snapshot.metadata().name},
                       {"created_at", snapshot.metadata().created_at},
                       {"source", snapshot.metadata().source}};
    doc["concepts"] = ordered_json::array();
    for (const auto& [id, rec] : snapshot.concepts()) {
        ordered_json c;
        c["id"] = id;
        c["article_links"] = rec.article_links;
        c["abstract_links"] = rec.abstract_links;
        auto related = ordered_json::array();
        for (const auto& [rid, weight] : rec.related) {
            related.push_back(ordered_json::array({rid, weight}));
        }
        c["related"] = std::move(related);
        c["categories"] = rec.categories;
        c["super_categories"] = rec.super_categories;
        c["inbound_count"] = rec.inbound_count;
        c["outbound_count"] = rec.outbound_count;
        if (rec.doc_position) {
            c["doc_position"] = *rec.doc_position;
        }
        if (rec.hierarchy_position) {
            const auto& hp = *rec.hierarchy_position;
            c["hierarchy_position"] = {hp.course, hp.topic, hp.channel, hp.material};
        }
        if (rec.topic_distribution) {
            c["topic_distribution"] = *rec.topic_distribution;
        }
        doc["concepts"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

void save_snapshot(const CorpusSnapshot& snapshot, const std::filesystem::path& path) {
    write_file(path, snapshot_to_json(snapshot));
}

std::vector<std::pair<ConceptId, ConceptId>> concept_pairs(const CorpusSnapshot& snapshot) {
    std::vector<ConceptId> ids;
    ids.reserve(snapshot.size());
    for (const auto& [id, rec] : snapshot.concepts()) {
        ids.push_back(id);
    }
    std::vector<std::pair<ConceptId, ConceptId>> pairs;
    pairs.reserve(ids.size() * (ids.size() - 1) / 2);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            pairs.emplace_back(ids[i], ids[j]);
        }
    }
    return pairs;
}

LabeledPairSet normalize_labeled_pairs(const std::vector<LabeledPair>& raw,
                                       const CorpusSnapshot& snapshot) {
    std::map<std::pair<ConceptId, ConceptId>, int> canonical;
    for (const auto& row : raw) {
        ConceptId a = normalize_id(row.a);
        ConceptId b = normalize_id(row.b);
        int label = row.label;
        if (label != 1 && label != -1 && label != 0) {
            throw ValidationError("label must be 1, -1 or 0 for pair (" + a + ", " + b + ")");
        }
        if (!snapshot.contains(a)) {
            throw ValidationError("unknown concept id in labeled pairs: " + a);
        }
        if (!snapshot.contains(b)) {
            throw ValidationError("unknown concept id in labeled pairs: " + b);
        }
        if (a == b) {
            throw ValidationError("labeled pair references the same concept twice: " + a);
        }
        if (a > b) {
            std::swap(a, b);
            label = -label;
        }
        auto [it, inserted] = canonical.emplace(std::make_pair(a, b), label);
        if (!inserted && it->second != label) {
            throw ValidationError("conflicting labels for pair (" + a + ", " + b + ")");
        }
    }
    LabeledPairSet out;
    out.pairs.reserve(canonical.size());
    for (const auto& [pair, label] : canonical) {
        out.pairs.push_back({pair.first, pair.second, label});
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto begin = field.find_first_not_of(" \t");
        auto end = field.find_last_not_of(" \t");
        fields.push_back(begin == std::string::npos ? ""
                                                    : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

}  // namespace

LabeledPairSet load_labeled_pairs(const std::filesystem::path& path,
                                  const CorpusSnapshot& snapshot) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::vector<LabeledPair> raw;
    bool saw_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        if (!saw_header) {
            if (fields.size() != 3 || fields[0] != "concept_a" || fields[1] != "concept_b" ||
                fields[2] != "label") {
                throw ParseError(path.string() +
                                 ": expected header \"concept_a,concept_b,label\", got \"" + line +
                                 "\"");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        int label = 0;
        if (fields[2] == "1") {
            label = 1;
        } else if (fields[2] == "-1") {
            label = -1;
        } else if (fields[2] == "0") {
            label = 0;
        } else {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": label must be 1, -1 or 0, got \"" + fields[2] + "\"");
        }
        raw.push_back({fields[0], fields[1], label});
    }
    if (!saw_header) {
        throw ParseError(path.string() + ": empty labeled-pair file");
    }
    return normalize_labeled_pairs(raw, snapshot);
}

}  // namespace prereq
