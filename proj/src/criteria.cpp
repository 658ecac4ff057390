#include "prereq/criteria.hpp"

#include <cmath>
#include <limits>

namespace prereq {

namespace {

const std::array<std::string, kCriterionCount> kNames = {
    "TemO", "HL-A", "HL-Ab", "HL-RCA", "RefD", "IOLR", "CatCon", "SuperCatCon", "CMH", "BERTropy",
};

struct PairRecords {
    const ConceptRecord& r1;
    const ConceptRecord& r2;
};

PairRecords require_pair(const ConceptId& c1, const ConceptId& c2, const CorpusSnapshot& snap) {
    if (c1 == c2) {
        throw ValidationError("criterion evaluated on identical concepts: " + c1);
    }
    return {snap.at(c1), snap.at(c2)};
}

CriterionOutcome abstain() {
    return CriterionOutcome{false, false, std::nullopt};
}

// IOL(c) = inbound / outbound, +inf when outbound is 0 and inbound positive,
// undefined when both counts are 0.
std::optional<double> iol(const ConceptRecord& r) {
    if (r.outbound_count == 0) {
        if (r.inbound_count == 0) {
            return std::nullopt;
        }
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(r.inbound_count) / static_cast<double>(r.outbound_count);
}

}  // namespace

const std::string& criterion_name(CriterionId id) {
    return kNames[static_cast<int>(id)];
}

std::optional<CriterionId> criterion_from_name(const std::string& name) {
    for (CriterionId id : kAllCriteria) {
        if (kNames[static_cast<int>(id)] == name) {
            return id;
        }
    }
    return std::nullopt;
}

void CriteriaConfig::validate() const {
    if (!(refd_theta > 0.0 && refd_theta < 1.0)) {
        throw ValidationError("refd_theta must lie in (0, 1)");
    }
    if (!(bertropy_theta >= 0.0) || !std::isfinite(bertropy_theta)) {
        throw ValidationError("bertropy_theta must be finite and non-negative");
    }
}

CriterionOutcome evaluate_temo(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    if (!r1.doc_position || !r2.doc_position) {
        return abstain();
    }
    return {*r1.doc_position < *r2.doc_position, true, std::nullopt};
}

CriterionOutcome evaluate_hl_a(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    (void)r1;
    return {r2.article_links.count(c1) != 0, true, std::nullopt};
}

CriterionOutcome evaluate_hl_ab(const ConceptId& c1, const ConceptId& c2,
                                const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    (void)r1;
    return {r2.abstract_links.count(c1) != 0, true, std::nullopt};
}

CriterionOutcome evaluate_hl_rca(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    (void)r1;
    if (r2.related.empty()) {
        return abstain();
    }
    // Related concepts that do not resolve in the snapshot contribute nothing.
    bool fired = false;
    for (const auto& [rid, weight] : r2.related) {
        (void)weight;
        if (snap.contains(rid) && snap.at(rid).abstract_links.count(c1) != 0) {
            fired = true;
            break;
        }
    }
    return {fired, true, std::nullopt};
}

std::optional<double> refd_value(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap) {
    auto [r1, r2] = require_pair(c1, c2, snap);

    std::set<ConceptId> pool;
    for (const auto& [rid, w] : r1.related) pool.insert(rid);
    for (const auto& [rid, w] : r2.related) pool.insert(rid);

    auto refers_to = [&](const ConceptId& x, const ConceptId& target) -> double {
        if (!snap.contains(x)) {
            return 0.0;
        }
        return snap.at(x).article_links.count(target) != 0 ? 1.0 : 0.0;
    };
    auto weight_of = [](const ConceptRecord& anchor, const ConceptId& x) -> double {
        auto it = anchor.related.find(x);
        return it == anchor.related.end() ? 0.0 : it->second;
    };

    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    for (const auto& x : pool) {
        double w1 = weight_of(r1, x);
        double w2 = weight_of(r2, x);
        num1 += refers_to(x, c2) * w1;
        den1 += w1;
        num2 += refers_to(x, c1) * w2;
        den2 += w2;
    }
    if (den1 <= 0.0 || den2 <= 0.0) {
        return std::nullopt;
    }
    return num1 / den1 - num2 / den2;
}

CriterionOutcome evaluate_refd(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig& cfg) {
    auto value = refd_value(c1, c2, snap);
    if (!value) {
        return abstain();
    }
    double v = *value;
    // Values inside [-theta, theta] are the dead zone: no direction inferred.
    bool applicable = std::abs(v) > cfg.refd_theta;
    bool fired = v > -1.0 && v < -cfg.refd_theta;
    return {fired, applicable, v};
}

CriterionOutcome evaluate_iolr(const ConceptId& c1, const ConceptId& c2,
                               const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    auto i1 = iol(r1);
    auto i2 = iol(r2);
    if (!i1 || !i2) {
        return abstain();
    }
    if (r1.outbound_count == 0 && r2.outbound_count == 0) {
        return abstain();  // both ratios infinite, no ordering
    }
    bool fired;
    if (r1.outbound_count == 0) {
        fired = true;  // IOL(c1) infinite, IOL(c2) finite
    } else if (r2.outbound_count == 0) {
        fired = false;
    } else {
        // exact integer comparison of in1/out1 > in2/out2
        using wide = unsigned __int128;
        fired = static_cast<wide>(r1.inbound_count) * r2.outbound_count >
                static_cast<wide>(r2.inbound_count) * r1.outbound_count;
    }
    return {fired, true, *i1 - *i2};
}

CriterionOutcome evaluate_catcon(const ConceptId& c1, const ConceptId& c2,
                                 const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    (void)r1;
    return {r2.categories.count(c1) != 0, true, std::nullopt};
}

namespace {

std::size_t intersection_size(const std::set<ConceptId>& a, const std::set<ConceptId>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const auto& x : small) {
        n += large.count(x);
    }
    return n;
}

}  // namespace

CriterionOutcome evaluate_supercatcon(const ConceptId& c1, const ConceptId& c2,
                                      const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    std::size_t s12 = intersection_size(r1.super_categories, r2.categories);
    std::size_t s21 = intersection_size(r2.super_categories, r1.categories);
    if (s12 == 0 && s21 == 0) {
        return abstain();
    }
    return {s12 > s21, true, static_cast<double>(s12) - static_cast<double>(s21)};
}

CriterionOutcome evaluate_cmh(const ConceptId& c1, const ConceptId& c2,
                              const CorpusSnapshot& snap, const CriteriaConfig&) {
    auto [r1, r2] = require_pair(c1, c2, snap);
    if (!r1.hierarchy_position || !r2.hierarchy_position) {
        return abstain();
    }
    return {*r1.hierarchy_position < *r2.hierarchy_position, true, std::nullopt};
}

std::optional<double> entropy(const ConceptId& c, const CorpusSnapshot& snap,
                              const CriteriaConfig& cfg) {
    const auto& rec = snap.at(c);
    if (!rec.topic_distribution) {
        return std::nullopt;
    }
    double h = 0.0;
    for (const auto& [label, p] : *rec.topic_distribution) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    if (cfg.entropy_log_base == EntropyLogBase::Base2) {
        h /= std::log(2.0);
    }
    return std::max(h, 0.0);
}

CriterionOutcome evaluate_bertropy(const ConceptId& c1, const ConceptId& c2,
                                   const CorpusSnapshot& snap, const CriteriaConfig& cfg) {
    require_pair(c1, c2, snap);
    auto h1 = entropy(c1, snap, cfg);
    auto h2 = entropy(c2, snap, cfg);
    if (!h1 || !h2) {
        return abstain();
    }
    double diff = *h1 - *h2;
    return {diff > cfg.bertropy_theta, true, diff};
}

CriterionOutcome evaluate_criterion_pair(CriterionId id, const ConceptId& c1, const ConceptId& c2,
                                         const CorpusSnapshot& snap, const CriteriaConfig& cfg) {
    switch (id) {
        case CriterionId::TemO: return evaluate_temo(c1, c2, snap, cfg);
        case CriterionId::HL_A: return evaluate_hl_a(c1, c2, snap, cfg);
        case CriterionId::HL_Ab: return evaluate_hl_ab(c1, c2, snap, cfg);
        case CriterionId::HL_RCA: return evaluate_hl_rca(c1, c2, snap, cfg);
        case CriterionId::RefD: return evaluate_refd(c1, c2, snap, cfg);
        case CriterionId::IOLR: return evaluate_iolr(c1, c2, snap, cfg);
        case CriterionId::CatCon: return evaluate_catcon(c1, c2, snap, cfg);
        case CriterionId::SuperCatCon: return evaluate_supercatcon(c1, c2, snap, cfg);
        case CriterionId::CMH: return evaluate_cmh(c1, c2, snap, cfg);
        case CriterionId::BERTropy: return evaluate_bertropy(c1, c2, snap, cfg);
    }
    throw ValidationError("unknown criterion ordinal");
}

CriterionVote evaluate_all(const ConceptId& c1, const ConceptId& c2, const CorpusSnapshot& snap,
                           const CriteriaConfig& cfg) {
    CriterionVote vote;
    vote.pair = {c1, c2};
    for (CriterionId id : kAllCriteria) {
        int k = static_cast<int>(id);
        CriterionOutcome fwd = evaluate_criterion_pair(id, c1, c2, snap, cfg);
        CriterionOutcome bwd = evaluate_criterion_pair(id, c2, c1, snap, cfg);
        vote.a1[k] = fwd.fired;
        vote.a2[k] = bwd.fired;
        vote.applicable1[k] = fwd.applicable;
        vote.applicable2[k] = bwd.applicable;
    }
    vote.refd = refd_value(c1, c2, snap);
    auto h1 = entropy(c1, snap, cfg);
    auto h2 = entropy(c2, snap, cfg);
    if (h1 && h2) {
        vote.entropy_diff = *h1 - *h2;
    }
    const auto& r1 = snap.at(c1);
    const auto& r2 = snap.at(c2);
    auto i1 = iol(r1);
    auto i2 = iol(r2);
    if (i1 && i2 && !(r1.outbound_count == 0 && r2.outbound_count == 0)) {
        vote.iol_diff = *i1 - *i2;
    }
    return vote;
}

void rethreshold_refd(CriterionVote& vote, double refd_theta) {
    int k = static_cast<int>(CriterionId::RefD);
    vote.a1[k] = vote.a2[k] = false;
    vote.applicable1[k] = vote.applicable2[k] = false;
    if (!vote.refd) {
        return;
    }
    double v = *vote.refd;
    bool applicable = std::abs(v) > refd_theta;
    vote.applicable1[k] = vote.applicable2[k] = applicable;
    vote.a1[k] = v > -1.0 && v < -refd_theta;
    vote.a2[k] = -v > -1.0 && -v < -refd_theta;
}

void rethreshold_bertropy(CriterionVote& vote, double bertropy_theta) {
    int k = static_cast<int>(CriterionId::BERTropy);
    vote.a1[k] = vote.a2[k] = false;
    vote.applicable1[k] = vote.applicable2[k] = false;
    if (!vote.entropy_diff) {
        return;
    }
    double d = *vote.entropy_diff;
    vote.applicable1[k] = vote.applicable2[k] = true;
    vote.a1[k] = d > bertropy_theta;
    vote.a2[k] = -d > bertropy_theta;
}

}  // namespace prereq
