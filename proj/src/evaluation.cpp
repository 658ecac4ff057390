#include "prereq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace prereq {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// Canonical orientation: pair sorted ascending, verdict flipped on swap.
std::pair<std::pair<ConceptId, ConceptId>, Verdict> canonicalize(
    std::pair<ConceptId, ConceptId> pair, Verdict v) {
    if (pair.first > pair.second) {
        std::swap(pair.first, pair.second);
        if (v == Verdict::Forward) {
            v = Verdict::Backward;
        } else if (v == Verdict::Backward) {
            v = Verdict::Forward;
        }
    }
    return {std::move(pair), v};
}

Verdict verdict_from_fires(bool forward_fired, bool backward_fired) {
    if (forward_fired && !backward_fired) {
        return Verdict::Forward;
    }
    if (backward_fired && !forward_fired) {
        return Verdict::Backward;
    }
    return Verdict::None;  // neither, or an uninformative mutual fire
}

}  // namespace

Verdict verdict_from_label(int label) {
    switch (label) {
        case 1: return Verdict::Forward;
        case -1: return Verdict::Backward;
        case 0: return Verdict::None;
    }
    throw ValidationError("label must be 1, -1 or 0, got " + std::to_string(label));
}

Metrics metrics_from_tally(const ConfusionCounts& counts, std::uint64_t pairs,
                           std::uint64_t exact_matches, std::uint64_t positive_predictions) {
    Metrics m;
    m.counts = counts;
    m.pairs = pairs;
    m.exact_matches = exact_matches;
    m.positive_predictions = positive_predictions;
    double tp = static_cast<double>(counts.tp);
    m.precision = counts.tp + counts.fp == 0 ? 0.0 : tp / static_cast<double>(counts.tp + counts.fp);
    m.recall = counts.tp + counts.fn == 0 ? 0.0 : tp / static_cast<double>(counts.tp + counts.fn);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0
                                         : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.accuracy = pairs == 0 ? 0.0
                            : static_cast<double>(exact_matches) / static_cast<double>(pairs);
    return m;
}

Metrics score_verdicts(const std::vector<std::pair<Verdict, Verdict>>& gold_vs_predicted) {
    ConfusionCounts counts;
    std::uint64_t matches = 0;
    std::uint64_t positives = 0;
    for (const auto& [gold, pred] : gold_vs_predicted) {
        if (pred != Verdict::None) {
            ++positives;
        }
        if (gold == pred) {
            ++matches;
        }
        if (gold == Verdict::None) {
            if (pred == Verdict::None) {
                ++counts.tn;
            } else {
                ++counts.fp;
            }
        } else {
            if (pred == gold) {
                ++counts.tp;
            } else if (pred == Verdict::None) {
                ++counts.fn;
            } else {
                ++counts.fp;  // asserted the opposite direction
                ++counts.fn;
            }
        }
    }
    return metrics_from_tally(counts, gold_vs_predicted.size(), matches, positives);
}

Metrics evaluate(const std::vector<PrDecision>& predictions, const LabeledPairSet& gold) {
    std::map<std::pair<ConceptId, ConceptId>, Verdict> by_pair;
    for (const auto& d : predictions) {
        if (d.pair.first == d.pair.second) {
            throw ValidationError("prediction references the same concept twice: " + d.pair.first);
        }
        auto [pair, verdict] = canonicalize(d.pair, d.verdict);
        auto [it, inserted] = by_pair.emplace(pair, verdict);
        if (!inserted && it->second != verdict) {
            throw ValidationError("conflicting predictions for pair (" + pair.first + ", " +
                                  pair.second + ")");
        }
    }
    std::vector<std::pair<Verdict, Verdict>> rows;
    rows.reserve(gold.pairs.size());
    for (const auto& g : gold.pairs) {
        auto it = by_pair.find({g.a, g.b});
        if (it == by_pair.end()) {
            throw ValidationError("no prediction for gold pair (" + g.a + ", " + g.b + ")");
        }
        rows.emplace_back(verdict_from_label(g.label), it->second);
    }
    return score_verdicts(rows);
}

Metrics evaluate_criterion(CriterionId k, const CorpusSnapshot& snap, const LabeledPairSet& gold,
                           const CriteriaConfig& ccfg) {
    std::vector<std::pair<Verdict, Verdict>> rows;
    rows.reserve(gold.pairs.size());
    for (const auto& g : gold.pairs) {
        bool fwd = evaluate_criterion_pair(k, g.a, g.b, snap, ccfg).fired;
        bool bwd = evaluate_criterion_pair(k, g.b, g.a, snap, ccfg).fired;
        rows.emplace_back(verdict_from_label(g.label), verdict_from_fires(fwd, bwd));
    }
    return score_verdicts(rows);
}

EvalReport evaluate_report(const CorpusSnapshot& snap, const LabeledPairSet& gold,
                           const CriteriaConfig& ccfg, const VotingConfig& vcfg, int jobs) {
    ccfg.validate();
    vcfg.validate();
    (void)jobs;

    std::vector<CriterionVote> votes;
    votes.reserve(gold.pairs.size());
    for (const auto& g : gold.pairs) {
        votes.push_back(evaluate_all(g.a, g.b, snap, ccfg));
    }

    EvalReport report;
    report.criteria_config = ccfg;
    report.voting_config = vcfg;

    for (CriterionId id : kAllCriteria) {
        int k = static_cast<int>(id);
        std::vector<std::pair<Verdict, Verdict>> rows;
        rows.reserve(gold.pairs.size());
        for (std::size_t i = 0; i < gold.pairs.size(); ++i) {
            rows.emplace_back(verdict_from_label(gold.pairs[i].label),
                              verdict_from_fires(votes[i].a1[k], votes[i].a2[k]));
        }
        report.per_criterion[id] = score_verdicts(rows);
    }

    std::vector<std::pair<Verdict, Verdict>> voting_rows;
    voting_rows.reserve(gold.pairs.size());
    for (std::size_t i = 0; i < gold.pairs.size(); ++i) {
        voting_rows.emplace_back(verdict_from_label(gold.pairs[i].label),
                                 score(votes[i], vcfg).verdict);
    }
    report.voting = score_verdicts(voting_rows);
    return report;
}

namespace {

const char* kAccountingNote =
    "directed accounting: wrong-direction predictions count as fp+fn; 0/0 ratios are 0";

void append_metrics_row(std::ostringstream& out, const std::string& name, const Metrics& m) {
    out << name;
    for (std::size_t i = name.size(); i < 14; ++i) {
        out << ' ';
    }
    out << fmt("%6.2f", m.precision) << fmt("%7.2f", m.recall) << fmt("%7.2f", m.f1)
        << fmt("%7.2f", m.accuracy) << "   " << m.counts.tp << '/' << m.counts.fp << '/'
        << m.counts.fn << '/' << m.counts.tn << "\n";
}

nlohmann::ordered_json metrics_to_json(const Metrics& m) {
    return {
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"accuracy", m.accuracy},
        {"tp", m.counts.tp},
        {"fp", m.counts.fp},
        {"fn", m.counts.fn},
        {"tn", m.counts.tn},
        {"pairs", m.pairs},
        {"exact_matches", m.exact_matches},
        {"positive_predictions", m.positive_predictions},
    };
}

nlohmann::ordered_json config_to_json(const CriteriaConfig& ccfg, const VotingConfig& vcfg) {
    return {
        {"theta", vcfg.theta},
        {"refd_theta", ccfg.refd_theta},
        {"bertropy_theta", ccfg.bertropy_theta},
        {"entropy_log_base", ccfg.entropy_log_base == EntropyLogBase::Natural ? "natural" : "2"},
        {"weights", vcfg.weights},
        {"transitive_closure", vcfg.transitive_closure},
        {"accounting", kAccountingNote},
    };
}

}  // namespace

std::string report_to_text(const EvalReport& report) {
    std::ostringstream out;
    out << "# " << kAccountingNote << "\n";
    out << "# voting theta=" << fmt("%g", report.voting_config.theta)
        << " refd_theta=" << fmt("%g", report.criteria_config.refd_theta)
        << " bertropy_theta=" << fmt("%g", report.criteria_config.bertropy_theta) << "\n";
    out << "criterion          P      R     F1    Acc   tp/fp/fn/tn\n";
    for (const auto& [id, metrics] : report.per_criterion) {
        append_metrics_row(out, criterion_name(id), metrics);
    }
    append_metrics_row(out, "Voting", report.voting);
    return out.str();
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["per_criterion"] = nlohmann::ordered_json::object();
    for (const auto& [id, metrics] : report.per_criterion) {
        doc["per_criterion"][criterion_name(id)] = metrics_to_json(metrics);
    }
    doc["voting"] = metrics_to_json(report.voting);
    doc["config"] = config_to_json(report.criteria_config, report.voting_config);
    return doc.dump(2) + "\n";
}

namespace {

const std::array<std::string, 3> kTargetNames = {"voting", "refd", "bertropy"};

}  // namespace

const std::string& sweep_target_name(SweepTarget target) {
    return kTargetNames[static_cast<int>(target)];
}

std::vector<double> default_sweep_grid(SweepTarget target) {
    double start = 0.0, step = 0.0, stop = 0.0;
    switch (target) {
        case SweepTarget::Voting: step = 0.02, stop = 0.98; break;
        case SweepTarget::Refd: step = 0.05, stop = 0.95; break;
        case SweepTarget::Bertropy: step = 0.1, stop = 3.0; break;
    }
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double v = std::round((start + i * step) * 1e9) / 1e9;
        if (v > stop + step * 1e-9) {
            break;
        }
        grid.push_back(v);
    }
    return grid;
}

SweepResult sweep(const std::vector<double>& theta_grid, SweepTarget target,
                  const CorpusSnapshot& snap, const LabeledPairSet& gold,
                  const CriteriaConfig& ccfg, const VotingConfig& vcfg) {
    if (theta_grid.empty()) {
        throw ValidationError("sweep grid must not be empty");
    }
    for (double theta : theta_grid) {
        if (!std::isfinite(theta)) {
            throw ValidationError("sweep grid contains a non-finite theta");
        }
        if (target == SweepTarget::Bertropy) {
            if (theta < 0.0) {
                throw ValidationError("bertropy theta must be non-negative");
            }
        } else if (theta < 0.0 || theta >= 1.0) {
            throw ValidationError(sweep_target_name(target) + " theta must lie in [0, 1)");
        }
    }
    ccfg.validate();
    vcfg.validate();

    // Raw scores are cached in the votes; each grid point re-thresholds them.
    std::vector<CriterionVote> votes;
    std::vector<Verdict> gold_verdicts;
    votes.reserve(gold.pairs.size());
    gold_verdicts.reserve(gold.pairs.size());
    for (const auto& g : gold.pairs) {
        votes.push_back(evaluate_all(g.a, g.b, snap, ccfg));
        gold_verdicts.push_back(verdict_from_label(g.label));
    }

    std::vector<double> grid = theta_grid;
    std::sort(grid.begin(), grid.end());

    SweepResult result;
    result.selection_rule = "max precision, ties broken by higher F1, then smaller theta";
    std::size_t best = 0;
    for (double theta : grid) {
        std::vector<std::pair<Verdict, Verdict>> rows;
        rows.reserve(votes.size());
        for (std::size_t i = 0; i < votes.size(); ++i) {
            Verdict pred = Verdict::None;
            switch (target) {
                case SweepTarget::Voting: {
                    VotingConfig cfg = vcfg;
                    cfg.theta = theta;
                    pred = score(votes[i], cfg).verdict;
                    break;
                }
                case SweepTarget::Refd: {
                    if (votes[i].refd) {
                        double v = *votes[i].refd;
                        pred = verdict_from_fires(v > -1.0 && v < -theta,
                                                  -v > -1.0 && -v < -theta);
                    }
                    break;
                }
                case SweepTarget::Bertropy: {
                    if (votes[i].entropy_diff) {
                        double d = *votes[i].entropy_diff;
                        pred = verdict_from_fires(d > theta, -d > theta);
                    }
                    break;
                }
            }
            rows.emplace_back(gold_verdicts[i], pred);
        }
        result.grid.push_back({theta, score_verdicts(rows)});
        const Metrics& cur = result.grid.back().metrics;
        const Metrics& best_m = result.grid[best].metrics;
        if (cur.precision > best_m.precision ||
            (cur.precision == best_m.precision && cur.f1 > best_m.f1)) {
            best = result.grid.size() - 1;
        }
    }
    result.best_theta = result.grid[best].theta;
    return result;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "theta,precision,recall,f1,accuracy\n";
    for (const auto& point : result.grid) {
        out << fmt("%.10g", point.theta) << ',' << fmt("%.6f", point.metrics.precision) << ','
            << fmt("%.6f", point.metrics.recall) << ',' << fmt("%.6f", point.metrics.f1) << ','
            << fmt("%.6f", point.metrics.accuracy) << '\n';
    }
    return out.str();
}

}  // namespace prereq
