#ifndef PREREQ_EVALUATION_HPP
#define PREREQ_EVALUATION_HPP

#include <map>
#include <string>
#include <vector>

#include "prereq/corpus.hpp"
#include "prereq/criteria.hpp"
#include "prereq/voting.hpp"

namespace prereq {

// Counted over directed assertions: a gold label of 1 or -1 is one positive
// directed assertion. A prediction in the wrong direction costs both a false
// positive and a false negative; a decisive prediction on a gold 0 is a false
// positive; mutual None/0 is a true negative.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    bool operator==(const ConfusionCounts&) const = default;
};

// 0/0 ratios resolve to 0 by convention.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    ConfusionCounts counts;
    std::uint64_t pairs = 0;
    std::uint64_t exact_matches = 0;
    std::uint64_t positive_predictions = 0;  // verdicts other than None
};

Metrics metrics_from_tally(const ConfusionCounts& counts, std::uint64_t pairs,
                           std::uint64_t exact_matches, std::uint64_t positive_predictions);

// Scores an ordered list of (gold verdict, predicted verdict) pairs, both
// expressed relative to the same canonical pair orientation.
Metrics score_verdicts(const std::vector<std::pair<Verdict, Verdict>>& gold_vs_predicted);

Verdict verdict_from_label(int label);

struct EvalReport {
    std::map<CriterionId, Metrics> per_criterion;
    Metrics voting;
    CriteriaConfig criteria_config;
    VotingConfig voting_config;
};

// Voting entry only: scores existing decisions against gold labels. Every
// gold pair must have a decision; extra decisions are ignored.
Metrics evaluate(const std::vector<PrDecision>& predictions, const LabeledPairSet& gold);

// Criterion k alone as a 3-class predictor: Forward when it fires on (a,b)
// only, Backward when on (b,a) only, None otherwise (including mutual fires,
// which are uninformative).
Metrics evaluate_criterion(CriterionId k, const CorpusSnapshot& snap, const LabeledPairSet& gold,
                           const CriteriaConfig& ccfg);

// Full report: all ten criteria plus the voting aggregate.
EvalReport evaluate_report(const CorpusSnapshot& snap, const LabeledPairSet& gold,
                           const CriteriaConfig& ccfg, const VotingConfig& vcfg, int jobs = 1);

std::string report_to_text(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

enum class SweepTarget { Voting, Refd, Bertropy };

const std::string& sweep_target_name(SweepTarget target);

struct SweepPoint {
    double theta = 0.0;
    Metrics metrics;
};

struct SweepResult {
    std::vector<SweepPoint> grid;  // sorted by theta
    double best_theta = 0.0;
    std::string selection_rule;
};

// Re-thresholds cached raw scores across the grid; the corpus is read once.
// best_theta maximizes precision, ties broken by higher F1 then smaller theta.
SweepResult sweep(const std::vector<double>& theta_grid, SweepTarget target,
                  const CorpusSnapshot& snap, const LabeledPairSet& gold,
                  const CriteriaConfig& ccfg, const VotingConfig& vcfg);

std::vector<double> default_sweep_grid(SweepTarget target);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace prereq

#endif  // PREREQ_EVALUATION_HPP
