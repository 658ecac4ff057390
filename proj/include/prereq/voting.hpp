#ifndef PREREQ_VOTING_HPP
#define PREREQ_VOTING_HPP

#include <array>
#include <set>
#include <string>
#include <vector>

#include "prereq/corpus.hpp"
#include "prereq/criteria.hpp"

namespace prereq {

enum class Verdict { Forward, Backward, None };

const std::string& verdict_name(Verdict v);

struct VotingConfig {
    double theta = 0.28;
    std::array<double, kCriterionCount> weights = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    bool transitive_closure = false;

    // theta in [0, 1); weights non-negative with a positive sum. Zero is
    // accepted so threshold sweeps can start their grid there.
    void validate() const;
};

// Verdict for one unordered pair. With unit weights s_init is the integer
// difference of fired-criteria counts and s_new is exactly s_init / 10.
struct PrDecision {
    std::pair<ConceptId, ConceptId> pair;
    double s_init = 0.0;
    double s_new = 0.0;
    Verdict verdict = Verdict::None;
};

// Directed prerequisite edges (prereq, dependent). At most one of (a,b) and
// (b,a) is ever present. Cycles are reported, never repaired.
struct PrGraph {
    std::set<std::pair<ConceptId, ConceptId>> edges;
    std::vector<std::vector<ConceptId>> cycle_report;
};

// s_init = sum(w*a1) - sum(w*a2), rescaled into [-1,1] by the full weight
// range; verdict is Forward above theta, Backward below -theta, None inside
// the closed band.
PrDecision score(const CriterionVote& vote, const VotingConfig& cfg);

struct InferenceResult {
    PrGraph graph;
    std::vector<CriterionVote> votes;      // one per unordered pair, sorted
    std::vector<PrDecision> decisions;     // parallel to votes
};

// Evaluates every unordered pair once and assembles the edge set. With
// transitive_closure set, reachability edges are added unless they would
// contradict an existing opposite edge. jobs > 1 fans the pair evaluation out
// across threads; the output is identical regardless.
InferenceResult infer_graph(const CorpusSnapshot& snap, const CriteriaConfig& ccfg,
                            const VotingConfig& vcfg, int jobs = 1);

enum class ExportFormat { EdgeCsv, Dot };

void export_graph(const PrGraph& graph, const std::filesystem::path& path, ExportFormat format);
std::string graph_to_string(const PrGraph& graph, ExportFormat format);

// All elementary cycles of the edge set, each reported once starting from its
// lexicographically smallest node.
std::vector<std::vector<ConceptId>> find_cycles(
    const std::set<std::pair<ConceptId, ConceptId>>& edges);

}  // namespace prereq

#endif  // PREREQ_VOTING_HPP
