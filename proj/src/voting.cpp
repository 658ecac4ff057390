#include "prereq/voting.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace prereq {

namespace {

const std::array<std::string, 3> kVerdictNames = {"Forward", "Backward", "None"};

}  // namespace

const std::string& verdict_name(Verdict v) {
    return kVerdictNames[static_cast<int>(v)];
}

void VotingConfig::validate() const {
    if (!(theta >= 0.0 && theta < 1.0)) {
        throw ValidationError("voting theta must lie in [0, 1)");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ValidationError("criterion weights must be finite and non-negative");
        }
        sum += w;
    }
    if (sum <= 0.0) {
        throw ValidationError("criterion weights must not all be zero");
    }
}

PrDecision score(const CriterionVote& vote, const VotingConfig& cfg) {
    double sum1 = 0.0, sum2 = 0.0, weight_range = 0.0;
    for (int k = 0; k < kCriterionCount; ++k) {
        weight_range += cfg.weights[k];
        if (vote.a1[k]) sum1 += cfg.weights[k];
        if (vote.a2[k]) sum2 += cfg.weights[k];
    }
    PrDecision d;
    d.pair = vote.pair;
    d.s_init = sum1 - sum2;
    // Equivalent to 2*((s - min)/(max - min)) - 1 with max = -min = sum of
    // weights; the direct quotient keeps integer sums exact in s/10 form.
    d.s_new = d.s_init / weight_range;
    if (d.s_new > cfg.theta) {
        d.verdict = Verdict::Forward;
    } else if (d.s_new < -cfg.theta) {
        d.verdict = Verdict::Backward;
    } else {
        d.verdict = Verdict::None;
    }
    return d;
}

namespace {

// Johnson-style enumeration of elementary circuits. Each cycle is discovered
// exactly once, rooted at its smallest node in the sorted node order.
class CycleFinder {
public:
    explicit CycleFinder(const std::set<std::pair<ConceptId, ConceptId>>& edges) {
        std::set<ConceptId> node_set;
        for (const auto& [u, v] : edges) {
            node_set.insert(u);
            node_set.insert(v);
        }
        nodes_.assign(node_set.begin(), node_set.end());
        std::map<ConceptId, int> index;
        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
            index[nodes_[i]] = i;
        }
        adj_.resize(nodes_.size());
        for (const auto& [u, v] : edges) {
            adj_[index[u]].push_back(index[v]);
        }
    }

    std::vector<std::vector<ConceptId>> run() {
        const int n = static_cast<int>(nodes_.size());
        blocked_.assign(n, false);
        block_map_.assign(n, {});
        for (root_ = 0; root_ < n; ++root_) {
            // Only nodes >= root_ participate; the root's strongly connected
            // component is found on the fly by the DFS restriction below.
            std::fill(blocked_.begin(), blocked_.end(), false);
            for (auto& b : block_map_) b.clear();
            circuit(root_);
        }
        return std::move(cycles_);
    }

private:
    bool circuit(int v) {
        bool found = false;
        stack_.push_back(v);
        blocked_[v] = true;
        for (int w : adj_[v]) {
            if (w < root_) {
                continue;
            }
            if (w == root_) {
                std::vector<ConceptId> cycle;
                cycle.reserve(stack_.size());
                for (int node : stack_) {
                    cycle.push_back(nodes_[node]);
                }
                cycles_.push_back(std::move(cycle));
                found = true;
            } else if (!blocked_[w] && circuit(w)) {
                found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : adj_[v]) {
                if (w >= root_) {
                    block_map_[w].push_back(v);
                }
            }
        }
        stack_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[v] = false;
        auto pending = std::move(block_map_[v]);
        block_map_[v].clear();
        for (int w : pending) {
            if (blocked_[w]) {
                unblock(w);
            }
        }
    }

    std::vector<ConceptId> nodes_;
    std::vector<std::vector<int>> adj_;
    std::vector<bool> blocked_;
    std::vector<std::vector<int>> block_map_;
    std::vector<int> stack_;
    std::vector<std::vector<ConceptId>> cycles_;
    int root_ = 0;
};

}  // namespace

std::vector<std::vector<ConceptId>> find_cycles(
    const std::set<std::pair<ConceptId, ConceptId>>& edges) {
    return CycleFinder(edges).run();
}

namespace {

std::set<std::pair<ConceptId, ConceptId>> close_transitively(
    const std::set<std::pair<ConceptId, ConceptId>>& base) {
    std::map<ConceptId, std::set<ConceptId>> adj;
    std::set<ConceptId> nodes;
    for (const auto& [u, v] : base) {
        adj[u].insert(v);
        nodes.insert(u);
        nodes.insert(v);
    }

    // reachability per node, iterative DFS
    std::set<std::pair<ConceptId, ConceptId>> candidates;
    for (const auto& start : nodes) {
        std::set<ConceptId> seen;
        std::vector<ConceptId> work(adj[start].begin(), adj[start].end());
        while (!work.empty()) {
            ConceptId cur = work.back();
            work.pop_back();
            if (!seen.insert(cur).second) {
                continue;
            }
            for (const auto& next : adj[cur]) {
                work.push_back(next);
            }
        }
        for (const auto& target : seen) {
            if (target != start && base.count({start, target}) == 0) {
                candidates.insert({start, target});
            }
        }
    }

    // A closure edge is dropped when the opposite direction already exists,
    // either as a verdict edge or as another closure candidate.
    std::set<std::pair<ConceptId, ConceptId>> result = base;
    for (const auto& [u, v] : candidates) {
        if (base.count({v, u}) != 0 || candidates.count({v, u}) != 0) {
            continue;
        }
        result.insert({u, v});
    }
    return result;
}

}  // namespace

InferenceResult infer_graph(const CorpusSnapshot& snap, const CriteriaConfig& ccfg,
                            const VotingConfig& vcfg, int jobs) {
    ccfg.validate();
    vcfg.validate();

    auto pairs = concept_pairs(snap);
    InferenceResult result;
    result.votes.resize(pairs.size());
    result.decisions.resize(pairs.size());

    jobs = std::max(1, jobs);
    std::size_t workers = std::min<std::size_t>(jobs, std::max<std::size_t>(pairs.size(), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            result.votes[i] = evaluate_all(pairs[i].first, pairs[i].second, snap, ccfg);
            result.decisions[i] = score(result.votes[i], vcfg);
        }
    } else {
        std::vector<std::thread> threads;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (std::size_t t = 0; t < workers; ++t) {
            threads.emplace_back([&, t]() {
                try {
                    for (std::size_t i = t; i < pairs.size(); i += workers) {
                        result.votes[i] = evaluate_all(pairs[i].first, pairs[i].second, snap, ccfg);
                        result.decisions[i] = score(result.votes[i], vcfg);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : threads) {
            th.join();
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
    }

    for (const auto& d : result.decisions) {
        if (d.verdict == Verdict::Forward) {
            result.graph.edges.insert({d.pair.first, d.pair.second});
        } else if (d.verdict == Verdict::Backward) {
            result.graph.edges.insert({d.pair.second, d.pair.first});
        }
    }
    if (vcfg.transitive_closure) {
        result.graph.edges = close_transitively(result.graph.edges);
    }
    result.graph.cycle_report = find_cycles(result.graph.edges);
    return result;
}

namespace {

std::string dot_escape(const ConceptId& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string graph_to_string(const PrGraph& graph, ExportFormat format) {
    std::ostringstream out;
    if (format == ExportFormat::EdgeCsv) {
        out << "prereq,dependent\n";
        for (const auto& [u, v] : graph.edges) {
            out << u << ',' << v << '\n';
        }
    } else {
        out << "digraph prerequisites {\n";
        for (const auto& [u, v] : graph.edges) {
            out << "  \"" << dot_escape(u) << "\" -> \"" << dot_escape(v) << "\";\n";
        }
        out << "}\n";
    }
    return out.str();
}

void export_graph(const PrGraph& graph, const std::filesystem::path& path, ExportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open file for writing: " + path.string());
    }
    out << graph_to_string(graph, format);
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace prereq
