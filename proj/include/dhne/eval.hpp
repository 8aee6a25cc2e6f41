#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dhne/hypergraph.hpp"
#include "dhne/model.hpp"
#include "dhne/rng.hpp"
#include "dhne/training.hpp"

namespace dhne {

struct EvalReport {
    std::string task;
    double auc = 0.0;
    size_t positives = 0;
    size_t negatives = 0;
    double alpha = 0.0;
    size_t embed_dim = 0;
    double hide_ratio = -1.0;  // negative when not applicable
    uint64_t seed = 0;
    double wall_seconds = 0.0;

    std::string to_text() const;
    std::string to_json_string() const;
};

// Probability that a random positive outscores a random negative, ties at 1/2.
// Computed by ranking against the sorted negatives; exact (integer counting).
double auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

// (false positive rate, true positive rate) pairs swept over score thresholds,
// from (0,0) to (1,1), for external plotting.
std::vector<std::pair<double, double>> roc_points(std::span<const double> positive_scores,
                                                  std::span<const double> negative_scores);

// Uniform type-consistent triples for which excluded() is false. Throws
// ProtocolError when candidates cannot be found (near-complete hypergraph).
std::vector<Hyperedge> sample_non_edges(const Hypergraph& g,
                                        const std::function<bool(const Hyperedge&)>& excluded,
                                        size_t count, Rng& rng);

// Scores every edge of g against sampled non-edges with the given parameters.
EvalReport reconstruction_eval(const Hypergraph& g, const DhneParams& params,
                               const SparseAdjacency& adj, size_t negatives_per_positive,
                               uint64_t seed,
                               std::vector<std::pair<double, double>>* roc = nullptr);

// Hides a share of edges, trains on the remainder, and scores held-out edges
// against non-edges sampled outside the full original edge set.
EvalReport link_prediction_eval(const Hypergraph& g, double hide_ratio, const TrainConfig& config,
                                uint64_t seed,
                                std::vector<std::pair<double, double>>* roc = nullptr);

// One link-prediction run per remained-edge ratio (hide = 1 - ratio).
std::vector<EvalReport> sparsity_sweep(const Hypergraph& g, std::span<const double> remained_ratios,
                                       const TrainConfig& config, uint64_t seed);

enum class PairAggregate { kMean, kMin };

PairAggregate parse_aggregate(const std::string& name);

// Collapses the 3 pairwise similarities of a candidate triple into one score.
double aggregate_pairwise_score(std::span<const double> pair_scores, PairAggregate mode);

// Pairwise similarity table keyed by unordered global node pairs, loaded from
// "node node score" lines; missing pairs score 0.
class PairwiseScores {
  public:
    void insert(uint32_t u, uint32_t v, double score);
    double lookup(uint32_t u, uint32_t v) const;
    double score_edge(const Hypergraph& g, const Hyperedge& e, PairAggregate mode) const;
    size_t size() const { return scores_.size(); }

  private:
    std::unordered_map<uint64_t, double> scores_;
};

PairwiseScores load_pairwise_scores(const std::string& path, const Hypergraph& g);

// Reconstruction protocol scored by aggregated third-party pairwise scores
// instead of the model, over the identical candidate distribution.
EvalReport reconstruction_eval_pairwise(const Hypergraph& g, const PairwiseScores& scores,
                                        PairAggregate mode, size_t negatives_per_positive,
                                        uint64_t seed);

// Best additive (per-node score) fit of the candidate labels, evaluated by
// AUC over the same candidates. Any scorer of the form sum_t w_t x_t over
// fixed embeddings reduces to such per-node scores, and mean-aggregating
// linear pairwise scores is a monotone transform of the same quantity, so
// this is the strongest linear baseline for the separability check.
double linear_baseline_auc(const Hypergraph& g, std::span<const Hyperedge> positive_edges,
                           std::span<const Hyperedge> negative_edges, size_t iterations = 800);

// Feasibility oracle for the four-inequality system behind the linear
// similarity impossibility argument: edges must score above positive_floor,
// non-edges below negative_ceiling, with per-factor magnitude bounds.
struct LinearFeasibilityProblem {
    double positive_floor = 0.6;    // scores of edges must exceed this
    double negative_ceiling = 0.4;  // scores of non-edges must stay below this
    double weight_bound = 10.0;
    double embedding_bound = 10.0;
};

struct TheoremWitness {
    std::array<double, 3> weights;
    std::array<std::array<double, 2>, 3> cluster_embeddings;  // [type][cluster]
};

struct TheoremOracleResult {
    bool feasible = false;
    std::optional<TheoremWitness> witness;
    std::vector<double> infeasibility_certificate;  // Farkas multipliers
};

inline constexpr double kTheoremMargin = 1e-6;

TheoremOracleResult linear_infeasibility_oracle(const LinearFeasibilityProblem& problem);

// Per-batch training seconds across planted graphs of increasing size.
struct TimingPoint {
    size_t num_nodes = 0;
    double seconds_per_batch = 0.0;
};

std::vector<TimingPoint> timing_benchmark(std::span<const size_t> sizes, const TrainConfig& config,
                                          size_t warmup_batches = 3, size_t timed_batches = 20);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace dhne
