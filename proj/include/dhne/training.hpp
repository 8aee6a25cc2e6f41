#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dhne/hypergraph.hpp"
#include "dhne/model.hpp"
#include "dhne/rng.hpp"

namespace dhne {

struct TrainConfig {
    size_t embed_dim = 64;
    double alpha = 1.0;
    double initial_lr = 0.025;
    size_t batch_size = 64;
    size_t epochs = 100;
    size_t negatives_per_positive = 5;
    double noise_exponent = 0.75;
    uint64_t seed = 1;
    // Early stop when the relative epoch-loss change falls below this; <= 0
    // disables early stopping and the full epoch budget runs.
    double convergence_tol = 1e-4;

    void validate() const;
};

// Degree-biased corruption sampler: replaces one uniformly chosen position of
// a positive edge with a node of the same type drawn with probability
// proportional to degree^noise_exponent, rejecting corrupted triples that are
// themselves edges.
class NegativeSampler {
  public:
    NegativeSampler(const Hypergraph& g, double noise_exponent);

    // Throws SamplingError after 100 rejected tries (near-complete hypergraph).
    Hyperedge sample(const Hyperedge& positive, Rng& rng) const;

  private:
    const Hypergraph* graph_;
    std::array<std::vector<double>, 3> cumulative_;

    uint32_t draw_node(uint32_t type, Rng& rng) const;
};

// Linear decay from the starting value, floored at initial_lr * 1e-4.
double lr_at(const TrainConfig& config, size_t iteration, size_t total_iterations);

// Assembles one SGD batch: each positive contributes one label-1 item plus
// negatives_per_positive label-0 corruptions.
std::vector<TupleBatchItem> make_batch(const Hypergraph& g, const SparseAdjacency& adj,
                                       std::span<const Hyperedge> positives,
                                       const NegativeSampler& sampler,
                                       size_t negatives_per_positive, Rng& rng);

// Initial parameters exactly as train() derives them from the config seed.
DhneParams initial_params(const Hypergraph& g, const TrainConfig& config);

struct TrainResult {
    DhneParams params;
    EmbeddingTable embeddings;
    std::vector<double> epoch_losses;
};

struct TrainHooks {
    std::function<void(size_t epoch, double mean_loss)> on_epoch;
    std::function<void(size_t iteration, std::span<const Hyperedge> positives, double batch_loss)>
        on_batch;
};

// Runs the SGD loop: per epoch, positives are shuffled without replacement and
// consumed in batches; fully deterministic for a fixed seed.
TrainResult train(const Hypergraph& g, const SparseAdjacency& adj, const TrainConfig& config,
                  const TrainHooks& hooks = {});

// Seconds per SGD step (batch assembly + gradients + update) after warmup.
std::vector<double> measure_batch_seconds(const Hypergraph& g, const SparseAdjacency& adj,
                                          const TrainConfig& config, size_t warmup_batches,
                                          size_t timed_batches);

}  // namespace dhne
