#include "dhne/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dhne/errors.hpp"

namespace dhne {

void TrainConfig::validate() const {
    if (embed_dim == 0) throw ConfigError("embed_dim must be >= 1");
    if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
    if (initial_lr <= 0.0) throw ConfigError("initial learning rate must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (negatives_per_positive == 0) throw ConfigError("negatives_per_positive must be >= 1");
    if (noise_exponent < 0.0) throw ConfigError("noise_exponent must be nonnegative");
}

NegativeSampler::NegativeSampler(const Hypergraph& g, double noise_exponent) : graph_(&g) {
    std::array<std::vector<uint32_t>, 3> degrees;
    for (uint32_t t = 0; t < 3; ++t) degrees[t].assign(g.count(t), 0);
    for (const Hyperedge& e : g.edges()) {
        for (uint32_t t = 0; t < 3; ++t) degrees[t][e.members[t].index] += 1;
    }
    for (uint32_t t = 0; t < 3; ++t) {
        cumulative_[t].resize(g.count(t));
        double running = 0.0;
        for (uint32_t i = 0; i < g.count(t); ++i) {
            running += std::pow(static_cast<double>(degrees[t][i]), noise_exponent);
            cumulative_[t][i] = running;
        }
        if (running <= 0.0) {
            // No positive weight (all degrees zero with a positive exponent):
            // fall back to uniform so a draw is still well defined.
            for (uint32_t i = 0; i < g.count(t); ++i) {
                cumulative_[t][i] = static_cast<double>(i + 1);
            }
        }
    }
}

uint32_t NegativeSampler::draw_node(uint32_t type, Rng& rng) const {
    const auto& cum = cumulative_[type];
    const double target = rng.uniform() * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const size_t idx = std::min<size_t>(it - cum.begin(), cum.size() - 1);
    return static_cast<uint32_t>(idx);
}

Hyperedge NegativeSampler::sample(const Hyperedge& positive, Rng& rng) const {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const uint32_t slot = static_cast<uint32_t>(rng.uniform_index(3));
        Hyperedge candidate = positive;
        candidate.members[slot].index = draw_node(slot, rng);
        if (!graph_->contains(candidate)) return candidate;
    }
    throw SamplingError("negative sampling exhausted after 100 tries; hypergraph is near-complete");
}

double lr_at(const TrainConfig& config, size_t iteration, size_t total_iterations) {
    if (total_iterations == 0) throw ConfigError("lr_at: total_iterations must be >= 1");
    const double progress = static_cast<double>(iteration) / static_cast<double>(total_iterations);
    const double lr = config.initial_lr * (1.0 - progress);
    return std::max(lr, config.initial_lr * 1e-4);
}

std::vector<TupleBatchItem> make_batch(const Hypergraph& g, const SparseAdjacency& adj,
                                       std::span<const Hyperedge> positives,
                                       const NegativeSampler& sampler,
                                       size_t negatives_per_positive, Rng& rng) {
    std::vector<TupleBatchItem> batch;
    batch.reserve(positives.size() * (1 + negatives_per_positive));
    auto rows_of = [&](const Hyperedge& e) {
        std::array<Vector, 3> rows;
        for (uint32_t t = 0; t < 3; ++t) rows[t] = adj.dense_row(g.global_index(e.members[t]));
        return rows;
    };
    for (const Hyperedge& pos : positives) {
        batch.push_back(TupleBatchItem{rows_of(pos), 1.0});
        for (size_t k = 0; k < negatives_per_positive; ++k) {
            const Hyperedge neg = sampler.sample(pos, rng);
            batch.push_back(TupleBatchItem{rows_of(neg), 0.0});
        }
    }
    return batch;
}

DhneParams initial_params(const Hypergraph& g, const TrainConfig& config) {
    const DhneDims dims(g.total_nodes(), config.embed_dim);
    return DhneParams::init(dims, splitmix64(config.seed ^ 0x494e4954ULL));  // "INIT"
}

TrainResult train(const Hypergraph& g, const SparseAdjacency& adj, const TrainConfig& config,
                  const TrainHooks& hooks) {
    config.validate();
    if (g.num_edges() == 0) throw ConfigError("training requires at least one hyperedge");

    TrainResult result;
    result.params = initial_params(g, config);

    Rng shuffle_rng(splitmix64(config.seed ^ 0x53485546ULL));  // "SHUF"
    Rng negative_rng(splitmix64(config.seed ^ 0x4e454753ULL));  // "NEGS"
    const NegativeSampler sampler(g, config.noise_exponent);

    const size_t num_edges = g.num_edges();
    const size_t batches_per_epoch = (num_edges + config.batch_size - 1) / config.batch_size;
    const size_t total_iterations = config.epochs * batches_per_epoch;

    std::vector<Hyperedge> order = g.edges();
    std::vector<Hyperedge> positives;
    size_t iteration = 0;
    for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (size_t start = 0; start < num_edges; start += config.batch_size) {
            const size_t count = std::min(config.batch_size, num_edges - start);
            positives.assign(order.begin() + start, order.begin() + start + count);
            const auto batch =
                make_batch(g, adj, positives, sampler, config.negatives_per_positive, negative_rng);
            BatchGradients bg;
            try {
                bg = gradients(result.params, batch, config.alpha);
            } catch (const NumericError& e) {
                throw NumericError("training diverged at iteration " + std::to_string(iteration) +
                                   ": " + e.what());
            }
            if (!std::isfinite(bg.mean_loss)) {
                throw NumericError("training diverged at iteration " + std::to_string(iteration));
            }
            const double lr = lr_at(config, iteration, total_iterations);
            result.params.add_scaled(bg.grads, -lr);
            epoch_loss += bg.mean_loss;
            if (hooks.on_batch) hooks.on_batch(iteration, positives, bg.mean_loss);
            ++iteration;
        }
        epoch_loss /= static_cast<double>(batches_per_epoch);
        result.epoch_losses.push_back(epoch_loss);
        if (hooks.on_epoch) hooks.on_epoch(epoch, epoch_loss);
        if (config.convergence_tol > 0.0 && epoch > 0) {
            const double prev = result.epoch_losses[epoch - 1];
            const double rel = std::abs(prev - epoch_loss) / std::max(std::abs(prev), 1e-12);
            if (rel < config.convergence_tol) break;
        }
    }

    result.embeddings = compute_embeddings(result.params, g, adj);
    return result;
}

std::vector<double> measure_batch_seconds(const Hypergraph& g, const SparseAdjacency& adj,
                                          const TrainConfig& config, size_t warmup_batches,
                                          size_t timed_batches) {
    config.validate();
    if (g.num_edges() == 0) throw ConfigError("benchmark requires at least one hyperedge");
    using clock = std::chrono::steady_clock;

    DhneParams params = initial_params(g, config);
    Rng shuffle_rng(splitmix64(config.seed ^ 0x53485546ULL));
    Rng negative_rng(splitmix64(config.seed ^ 0x4e454753ULL));
    const NegativeSampler sampler(g, config.noise_exponent);

    std::vector<Hyperedge> order = g.edges();
    shuffle_rng.shuffle(order);
    size_t cursor = 0;
    auto next_positives = [&]() {
        std::vector<Hyperedge> out;
        out.reserve(config.batch_size);
        for (size_t i = 0; i < config.batch_size; ++i) {
            if (cursor == order.size()) {
                cursor = 0;
                shuffle_rng.shuffle(order);
            }
            out.push_back(order[cursor++]);
        }
        return out;
    };

    const size_t total = warmup_batches + timed_batches;
    std::vector<double> seconds;
    seconds.reserve(timed_batches);
    const double lr = config.initial_lr;
    for (size_t i = 0; i < total; ++i) {
        const auto t0 = clock::now();
        const auto positives = next_positives();
        const auto batch =
            make_batch(g, adj, positives, sampler, config.negatives_per_positive, negative_rng);
        BatchGradients bg = gradients(params, batch, config.alpha);
        params.add_scaled(bg.grads, -lr);
        const auto t1 = clock::now();
        if (i >= warmup_batches) {
            seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
    }
    return seconds;
}

}  // namespace dhne
