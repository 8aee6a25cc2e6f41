#include "dhne/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dhne/errors.hpp"
#include "dhne/linear_feasibility.hpp"

namespace dhne {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

uint64_t pair_key(uint32_t u, uint32_t v) {
    if (u > v) std::swap(u, v);
    return (static_cast<uint64_t>(u) << 32) | v;
}

}  // namespace

std::string EvalReport::to_text() const {
    std::ostringstream out;
    out.precision(6);
    out << "task " << task << "\n";
    out << "auc " << auc << "\n";
    out << "positives " << positives << "\n";
    out << "negatives " << negatives << "\n";
    out << "alpha " << alpha << "\n";
    out << "embed_dim " << embed_dim << "\n";
    if (hide_ratio >= 0.0) out << "hide_ratio " << hide_ratio << "\n";
    out << "seed " << seed << "\n";
    out << "wall_seconds " << wall_seconds << "\n";
    return out.str();
}

std::string EvalReport::to_json_string() const {
    nlohmann::json j{{"task", task},
                     {"auc", auc},
                     {"positives", positives},
                     {"negatives", negatives},
                     {"alpha", alpha},
                     {"embed_dim", embed_dim},
                     {"seed", seed},
                     {"wall_seconds", wall_seconds}};
    if (hide_ratio >= 0.0) j["hide_ratio"] = hide_ratio;
    return j.dump(2);
}

double auc(std::span<const double> positive_scores, std::span<const double> negative_scores) {
    if (positive_scores.empty() || negative_scores.empty()) {
        throw ProtocolError("auc: both score lists must be non-empty");
    }
    for (double s : positive_scores) {
        if (!std::isfinite(s)) throw ProtocolError("auc: non-finite positive score");
    }
    for (double s : negative_scores) {
        if (!std::isfinite(s)) throw ProtocolError("auc: non-finite negative score");
    }
    std::vector<double> sorted_neg(negative_scores.begin(), negative_scores.end());
    std::sort(sorted_neg.begin(), sorted_neg.end());
    // Twice the win count so ties add exactly 1; integers stay exact.
    unsigned long long wins_x2 = 0;
    for (double p : positive_scores) {
        const auto lo = std::lower_bound(sorted_neg.begin(), sorted_neg.end(), p);
        const auto hi = std::upper_bound(lo, sorted_neg.end(), p);
        wins_x2 += 2ULL * static_cast<unsigned long long>(lo - sorted_neg.begin());
        wins_x2 += static_cast<unsigned long long>(hi - lo);
    }
    const double denom =
        2.0 * static_cast<double>(positive_scores.size()) * static_cast<double>(sorted_neg.size());
    return static_cast<double>(wins_x2) / denom;
}

std::vector<std::pair<double, double>> roc_points(std::span<const double> positive_scores,
                                                  std::span<const double> negative_scores) {
    if (positive_scores.empty() || negative_scores.empty()) {
        throw ProtocolError("roc_points: both score lists must be non-empty");
    }
    std::vector<std::pair<double, int>> all;  // (score, is_positive)
    all.reserve(positive_scores.size() + negative_scores.size());
    for (double s : positive_scores) all.emplace_back(s, 1);
    for (double s : negative_scores) all.emplace_back(s, 0);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<std::pair<double, double>> points;
    points.emplace_back(0.0, 0.0);
    const double np = static_cast<double>(positive_scores.size());
    const double nn = static_cast<double>(negative_scores.size());
    size_t tp = 0, fp = 0;
    size_t i = 0;
    while (i < all.size()) {
        const double threshold = all[i].first;
        while (i < all.size() && all[i].first == threshold) {
            if (all[i].second) ++tp;
            else ++fp;
            ++i;
        }
        points.emplace_back(static_cast<double>(fp) / nn, static_cast<double>(tp) / np);
    }
    return points;
}

std::vector<Hyperedge> sample_non_edges(const Hypergraph& g,
                                        const std::function<bool(const Hyperedge&)>& excluded,
                                        size_t count, Rng& rng) {
    std::vector<Hyperedge> out;
    out.reserve(count);
    for (size_t k = 0; k < count; ++k) {
        bool found = false;
        for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
            const Hyperedge candidate =
                make_edge(static_cast<uint32_t>(rng.uniform_index(g.count(0))),
                          static_cast<uint32_t>(rng.uniform_index(g.count(1))),
                          static_cast<uint32_t>(rng.uniform_index(g.count(2))));
            if (excluded(candidate)) continue;
            if (g.contains(candidate)) {
                throw ProtocolError("sample_non_edges: exclusion predicate admitted an edge");
            }
            out.push_back(candidate);
            found = true;
        }
        if (!found) {
            throw ProtocolError("sample_non_edges: no candidates after 1000 tries; "
                                "hypergraph is near-complete");
        }
    }
    return out;
}

namespace {

// Shared scoring protocol: positives vs sampled non-edges.
EvalReport score_protocol(const Hypergraph& g, std::span<const Hyperedge> positive_edges,
                          const std::function<bool(const Hyperedge&)>& excluded,
                          const std::function<double(const Hyperedge&)>& scorer,
                          size_t negatives_per_positive, uint64_t seed,
                          std::vector<std::pair<double, double>>* roc) {
    if (positive_edges.empty()) throw ProtocolError("evaluation requires at least one positive");
    if (negatives_per_positive == 0) throw ProtocolError("negatives_per_positive must be >= 1");
    Rng rng(splitmix64(seed ^ 0x4e454745ULL));  // non-edge sampling stream
    const auto negatives =
        sample_non_edges(g, excluded, positive_edges.size() * negatives_per_positive, rng);

    std::vector<double> pos_scores, neg_scores;
    pos_scores.reserve(positive_edges.size());
    neg_scores.reserve(negatives.size());
    for (const Hyperedge& e : positive_edges) pos_scores.push_back(scorer(e));
    for (const Hyperedge& e : negatives) neg_scores.push_back(scorer(e));

    EvalReport report;
    report.auc = auc(pos_scores, neg_scores);
    report.positives = pos_scores.size();
    report.negatives = neg_scores.size();
    report.seed = seed;
    if (roc) *roc = roc_points(pos_scores, neg_scores);
    return report;
}

}  // namespace

EvalReport reconstruction_eval(const Hypergraph& g, const DhneParams& params,
                               const SparseAdjacency& adj, size_t negatives_per_positive,
                               uint64_t seed, std::vector<std::pair<double, double>>* roc) {
    const auto start = clock_type::now();
    const EmbeddingTable table = compute_embeddings(params, g, adj);
    EvalReport report = score_protocol(
        g, g.edges(), [&](const Hyperedge& e) { return g.contains(e); },
        [&](const Hyperedge& e) { return score_edge(params, table, e); }, negatives_per_positive,
        seed, roc);
    report.task = "reconstruction";
    report.embed_dim = params.dims.embed_dim;
    report.wall_seconds = seconds_since(start);
    return report;
}

EvalReport link_prediction_eval(const Hypergraph& g, double hide_ratio, const TrainConfig& config,
                                uint64_t seed, std::vector<std::pair<double, double>>* roc) {
    const auto start = clock_type::now();
    EdgeSplit split = hide_edges(g, hide_ratio, splitmix64(seed ^ 0x53504c54ULL));
    if (split.held_out.empty()) {
        throw ProtocolError("link prediction: hide_ratio hides zero edges");
    }
    const SparseAdjacency train_adj = build_adjacency(split.train);
    const TrainResult trained = train(split.train, train_adj, config);

    EvalReport report = score_protocol(
        g, split.held_out,
        // Non-edges must avoid the full original edge set (train + held out).
        [&](const Hyperedge& e) { return g.contains(e); },
        [&](const Hyperedge& e) { return score_edge(trained.params, trained.embeddings, e); },
        1, seed, roc);
    report.task = "link_prediction";
    report.alpha = config.alpha;
    report.embed_dim = config.embed_dim;
    report.hide_ratio = hide_ratio;
    report.wall_seconds = seconds_since(start);
    return report;
}

std::vector<EvalReport> sparsity_sweep(const Hypergraph& g, std::span<const double> remained_ratios,
                                       const TrainConfig& config, uint64_t seed) {
    std::vector<EvalReport> reports;
    reports.reserve(remained_ratios.size());
    for (double remained : remained_ratios) {
        if (!(remained > 0.0 && remained < 1.0)) {
            throw ConfigError("remained-edge ratios must lie strictly between 0 and 1");
        }
        reports.push_back(link_prediction_eval(g, 1.0 - remained, config, seed));
        reports.back().task = "sparsity";
    }
    return reports;
}

PairAggregate parse_aggregate(const std::string& name) {
    if (name == "mean") return PairAggregate::kMean;
    if (name == "min") return PairAggregate::kMin;
    throw ConfigError("aggregate mode must be 'mean' or 'min', got '" + name + "'");
}

double aggregate_pairwise_score(std::span<const double> pair_scores, PairAggregate mode) {
    if (pair_scores.size() != 3) {
        throw ProtocolError("aggregate_pairwise_score: expected exactly 3 pair scores, got " +
                            std::to_string(pair_scores.size()));
    }
    for (double s : pair_scores) {
        if (!std::isfinite(s)) throw ProtocolError("aggregate_pairwise_score: non-finite score");
    }
    if (mode == PairAggregate::kMin) {
        return std::min({pair_scores[0], pair_scores[1], pair_scores[2]});
    }
    return (pair_scores[0] + pair_scores[1] + pair_scores[2]) / 3.0;
}

void PairwiseScores::insert(uint32_t u, uint32_t v, double score) {
    scores_[pair_key(u, v)] = score;
}

double PairwiseScores::lookup(uint32_t u, uint32_t v) const {
    const auto it = scores_.find(pair_key(u, v));
    return it == scores_.end() ? 0.0 : it->second;
}

double PairwiseScores::score_edge(const Hypergraph& g, const Hyperedge& e,
                                  PairAggregate mode) const {
    const uint32_t a = g.global_index(e.members[0]);
    const uint32_t b = g.global_index(e.members[1]);
    const uint32_t c = g.global_index(e.members[2]);
    const std::array<double, 3> pair_scores = {lookup(a, b), lookup(a, c), lookup(b, c)};
    return aggregate_pairwise_score(pair_scores, mode);
}

namespace {

// A node token is either a bare label (unique across types) or "type:label".
uint32_t resolve_node(const Hypergraph& g, const std::string& token, const std::string& where) {
    const size_t colon = token.find(':');
    if (colon != std::string::npos) {
        const std::string type_name = token.substr(0, colon);
        const std::string label = token.substr(colon + 1);
        for (uint32_t t = 0; t < 3; ++t) {
            if (g.type_names()[t] != type_name) continue;
            const int64_t idx = g.find_label(t, label);
            if (idx < 0) throw ParseError(where + ": unknown node '" + label + "'");
            return g.global_index(NodeRef{t, static_cast<uint32_t>(idx)});
        }
        throw ParseError(where + ": unknown type '" + type_name + "'");
    }
    int found = 0;
    uint32_t global = 0;
    for (uint32_t t = 0; t < 3; ++t) {
        const int64_t idx = g.find_label(t, token);
        if (idx >= 0) {
            ++found;
            global = g.global_index(NodeRef{t, static_cast<uint32_t>(idx)});
        }
    }
    if (found == 0) throw ParseError(where + ": unknown node '" + token + "'");
    if (found > 1) {
        throw ParseError(where + ": label '" + token +
                         "' is ambiguous across types; qualify it as type:label");
    }
    return global;
}

}  // namespace

PairwiseScores load_pairwise_scores(const std::string& path, const Hypergraph& g) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open pairwise score file: " + path);
    PairwiseScores scores;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string u, v;
        double s = 0.0;
        if (!(fields >> u >> v >> s)) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 'node node score'");
        }
        const std::string where = path + ":" + std::to_string(lineno);
        scores.insert(resolve_node(g, u, where), resolve_node(g, v, where), s);
    }
    return scores;
}

EvalReport reconstruction_eval_pairwise(const Hypergraph& g, const PairwiseScores& scores,
                                        PairAggregate mode, size_t negatives_per_positive,
                                        uint64_t seed) {
    const auto start = clock_type::now();
    EvalReport report = score_protocol(
        g, g.edges(), [&](const Hyperedge& e) { return g.contains(e); },
        [&](const Hyperedge& e) { return scores.score_edge(g, e, mode); }, negatives_per_positive,
        seed, nullptr);
    report.task = "reconstruction_pairwise";
    report.wall_seconds = seconds_since(start);
    return report;
}

double linear_baseline_auc(const Hypergraph& g, std::span<const Hyperedge> positive_edges,
                           std::span<const Hyperedge> negative_edges, size_t iterations) {
    if (positive_edges.empty() || negative_edges.empty()) {
        throw ProtocolError("linear_baseline_auc: candidate lists must be non-empty");
    }
    const size_t n = g.total_nodes();
    std::vector<double> node_score(n, 0.0);
    std::vector<double> grad(n, 0.0);

    std::vector<std::array<uint32_t, 3>> members;
    std::vector<double> labels;
    members.reserve(positive_edges.size() + negative_edges.size());
    auto push = [&](const Hyperedge& e, double label) {
        members.push_back({g.global_index(e.members[0]), g.global_index(e.members[1]),
                           g.global_index(e.members[2])});
        labels.push_back(label);
    };
    for (const Hyperedge& e : positive_edges) push(e, 1.0);
    for (const Hyperedge& e : negative_edges) push(e, 0.0);

    // Full-batch logistic regression on the additive score v_a + v_b + v_c.
    const double lr = 4.0 / static_cast<double>(members.size());
    for (size_t iter = 0; iter < iterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (size_t i = 0; i < members.size(); ++i) {
            const auto& m = members[i];
            const double s = node_score[m[0]] + node_score[m[1]] + node_score[m[2]];
            const double delta = sigmoid_scalar(s) - labels[i];
            grad[m[0]] += delta;
            grad[m[1]] += delta;
            grad[m[2]] += delta;
        }
        for (size_t v = 0; v < n; ++v) node_score[v] -= lr * grad[v];
    }

    std::vector<double> pos_scores, neg_scores;
    pos_scores.reserve(positive_edges.size());
    neg_scores.reserve(negative_edges.size());
    for (size_t i = 0; i < members.size(); ++i) {
        const auto& m = members[i];
        const double s = node_score[m[0]] + node_score[m[1]] + node_score[m[2]];
        (labels[i] == 1.0 ? pos_scores : neg_scores).push_back(s);
    }
    return auc(pos_scores, neg_scores);
}

TheoremOracleResult linear_infeasibility_oracle(const LinearFeasibilityProblem& problem) {
    if (!std::isfinite(problem.positive_floor) || !std::isfinite(problem.negative_ceiling) ||
        !std::isfinite(problem.weight_bound) || !std::isfinite(problem.embedding_bound)) {
        throw ConfigError("feasibility thresholds and bounds must be finite");
    }
    if (problem.weight_bound <= 0.0 || problem.embedding_bound <= 0.0) {
        throw ConfigError("feasibility bounds must be positive");
    }

    // Variables are the six products c[t][i] = w_t * y_i^t (t = type, i =
    // cluster); the similarity of a cluster pattern (i, j, k) is
    // c[0][i] + c[1][j] + c[2][k]. The four pattern constraints are linear in
    // these products, and any feasible products factor back into w and y, so
    // nothing is lost by the substitution.
    const double l = problem.positive_floor;
    const double s = problem.negative_ceiling;
    const double product_bound = problem.weight_bound * problem.embedding_bound;

    LinearSystem system;
    auto add_row = [&](std::array<double, 6> coeff, double bound) {
        system.lhs.emplace_back(coeff.begin(), coeff.end());
        system.rhs.push_back(bound);
    };
    // Same-cluster patterns score above l, the two mixed patterns from the
    // contradiction argument score below s; margin makes the inequalities
    // strict. Variable order: c[0][0], c[0][1], c[1][0], c[1][1], c[2][0], c[2][1].
    add_row({-1, 0, -1, 0, -1, 0}, -(l + kTheoremMargin));  // (0,0,0) >= l + eps
    add_row({0, 1, 1, 0, 1, 0}, s - kTheoremMargin);        // (1,0,0) <= s - eps
    add_row({0, -1, 0, -1, 0, -1}, -(l + kTheoremMargin));  // (1,1,1) >= l + eps
    add_row({1, 0, 0, 1, 0, 1}, s - kTheoremMargin);        // (0,1,1) <= s - eps
    for (size_t v = 0; v < 6; ++v) {
        std::array<double, 6> up{}, down{};
        up[v] = 1.0;
        down[v] = -1.0;
        add_row(up, product_bound);
        add_row(down, product_bound);
    }

    const FeasibilityResult fr = solve_linear_feasibility(system);
    TheoremOracleResult result;
    result.feasible = fr.feasible;
    if (!fr.feasible) {
        result.infeasibility_certificate = fr.certificate;
        return result;
    }

    // Factor products into weights and cluster embeddings within their bounds.
    TheoremWitness witness;
    const double ratio = std::sqrt(problem.weight_bound / problem.embedding_bound);
    for (int t = 0; t < 3; ++t) {
        const double c0 = fr.point[2 * t];
        const double c1 = fr.point[2 * t + 1];
        const double magnitude = std::max(std::abs(c0), std::abs(c1));
        const double w = magnitude > 0.0 ? std::sqrt(magnitude) * ratio : 1.0;
        witness.weights[t] = w;
        witness.cluster_embeddings[t] = {c0 / w, c1 / w};
    }
    result.witness = witness;
    return result;
}

std::vector<TimingPoint> timing_benchmark(std::span<const size_t> sizes, const TrainConfig& config,
                                          size_t warmup_batches, size_t timed_batches) {
    if (sizes.size() < 2) throw ConfigError("timing benchmark needs at least 2 sizes");
    if (timed_batches == 0) throw ConfigError("timing benchmark needs timed batches");
    std::vector<TimingPoint> points;
    points.reserve(sizes.size());
    for (size_t target_nodes : sizes) {
        const uint32_t per_type = static_cast<uint32_t>(std::max<size_t>(target_nodes / 3, 4));
        const uint32_t edges = static_cast<uint32_t>(2 * target_nodes);
        const Hypergraph g =
            synthesize_planted(per_type, 4, edges, 0.05, splitmix64(config.seed ^ target_nodes));
        const SparseAdjacency adj = build_adjacency(g);
        std::vector<double> seconds =
            measure_batch_seconds(g, adj, config, warmup_batches, timed_batches);
        std::sort(seconds.begin(), seconds.end());
        const double median = seconds[seconds.size() / 2];
        points.push_back(TimingPoint{g.total_nodes(), median});
    }
    return points;
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ConfigError("fit_line needs matching lists with at least 2 points");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ConfigError("fit_line: degenerate x values");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double pred = fit.slope * xs[i] + fit.intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace dhne
