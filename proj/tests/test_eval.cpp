#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "dhne/errors.hpp"
#include "dhne/eval.hpp"
#include "dhne/linear_feasibility.hpp"

using namespace dhne;

namespace {

// Quadratic-time reference: count positive-negative pairs directly.
double auc_by_enumeration(const std::vector<double>& pos, const std::vector<double>& neg) {
    unsigned long long wins_x2 = 0;
    for (double p : pos) {
        for (double n : neg) {
            if (p > n) wins_x2 += 2;
            else if (p == n) wins_x2 += 1;
        }
    }
    return static_cast<double>(wins_x2) / (2.0 * pos.size() * neg.size());
}

TrainConfig quick_config(size_t epochs) {
    TrainConfig cfg;
    cfg.embed_dim = 8;
    cfg.batch_size = 16;
    cfg.epochs = epochs;
    cfg.negatives_per_positive = 3;
    cfg.initial_lr = 1.0;
    cfg.alpha = 0.02;
    cfg.seed = 11;
    cfg.convergence_tol = 0.0;
    return cfg;
}

}  // namespace

TEST_CASE("auc fixed examples") {
    CHECK(auc(std::vector<double>{0.9}, std::vector<double>{0.1}) == 1.0);
    // 4 pairs, 3 wins.
    CHECK(auc(std::vector<double>{0.8, 0.6}, std::vector<double>{0.7, 0.1}) == 0.75);
    CHECK(auc(std::vector<double>{0.5}, std::vector<double>{0.5}) == 0.5);
    CHECK_THROWS_AS(auc(std::vector<double>{}, std::vector<double>{0.5}), ProtocolError);
    CHECK_THROWS_AS(auc(std::vector<double>{0.5}, std::vector<double>{}), ProtocolError);
}

TEST_CASE("auc equals brute-force enumeration on random score sets") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t np = 1 + rng.uniform_index(30);
        const size_t nn = 1 + rng.uniform_index(30);
        std::vector<double> pos(np), neg(nn);
        // Coarse grid scores force plenty of ties.
        for (double& v : pos) v = std::floor(rng.uniform() * 8.0) / 8.0;
        for (double& v : neg) v = std::floor(rng.uniform() * 8.0) / 8.0;
        CHECK(auc(pos, neg) == auc_by_enumeration(pos, neg));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    Rng rng(66);
    std::vector<double> pos(40), neg(50);
    for (double& v : pos) v = rng.uniform(-2.0, 2.0);
    for (double& v : neg) v = rng.uniform(-3.0, 1.5);
    const double base = auc(pos, neg);
    auto transform = [](std::vector<double> v) {
        for (double& x : v) x = std::exp(0.5 * x) + 3.0;
        return v;
    };
    CHECK(auc(transform(pos), transform(neg)) == base);
}

TEST_CASE("roc points run from origin to (1,1) monotonically") {
    std::vector<double> pos = {0.9, 0.8, 0.4};
    std::vector<double> neg = {0.7, 0.3, 0.2, 0.1};
    const auto points = roc_points(pos, neg);
    CHECK(points.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(points.back() == std::pair<double, double>{1.0, 1.0});
    for (size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].first >= points[i - 1].first);
        CHECK(points[i].second >= points[i - 1].second);
    }
}

TEST_CASE("aggregate_pairwise_score") {
    const std::vector<double> scores = {0.2, 0.4, 0.9};
    CHECK(aggregate_pairwise_score(scores, PairAggregate::kMean) == doctest::Approx(0.5));
    CHECK(aggregate_pairwise_score(scores, PairAggregate::kMin) == 0.2);
    const std::vector<double> equal = {0.3, 0.3, 0.3};
    CHECK(aggregate_pairwise_score(equal, PairAggregate::kMean) ==
          aggregate_pairwise_score(equal, PairAggregate::kMin));
    CHECK_THROWS_AS(aggregate_pairwise_score(std::vector<double>{0.1, 0.2}, PairAggregate::kMean),
                    ProtocolError);
    CHECK(parse_aggregate("mean") == PairAggregate::kMean);
    CHECK(parse_aggregate("min") == PairAggregate::kMin);
    CHECK_THROWS_AS(parse_aggregate("median"), ConfigError);
}

TEST_CASE("sampled non-edges are type-consistent and absent from the edge set") {
    const Hypergraph g = synthesize_planted(5, 2, 30, 0.3, 71);
    Rng rng(9);
    const auto negs =
        sample_non_edges(g, [&](const Hyperedge& e) { return g.contains(e); }, 200, rng);
    REQUIRE(negs.size() == 200);
    for (const Hyperedge& e : negs) {
        CHECK_FALSE(g.contains(e));
        for (uint32_t t = 0; t < 3; ++t) {
            CHECK(e.members[t].type == t);
            CHECK(e.members[t].index < g.count(t));
        }
    }
}

TEST_CASE("non-edge sampling reports exhaustion on a complete hypergraph") {
    std::vector<std::array<uint32_t, 3>> triples;
    for (uint32_t a = 0; a < 2; ++a) {
        for (uint32_t b = 0; b < 2; ++b) {
            for (uint32_t c = 0; c < 2; ++c) triples.push_back({a, b, c});
        }
    }
    std::array<std::vector<std::string>, 3> labels;
    for (auto& l : labels) l = {"n0", "n1"};
    const Hypergraph g = Hypergraph::from_indexed({"x", "y", "z"}, labels, triples);
    Rng rng(4);
    CHECK_THROWS_AS(
        sample_non_edges(g, [&](const Hyperedge& e) { return g.contains(e); }, 1, rng),
        ProtocolError);
}

TEST_CASE("reconstruction on a memorized toy graph") {
    const Hypergraph g = Hypergraph::from_triples({{"u1", "m1", "t1"},
                                                   {"u2", "m2", "t2"},
                                                   {"u3", "m3", "t3"},
                                                   {"u1", "m2", "t3"},
                                                   {"u3", "m1", "t2"}},
                                                  {"user", "movie", "tag"});
    const SparseAdjacency adj = build_adjacency(g);
    // One batch per epoch on this 5-edge graph, so the epoch count is the SGD
    // step count; memorization needs a few thousand of them.
    TrainConfig cfg = quick_config(5000);
    cfg.batch_size = 5;
    cfg.alpha = 0.05;
    const TrainResult trained = train(g, adj, cfg);
    const EvalReport report = reconstruction_eval(g, trained.params, adj, 1, 77);
    CHECK(report.positives == 5);
    CHECK(report.negatives == 5);
    CHECK(report.auc >= 0.95);
    CHECK(report.wall_seconds > 0.0);
}

TEST_CASE("untrained parameters reconstruct near chance") {
    const Hypergraph g = synthesize_planted(8, 2, 60, 0.1, 5);
    const SparseAdjacency adj = build_adjacency(g);
    double total = 0.0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const DhneParams random_params = DhneParams::init(DhneDims(g.total_nodes(), 8), seed * 31);
        total += reconstruction_eval(g, random_params, adj, 1, seed).auc;
    }
    const double mean_auc = total / 10.0;
    CHECK(mean_auc > 0.35);
    CHECK(mean_auc < 0.65);
}

TEST_CASE("reconstruction is deterministic per seed") {
    const Hypergraph g = synthesize_planted(6, 2, 40, 0.2, 8);
    const SparseAdjacency adj = build_adjacency(g);
    const DhneParams params = DhneParams::init(DhneDims(g.total_nodes(), 6), 4);
    const EvalReport a = reconstruction_eval(g, params, adj, 2, 123);
    const EvalReport b = reconstruction_eval(g, params, adj, 2, 123);
    CHECK(a.auc == b.auc);
    CHECK(a.negatives == 2 * a.positives);
}

TEST_CASE("link prediction on a planted graph beats chance") {
    const Hypergraph g = synthesize_planted(12, 3, 150, 0.05, 42);
    const SparseAdjacency adj = build_adjacency(g);
    TrainConfig cfg = quick_config(200);
    const EvalReport report = link_prediction_eval(g, 0.2, cfg, 7);
    CHECK(report.hide_ratio == 0.2);
    CHECK(report.positives == g.num_edges() / 5);
    CHECK(report.auc > 0.7);

    const EvalReport again = link_prediction_eval(g, 0.2, cfg, 7);
    CHECK(report.auc == again.auc);  // deterministic per (graph, config, seed)
}

TEST_CASE("sparsity sweep emits one report per ratio") {
    const Hypergraph g = synthesize_planted(6, 2, 60, 0.2, 3);
    TrainConfig cfg = quick_config(1);
    const std::vector<double> ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto reports = sparsity_sweep(g, ratios, cfg, 5);
    REQUIRE(reports.size() == 9);
    for (size_t i = 0; i < reports.size(); ++i) {
        CHECK(reports[i].hide_ratio == doctest::Approx(1.0 - ratios[i]));
        CHECK(reports[i].task == "sparsity");
    }

    // A single ratio behaves exactly as link prediction at hide = 1 - ratio.
    const std::vector<double> one = {0.5};
    const auto single = sparsity_sweep(g, one, cfg, 5);
    const EvalReport direct = link_prediction_eval(g, 0.5, cfg, 5);
    CHECK(single[0].auc == direct.auc);

    const std::vector<double> bad = {0.0};
    CHECK_THROWS_AS(sparsity_sweep(g, bad, cfg, 5), ConfigError);
}

TEST_CASE("pairwise score files evaluate under the shared protocol") {
    namespace fs = std::filesystem;
    const Hypergraph g = Hypergraph::from_triples(
        {{"u1", "m1", "t1"}, {"u2", "m2", "t2"}}, {"user", "movie", "tag"});

    const fs::path dir = fs::temp_directory_path() / "dhne_pairwise_test";
    fs::create_directories(dir);
    const fs::path file = dir / "scores.tsv";
    {
        std::ofstream out(file);
        out << "# pairwise similarities\n";
        out << "u1 m1 0.9\nu1 t1 0.8\nm1 t1 0.85\n";
        out << "u2 m2 0.9\nu2 t2 0.95\nm2 t2 0.8\n";
    }
    const PairwiseScores scores = load_pairwise_scores(file.string(), g);
    CHECK(scores.size() == 6);
    const double edge_score = scores.score_edge(g, g.edges()[0], PairAggregate::kMean);
    CHECK(edge_score == doctest::Approx((0.9 + 0.8 + 0.85) / 3.0));

    // True pairs score high, all other pairs default to zero: perfect ranking.
    const EvalReport report = reconstruction_eval_pairwise(g, scores, PairAggregate::kMean, 1, 3);
    CHECK(report.auc == 1.0);

    // Ambiguous bare label: same label lives in two types.
    const Hypergraph amb =
        Hypergraph::from_triples({{"x", "x", "t"}}, {"user", "movie", "tag"});
    const fs::path bad = dir / "ambiguous.tsv";
    {
        std::ofstream out(bad);
        out << "x t 0.5\n";
    }
    CHECK_THROWS_AS(load_pairwise_scores(bad.string(), amb), ParseError);
    {
        std::ofstream out(bad);
        out << "user:x t 0.5\n";
    }
    CHECK(load_pairwise_scores(bad.string(), amb).size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("generic linear feasibility solver") {
    // x <= 2, -x <= -1 is satisfiable; adding x <= 0 is not.
    LinearSystem sat;
    sat.lhs = {{1.0}, {-1.0}};
    sat.rhs = {2.0, -1.0};
    const auto ok = solve_linear_feasibility(sat);
    REQUIRE(ok.feasible);
    CHECK(ok.point[0] >= 1.0);
    CHECK(ok.point[0] <= 2.0);

    LinearSystem unsat = sat;
    unsat.lhs.push_back({1.0});
    unsat.rhs.push_back(0.0);
    const auto bad = solve_linear_feasibility(unsat);
    REQUIRE_FALSE(bad.feasible);
    // Farkas certificate: nonnegative multipliers cancel the coefficients and
    // leave a negative bound.
    REQUIRE(bad.certificate.size() == 3);
    double coeff = 0.0, bound = 0.0;
    for (size_t i = 0; i < 3; ++i) {
        CHECK(bad.certificate[i] >= 0.0);
        coeff += bad.certificate[i] * unsat.lhs[i][0];
        bound += bad.certificate[i] * unsat.rhs[i];
    }
    CHECK(std::abs(coeff) < 1e-9);
    CHECK(bound < 0.0);
}

TEST_CASE("theorem oracle decides the threshold geometry") {
    // The cited contradiction: demanding edges above 0.6 and non-edges below
    // 0.4 from an additive scorer is impossible.
    LinearFeasibilityProblem hard;
    hard.positive_floor = 0.6;
    hard.negative_ceiling = 0.4;
    const auto infeasible = linear_infeasibility_oracle(hard);
    CHECK_FALSE(infeasible.feasible);
    CHECK_FALSE(infeasible.infeasibility_certificate.empty());

    LinearFeasibilityProblem easy;
    easy.positive_floor = 0.4;
    easy.negative_ceiling = 0.6;
    const auto feasible = linear_infeasibility_oracle(easy);
    REQUIRE(feasible.feasible);
    REQUIRE(feasible.witness.has_value());

    // Verify the witness satisfies all four strict inequalities.
    const auto& w = feasible.witness->weights;
    const auto& y = feasible.witness->cluster_embeddings;
    const double s000 = w[0] * y[0][0] + w[1] * y[1][0] + w[2] * y[2][0];
    const double s100 = w[0] * y[0][1] + w[1] * y[1][0] + w[2] * y[2][0];
    const double s111 = w[0] * y[0][1] + w[1] * y[1][1] + w[2] * y[2][1];
    const double s011 = w[0] * y[0][0] + w[1] * y[1][1] + w[2] * y[2][1];
    CHECK(s000 > easy.positive_floor);
    CHECK(s111 > easy.positive_floor);
    CHECK(s100 < easy.negative_ceiling);
    CHECK(s011 < easy.negative_ceiling);

    // Equal thresholds: the strict inequalities still collapse.
    LinearFeasibilityProblem tie;
    tie.positive_floor = 0.5;
    tie.negative_ceiling = 0.5;
    CHECK_FALSE(linear_infeasibility_oracle(tie).feasible);
}

TEST_CASE("theorem oracle property: feasible exactly when the floor is below the ceiling") {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        LinearFeasibilityProblem p;
        const double a = rng.uniform(-1.0, 2.0);
        const double b = rng.uniform(-1.0, 2.0);
        p.positive_floor = std::max(a, b);
        p.negative_ceiling = std::min(a, b);
        CHECK_FALSE(linear_infeasibility_oracle(p).feasible);

        p.positive_floor = std::min(a, b) - 0.01;
        p.negative_ceiling = std::max(a, b) + 0.01;
        const auto res = linear_infeasibility_oracle(p);
        CHECK(res.feasible);
        CHECK(res.witness.has_value());
    }
}

TEST_CASE("additive linear baseline separates a degree-separable candidate set") {
    // Positives all use node 0 of each type, negatives use node 1: a per-node
    // score fits this perfectly, validating the optimizer side of the baseline.
    std::array<std::vector<std::string>, 3> labels;
    for (auto& l : labels) l = {"n0", "n1", "n2"};
    const Hypergraph g = Hypergraph::from_indexed(
        {"x", "y", "z"}, labels, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 1, 1}});
    std::vector<Hyperedge> pos = {make_edge(0, 0, 0), make_edge(0, 0, 1), make_edge(0, 1, 0)};
    std::vector<Hyperedge> neg = {make_edge(1, 1, 1), make_edge(1, 1, 2), make_edge(1, 2, 1)};
    CHECK(linear_baseline_auc(g, pos, neg, 400) == 1.0);
}

TEST_CASE("line fit recovers exact linear data") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> ys = {3.0, 5.0, 7.0, 9.0};
    const LineFit fit = fit_line(xs, ys);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("doubling the embedding size increases per-batch time") {
    const Hypergraph g = synthesize_planted(40, 4, 300, 0.05, 18);
    const SparseAdjacency adj = build_adjacency(g);
    auto median_for = [&](size_t dim) {
        TrainConfig cfg = quick_config(1);
        cfg.embed_dim = dim;
        cfg.batch_size = 32;
        auto seconds = measure_batch_seconds(g, adj, cfg, 2, 11);
        std::sort(seconds.begin(), seconds.end());
        return seconds[seconds.size() / 2];
    };
    CHECK(median_for(32) > median_for(8));
}

TEST_CASE("repeated timing of one configuration is stable") {
    const Hypergraph g = synthesize_planted(20, 4, 120, 0.05, 12);
    const SparseAdjacency adj = build_adjacency(g);
    TrainConfig cfg = quick_config(1);
    auto median_of = [&]() {
        auto seconds = measure_batch_seconds(g, adj, cfg, 2, 9);
        std::sort(seconds.begin(), seconds.end());
        return seconds[seconds.size() / 2];
    };
    const double a = median_of();
    const double b = median_of();
    const double mean = 0.5 * (a + b);
    const double sd = std::sqrt(0.5 * ((a - mean) * (a - mean) + (b - mean) * (b - mean)));
    CHECK(sd / mean < 0.5);  // coefficient of variation
}

TEST_CASE("eval report serializes to text and json") {
    EvalReport report;
    report.task = "reconstruction";
    report.auc = 0.875;
    report.positives = 10;
    report.negatives = 10;
    report.seed = 3;
    report.embed_dim = 8;
    const std::string text = report.to_text();
    CHECK(text.find("auc 0.875") != std::string::npos);
    CHECK(text.find("task reconstruction") != std::string::npos);
    const std::string json = report.to_json_string();
    CHECK(json.find("\"auc\": 0.875") != std::string::npos);
}
