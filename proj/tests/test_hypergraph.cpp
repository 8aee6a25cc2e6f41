#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"

#include "dhne/errors.hpp"
#include "dhne/hypergraph.hpp"
#include "dhne/rng.hpp"

using namespace dhne;

namespace {

Hypergraph toy_graph() {
    return Hypergraph::from_triples(
        {{"u1", "m1", "t1"}, {"u1", "m2", "t1"}}, {"user", "movie", "tag"});
}

// Brute-force reference: dense incidence times its transpose minus the degree
// diagonal, entry by entry.
void check_against_incidence(const Hypergraph& g, const SparseAdjacency& adj) {
    const uint32_t n = g.total_nodes();
    const uint32_t m = g.num_edges();
    std::vector<std::vector<int>> incidence(n, std::vector<int>(m, 0));
    for (uint32_t e = 0; e < m; ++e) {
        for (uint32_t t = 0; t < 3; ++t) {
            incidence[g.global_index(g.edges()[e].members[t])][e] = 1;
        }
    }
    for (uint32_t u = 0; u < n; ++u) {
        int degree = 0;
        for (uint32_t e = 0; e < m; ++e) degree += incidence[u][e];
        CHECK(adj.degree(u) == static_cast<uint32_t>(degree));
        for (uint32_t v = 0; v < n; ++v) {
            int shared = 0;
            for (uint32_t e = 0; e < m; ++e) shared += incidence[u][e] * incidence[v][e];
            if (u == v) shared -= degree;  // diagonal cancels
            const auto& row = adj.row(u);
            const auto it = std::find_if(row.begin(), row.end(),
                                         [&](const SparseEntry& s) { return s.index == v; });
            const int stored = it == row.end() ? 0 : static_cast<int>(it->count);
            CHECK(stored == shared);
        }
    }
}

}  // namespace

TEST_CASE("from_triples interns labels in first-seen order and dedups") {
    const Hypergraph g = toy_graph();
    CHECK(g.count(0) == 1);
    CHECK(g.count(1) == 2);
    CHECK(g.count(2) == 1);
    CHECK(g.num_edges() == 2);
    CHECK(g.label(NodeRef{1, 0}) == "m1");
    CHECK(g.label(NodeRef{1, 1}) == "m2");

    const Hypergraph d = Hypergraph::from_triples(
        {{"a", "b", "c"}, {"a", "b", "c"}}, {"x", "y", "z"});
    CHECK(d.num_edges() == 1);

    CHECK_THROWS_AS(Hypergraph::from_triples({}, {"x", "y", "z"}), ConfigError);
}

TEST_CASE("build_adjacency on the shared-neighborhood example") {
    // Edges: (A1,L2,U1), (A1,L1,U2), (A2,L1,U2). Types: activity, location, user.
    const Hypergraph g = Hypergraph::from_triples(
        {{"A1", "L2", "U1"}, {"A1", "L1", "U2"}, {"A2", "L1", "U2"}},
        {"activity", "location", "user"});
    const SparseAdjacency adj = build_adjacency(g);

    const auto entry = [&](const char* a_label, uint32_t a_type, const char* b_label,
                           uint32_t b_type) {
        const uint32_t u = g.global_index(
            NodeRef{a_type, static_cast<uint32_t>(g.find_label(a_type, a_label))});
        const uint32_t v = g.global_index(
            NodeRef{b_type, static_cast<uint32_t>(g.find_label(b_type, b_label))});
        for (const SparseEntry& s : adj.row(u)) {
            if (s.index == v) return s.count;
        }
        return 0u;
    };

    CHECK(entry("L1", 1, "U2", 2) == 2);
    CHECK(entry("A1", 0, "L1", 1) == 1);
    CHECK(entry("A1", 0, "A2", 0) == 0);

    const auto degree_of = [&](const char* label, uint32_t type) {
        return adj.degree(
            g.global_index(NodeRef{type, static_cast<uint32_t>(g.find_label(type, label))}));
    };
    CHECK(degree_of("A1", 0) == 2);
    CHECK(degree_of("A2", 0) == 1);
    CHECK(degree_of("L1", 1) == 2);

    check_against_incidence(g, adj);
}

TEST_CASE("single edge adjacency") {
    const Hypergraph g = Hypergraph::from_triples({{"a", "b", "c"}}, {"x", "y", "z"});
    const SparseAdjacency adj = build_adjacency(g);
    CHECK(adj.global_size() == 3);
    for (uint32_t v = 0; v < 3; ++v) {
        CHECK(adj.degree(v) == 1);
        CHECK(adj.row(v).size() == 2);
        for (const SparseEntry& e : adj.row(v)) CHECK(e.count == 1);
    }
}

TEST_CASE("adjacency equals brute force on random planted graphs") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const uint32_t per_type = 2 + static_cast<uint32_t>(rng.uniform_index(15));  // |V| <= 51
        const uint32_t clusters = 1 + static_cast<uint32_t>(rng.uniform_index(per_type));
        const uint32_t edges = 1 + static_cast<uint32_t>(rng.uniform_index(60));
        const Hypergraph g =
            synthesize_planted(per_type, clusters, edges, rng.uniform(), rng.next_u64());
        const SparseAdjacency adj = build_adjacency(g);
        check_against_incidence(g, adj);

        // Symmetry, zero diagonal, and the 3-uniform degree identity.
        uint64_t degree_sum = 0;
        for (uint32_t u = 0; u < adj.global_size(); ++u) {
            degree_sum += adj.degree(u);
            for (const SparseEntry& e : adj.row(u)) {
                CHECK(e.index != u);
                const auto& other = adj.row(e.index);
                const auto it = std::find_if(other.begin(), other.end(),
                                             [&](const SparseEntry& s) { return s.index == u; });
                REQUIRE(it != other.end());
                CHECK(it->count == e.count);
            }
        }
        CHECK(degree_sum == 3ull * g.num_edges());
    }
}

TEST_CASE("dense_row matches sparse row") {
    const Hypergraph g = synthesize_planted(5, 2, 20, 0.3, 4);
    const SparseAdjacency adj = build_adjacency(g);
    for (uint32_t v = 0; v < adj.global_size(); ++v) {
        const auto dense = adj.dense_row(v);
        double sum = 0.0;
        for (double x : dense) sum += x;
        double sparse_sum = 0.0;
        for (const SparseEntry& e : adj.row(v)) {
            CHECK(dense[e.index] == static_cast<double>(e.count));
            sparse_sum += e.count;
        }
        CHECK(sum == sparse_sum);
    }
}

TEST_CASE("hide_edges splits deterministically and partitions the edge set") {
    const Hypergraph g = synthesize_planted(8, 2, 40, 0.2, 21);
    const auto split_a = hide_edges(g, 0.5, 17);
    const auto split_b = hide_edges(g, 0.5, 17);
    CHECK(split_a.held_out.size() == g.num_edges() / 2);
    REQUIRE(split_a.held_out.size() == split_b.held_out.size());
    for (size_t i = 0; i < split_a.held_out.size(); ++i) {
        CHECK(split_a.held_out[i] == split_b.held_out[i]);
    }

    // Union is the original edge set, intersection empty.
    std::set<uint64_t> train_keys, held_keys, all_keys;
    for (const Hyperedge& e : split_a.train.edges()) train_keys.insert(e.key());
    for (const Hyperedge& e : split_a.held_out) held_keys.insert(e.key());
    for (const Hyperedge& e : g.edges()) all_keys.insert(e.key());
    CHECK(train_keys.size() + held_keys.size() == all_keys.size());
    for (uint64_t k : held_keys) CHECK(train_keys.count(k) == 0);

    // Node universe is preserved even when nodes lose all edges.
    CHECK(split_a.train.total_nodes() == g.total_nodes());

    CHECK_THROWS_AS(hide_edges(g, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(hide_edges(g, 1.0, 1), ConfigError);
}

TEST_CASE("hide_edges floor arithmetic") {
    const Hypergraph g = synthesize_planted(4, 2, 10, 1.0, 5);
    REQUIRE(g.num_edges() >= 2);
    const size_t e = g.num_edges();
    const auto split = hide_edges(g, 0.9, 3);
    CHECK(split.held_out.size() == static_cast<size_t>(0.9 * e));
}

TEST_CASE("check-in-scale universe: 146/70/5 nodes, 1436 edges") {
    std::array<std::vector<std::string>, 3> labels;
    const std::array<uint32_t, 3> counts = {146, 70, 5};
    for (uint32_t t = 0; t < 3; ++t) {
        for (uint32_t i = 0; i < counts[t]; ++i) labels[t].push_back("n" + std::to_string(i));
    }
    std::vector<std::array<uint32_t, 3>> triples;
    for (uint32_t i = 0; i < 1436; ++i) {
        triples.push_back({i % 146, (i / 146) % 70, i / (146 * 70)});
    }
    const Hypergraph g =
        Hypergraph::from_indexed({"user", "location", "activity"}, labels, triples);
    REQUIRE(g.num_edges() == 1436);
    CHECK(g.total_nodes() == 221);
    CHECK(build_adjacency(g).global_size() == 221);

    // Hiding 20% holds out floor(0.2 * 1436) = 287.
    const auto split = hide_edges(g, 0.2, 9);
    CHECK(split.held_out.size() == 287);
    CHECK(split.train.num_edges() == 1149);
}

TEST_CASE("synthesize_planted respects cluster structure") {
    const Hypergraph pure = synthesize_planted(4, 2, 20, 0.0, 11);
    for (const Hyperedge& e : pure.edges()) {
        const uint32_t cluster = e.members[0].index % 2;
        CHECK(e.members[1].index % 2 == cluster);
        CHECK(e.members[2].index % 2 == cluster);
    }

    // One node per cluster per type: only 2 distinct same-cluster triples exist.
    const Hypergraph tiny = synthesize_planted(2, 2, 8, 0.0, 13);
    CHECK(tiny.num_edges() <= 2);

    CHECK_THROWS_AS(synthesize_planted(2, 3, 5, 0.0, 1), ConfigError);

    const Hypergraph a = synthesize_planted(6, 3, 30, 0.5, 77);
    const Hypergraph b = synthesize_planted(6, 3, 30, 0.5, 77);
    REQUIRE(a.num_edges() == b.num_edges());
    for (uint32_t i = 0; i < a.num_edges(); ++i) CHECK(a.edges()[i] == b.edges()[i]);
}

TEST_CASE("clique expansion") {
    const Hypergraph one = Hypergraph::from_triples({{"a", "b", "c"}}, {"x", "y", "z"});
    const auto pairs = clique_expand(one);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == std::pair<uint32_t, uint32_t>{0, 1});
    CHECK(pairs[1] == std::pair<uint32_t, uint32_t>{0, 2});
    CHECK(pairs[2] == std::pair<uint32_t, uint32_t>{1, 2});

    // Two edges sharing the (a, b) pair: that pair appears once.
    const Hypergraph two =
        Hypergraph::from_triples({{"a", "b", "c"}, {"a", "b", "d"}}, {"x", "y", "z"});
    const auto dedup = clique_expand(two);
    CHECK(dedup.size() == 5);
    CHECK(dedup.size() <= 3 * two.num_edges());
}

TEST_CASE("expansions of an empty edge list are empty") {
    std::array<std::vector<std::string>, 3> labels;
    for (auto& l : labels) l = {"n0", "n1"};
    const Hypergraph g = Hypergraph::from_indexed({"x", "y", "z"}, labels, {});
    CHECK(clique_expand(g).empty());
    const StarExpansion star = star_expand(g);
    CHECK(star.links.empty());
    CHECK(star.total_nodes == g.total_nodes());
}

TEST_CASE("star expansion") {
    const Hypergraph one = Hypergraph::from_triples({{"a", "b", "c"}}, {"x", "y", "z"});
    const auto star = star_expand(one);
    REQUIRE(star.links.size() == 3);
    CHECK(star.total_nodes == 4);
    for (const auto& [member, instance] : star.links) {
        CHECK(instance == 3);
        CHECK(member < 3);
    }

    const Hypergraph g = synthesize_planted(5, 2, 25, 0.5, 9);
    const auto expanded = star_expand(g);
    CHECK(expanded.links.size() == 3u * g.num_edges());
    CHECK(expanded.total_nodes == g.total_nodes() + g.num_edges());
}

TEST_CASE("triplet file parsing") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "dhne_hypergraph_test";
    fs::create_directories(dir);

    const fs::path good = dir / "good.tsv";
    {
        std::ofstream out(good);
        out << "# comment line\n";
        out << "u1\tm1\tt1\n";
        out << "u2\tm1\tt2\r\n";
        out << "\n";
    }
    const auto triples = read_triple_file(good.string());
    REQUIRE(triples.size() == 2);
    CHECK(triples[1][2] == "t2");

    const fs::path bad = dir / "bad.tsv";
    {
        std::ofstream out(bad);
        out << "u1\tm1\tt1\n";
        out << "u2\tm1\n";
    }
    CHECK_THROWS_WITH_AS(read_triple_file(bad.string()),
                         doctest::Contains(":2"), ParseError);

    CHECK_THROWS_AS(read_triple_file((dir / "missing.tsv").string()), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("interning scales to semantic-network shape") {
    // 145,966 distinct triples over 40504 / 18 / 40551 nodes per type.
    std::vector<std::array<std::string, 3>> triples;
    triples.reserve(145966);
    for (uint32_t i = 0; i < 145966; ++i) {
        triples.push_back({"h" + std::to_string(i % 40504), "r" + std::to_string(i % 18),
                           "t" + std::to_string(i % 40551)});
    }
    const Hypergraph g = Hypergraph::from_triples(triples, {"head", "relation", "tail"});
    CHECK(g.count(0) == 40504);
    CHECK(g.count(1) == 18);
    CHECK(g.count(2) == 40551);
    CHECK(g.num_edges() == 145966);
    CHECK(g.total_nodes() == 81073);
}

TEST_CASE("global indexing is type-major") {
    const Hypergraph g = toy_graph();
    CHECK(g.global_index(NodeRef{0, 0}) == 0);
    CHECK(g.global_index(NodeRef{1, 0}) == 1);
    CHECK(g.global_index(NodeRef{1, 1}) == 2);
    CHECK(g.global_index(NodeRef{2, 0}) == 3);
    CHECK(g.total_nodes() == 4);
    const NodeRef back = g.node_from_global(2);
    CHECK(back.type == 1);
    CHECK(back.index == 1);
}
