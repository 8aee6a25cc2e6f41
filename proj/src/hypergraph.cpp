#include "dhne/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "dhne/errors.hpp"
#include "dhne/rng.hpp"

namespace dhne {

Hyperedge make_edge(uint32_t a, uint32_t b, uint32_t c) {
    return Hyperedge{{NodeRef{0, a}, NodeRef{1, b}, NodeRef{2, c}}};
}

void Hypergraph::finish_construction() {
    for (uint32_t t = 0; t < kNumTypes; ++t) {
        if (labels_[t].size() > kMaxNodesPerType) {
            throw ConfigError("node count for type " + type_names_[t] + " exceeds " +
                              std::to_string(kMaxNodesPerType));
        }
    }
    offsets_[0] = 0;
    offsets_[1] = count(0);
    offsets_[2] = count(0) + count(1);
    edge_index_.clear();
    edge_index_.reserve(edges_.size() * 2);
    for (const Hyperedge& e : edges_) edge_index_.insert(e.key());
}

Hypergraph Hypergraph::from_triples(const std::vector<std::array<std::string, 3>>& triples,
                                    const std::array<std::string, 3>& type_names) {
    if (triples.empty()) throw ConfigError("empty hypergraph: no triples supplied");
    Hypergraph g;
    g.type_names_ = type_names;
    std::unordered_set<uint64_t> seen;
    seen.reserve(triples.size() * 2);
    for (const auto& triple : triples) {
        Hyperedge e;
        for (uint32_t t = 0; t < kNumTypes; ++t) {
            auto& index = g.label_index_[t];
            auto [it, inserted] = index.try_emplace(triple[t], static_cast<uint32_t>(g.labels_[t].size()));
            if (inserted) g.labels_[t].push_back(triple[t]);
            e.members[t] = NodeRef{t, it->second};
        }
        if (seen.insert(e.key()).second) g.edges_.push_back(e);
    }
    g.finish_construction();
    return g;
}

Hypergraph Hypergraph::from_indexed(std::array<std::string, 3> type_names,
                                    std::array<std::vector<std::string>, 3> labels,
                                    const std::vector<std::array<uint32_t, 3>>& triples) {
    Hypergraph g;
    g.type_names_ = std::move(type_names);
    g.labels_ = std::move(labels);
    for (uint32_t t = 0; t < kNumTypes; ++t) {
        g.label_index_[t].reserve(g.labels_[t].size() * 2);
        for (uint32_t i = 0; i < g.labels_[t].size(); ++i) g.label_index_[t].emplace(g.labels_[t][i], i);
    }
    std::unordered_set<uint64_t> seen;
    seen.reserve(triples.size() * 2);
    for (const auto& triple : triples) {
        for (uint32_t t = 0; t < kNumTypes; ++t) {
            if (triple[t] >= g.labels_[t].size()) {
                throw ConfigError("edge references node " + std::to_string(triple[t]) +
                                  " of type " + g.type_names_[t] + " outside the universe");
            }
        }
        Hyperedge e = make_edge(triple[0], triple[1], triple[2]);
        if (seen.insert(e.key()).second) g.edges_.push_back(e);
    }
    g.finish_construction();
    return g;
}

NodeRef Hypergraph::node_from_global(uint32_t g) const {
    for (uint32_t t = kNumTypes; t-- > 0;) {
        if (g >= offsets_[t]) return NodeRef{t, g - offsets_[t]};
    }
    return NodeRef{0, g};
}

int64_t Hypergraph::find_label(uint32_t type, const std::string& label) const {
    auto it = label_index_[type].find(label);
    return it == label_index_[type].end() ? -1 : static_cast<int64_t>(it->second);
}

SparseAdjacency build_adjacency(const Hypergraph& g) {
    const uint32_t n = g.total_nodes();
    SparseAdjacency adj;
    adj.offsets_ = {g.type_offset(0), g.type_offset(1), g.type_offset(2)};
    adj.degrees_.assign(n, 0);
    std::vector<std::map<uint32_t, uint32_t>> accum(n);
    for (const Hyperedge& e : g.edges()) {
        std::array<uint32_t, 3> ids;
        for (uint32_t t = 0; t < 3; ++t) {
            ids[t] = g.global_index(e.members[t]);
            adj.degrees_[ids[t]] += 1;
        }
        for (uint32_t i = 0; i < 3; ++i) {
            for (uint32_t j = 0; j < 3; ++j) {
                if (i != j) accum[ids[i]][ids[j]] += 1;
            }
        }
    }
    adj.rows_.resize(n);
    for (uint32_t v = 0; v < n; ++v) {
        adj.rows_[v].reserve(accum[v].size());
        for (const auto& [neighbor, count] : accum[v]) {
            adj.rows_[v].push_back(SparseEntry{neighbor, count});
        }
    }
    return adj;
}

std::vector<double> SparseAdjacency::dense_row(uint32_t global) const {
    std::vector<double> out(rows_.size(), 0.0);
    for (const SparseEntry& e : rows_[global]) out[e.index] = static_cast<double>(e.count);
    return out;
}

EdgeSplit hide_edges(const Hypergraph& g, double hide_ratio, uint64_t seed) {
    if (!(hide_ratio > 0.0 && hide_ratio < 1.0)) {
        throw ConfigError("hide_ratio must lie strictly between 0 and 1");
    }
    const size_t total = g.num_edges();
    const size_t hidden = static_cast<size_t>(std::floor(hide_ratio * static_cast<double>(total)));

    std::vector<uint32_t> order(total);
    for (uint32_t i = 0; i < total; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<bool> held(total, false);
    EdgeSplit split;
    split.held_out.reserve(hidden);
    for (size_t i = 0; i < hidden; ++i) {
        held[order[i]] = true;
        split.held_out.push_back(g.edges()[order[i]]);
    }
    std::vector<std::array<uint32_t, 3>> kept;
    kept.reserve(total - hidden);
    for (uint32_t i = 0; i < total; ++i) {
        if (held[i]) continue;
        const Hyperedge& e = g.edges()[i];
        kept.push_back({e.members[0].index, e.members[1].index, e.members[2].index});
    }
    std::array<std::vector<std::string>, 3> labels = {g.labels(0), g.labels(1), g.labels(2)};
    split.train = Hypergraph::from_indexed(g.type_names(), labels, kept);
    return split;
}

Hypergraph synthesize_planted(uint32_t nodes_per_type, uint32_t clusters, uint32_t edges,
                              double noise_fraction, uint64_t seed) {
    if (clusters == 0 || clusters > nodes_per_type) {
        throw ConfigError("clusters must lie in [1, nodes_per_type]");
    }
    if (edges == 0) throw ConfigError("edge count must be >= 1");
    if (noise_fraction < 0.0 || noise_fraction > 1.0) {
        throw ConfigError("noise_fraction must lie in [0, 1]");
    }

    // Cluster of node i is i % clusters; membership lists per cluster.
    std::vector<std::vector<uint32_t>> by_cluster(clusters);
    for (uint32_t i = 0; i < nodes_per_type; ++i) by_cluster[i % clusters].push_back(i);

    const uint32_t clustered =
        static_cast<uint32_t>(std::llround((1.0 - noise_fraction) * static_cast<double>(edges)));

    Rng rng(seed);
    std::vector<std::array<uint32_t, 3>> triples;
    triples.reserve(edges);
    for (uint32_t i = 0; i < edges; ++i) {
        std::array<uint32_t, 3> triple;
        if (i < clustered) {
            const auto& pool = by_cluster[rng.uniform_index(clusters)];
            for (uint32_t t = 0; t < 3; ++t) triple[t] = pool[rng.uniform_index(pool.size())];
        } else {
            for (uint32_t t = 0; t < 3; ++t) {
                triple[t] = static_cast<uint32_t>(rng.uniform_index(nodes_per_type));
            }
        }
        triples.push_back(triple);
    }

    std::array<std::vector<std::string>, 3> labels;
    for (uint32_t t = 0; t < 3; ++t) {
        labels[t].reserve(nodes_per_type);
        for (uint32_t i = 0; i < nodes_per_type; ++i) labels[t].push_back("v" + std::to_string(i));
    }
    return Hypergraph::from_indexed({"type0", "type1", "type2"}, std::move(labels), triples);
}

std::vector<std::pair<uint32_t, uint32_t>> clique_expand(const Hypergraph& g) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    pairs.reserve(g.num_edges() * 3);
    for (const Hyperedge& e : g.edges()) {
        std::array<uint32_t, 3> ids;
        for (uint32_t t = 0; t < 3; ++t) ids[t] = g.global_index(e.members[t]);
        pairs.emplace_back(std::min(ids[0], ids[1]), std::max(ids[0], ids[1]));
        pairs.emplace_back(std::min(ids[0], ids[2]), std::max(ids[0], ids[2]));
        pairs.emplace_back(std::min(ids[1], ids[2]), std::max(ids[1], ids[2]));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

StarExpansion star_expand(const Hypergraph& g) {
    StarExpansion out;
    out.total_nodes = g.total_nodes() + g.num_edges();
    out.links.reserve(g.num_edges() * 3);
    for (uint32_t i = 0; i < g.num_edges(); ++i) {
        const uint32_t instance = g.total_nodes() + i;
        for (uint32_t t = 0; t < 3; ++t) {
            out.links.emplace_back(g.global_index(g.edges()[i].members[t]), instance);
        }
    }
    return out;
}

std::vector<std::array<std::string, 3>> read_triple_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open triplet file: " + path);
    std::vector<std::array<std::string, 3>> triples;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::array<std::string, 3> triple;
        size_t start = 0;
        uint32_t field = 0;
        for (size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                if (field < 3) triple[field] = line.substr(start, i - start);
                ++field;
                start = i + 1;
            }
        }
        if (field != 3 || triple[0].empty() || triple[1].empty() || triple[2].empty()) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 3 tab-separated labels");
        }
        triples.push_back(std::move(triple));
    }
    return triples;
}

}  // namespace dhne
