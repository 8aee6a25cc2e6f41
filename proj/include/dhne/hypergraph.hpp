#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace dhne {

// A node of a heterogeneous 3-uniform hyper-network, addressed by its type
// and its dense index within that type.
struct NodeRef {
    uint32_t type = 0;
    uint32_t index = 0;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// One hyperedge: exactly one node per type, positions 0/1/2 are the types.
struct Hyperedge {
    std::array<NodeRef, 3> members;

    // Packed member indices; valid because node counts are capped at 2^21.
    uint64_t key() const {
        return (static_cast<uint64_t>(members[0].index) << 42) |
               (static_cast<uint64_t>(members[1].index) << 21) |
               static_cast<uint64_t>(members[2].index);
    }

    friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

Hyperedge make_edge(uint32_t a, uint32_t b, uint32_t c);

// Immutable after construction; safe for concurrent reads.
class Hypergraph {
  public:
    static constexpr uint32_t kNumTypes = 3;
    static constexpr uint32_t kMaxNodesPerType = 1u << 21;

    // Interns labels to dense per-type indices in first-seen order and
    // deduplicates repeated triples.
    static Hypergraph from_triples(const std::vector<std::array<std::string, 3>>& triples,
                                   const std::array<std::string, 3>& type_names);

    // Builds from an explicit node universe plus index triples (used by the
    // synthetic generator and by edge splitting, which keep the universe fixed).
    static Hypergraph from_indexed(std::array<std::string, 3> type_names,
                                   std::array<std::vector<std::string>, 3> labels,
                                   const std::vector<std::array<uint32_t, 3>>& triples);

    const std::array<std::string, 3>& type_names() const { return type_names_; }
    uint32_t count(uint32_t type) const { return static_cast<uint32_t>(labels_[type].size()); }
    uint32_t total_nodes() const { return offsets_[2] + count(2); }
    uint32_t num_edges() const { return static_cast<uint32_t>(edges_.size()); }
    const std::vector<Hyperedge>& edges() const { return edges_; }

    uint32_t global_index(NodeRef n) const { return offsets_[n.type] + n.index; }
    uint32_t type_offset(uint32_t type) const { return offsets_[type]; }
    NodeRef node_from_global(uint32_t g) const;

    const std::string& label(NodeRef n) const { return labels_[n.type][n.index]; }
    const std::vector<std::string>& labels(uint32_t type) const { return labels_[type]; }

    // Dense per-type index for a label, or -1 when unknown.
    int64_t find_label(uint32_t type, const std::string& label) const;

    bool contains(const Hyperedge& e) const { return edge_index_.count(e.key()) != 0; }

  private:
    std::array<std::string, 3> type_names_;
    std::array<std::vector<std::string>, 3> labels_;
    std::array<std::unordered_map<std::string, uint32_t>, 3> label_index_;
    std::vector<Hyperedge> edges_;
    std::unordered_set<uint64_t> edge_index_;
    std::array<uint32_t, 3> offsets_ = {0, 0, 0};

    void finish_construction();
};

// Sparse symmetric co-occurrence structure over the global node index space:
// entry (u, v) counts the hyperedges containing both u and v, diagonal removed.
struct SparseEntry {
    uint32_t index = 0;
    uint32_t count = 0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

class SparseAdjacency {
  public:
    uint32_t global_size() const { return static_cast<uint32_t>(rows_.size()); }
    uint32_t type_offset(uint32_t type) const { return offsets_[type]; }

    // Entries sorted by neighbor index.
    const std::vector<SparseEntry>& row(uint32_t global) const { return rows_[global]; }
    uint32_t degree(uint32_t global) const { return degrees_[global]; }
    const std::vector<uint32_t>& degrees() const { return degrees_; }

    // Materializes the row as a dense vector of length global_size().
    std::vector<double> dense_row(uint32_t global) const;

    friend SparseAdjacency build_adjacency(const Hypergraph& g);

  private:
    std::vector<std::vector<SparseEntry>> rows_;
    std::vector<uint32_t> degrees_;
    std::array<uint32_t, 3> offsets_ = {0, 0, 0};
};

SparseAdjacency build_adjacency(const Hypergraph& g);

// Splits the edge set for link prediction: floor(hide_ratio * |E|) edges are
// held out uniformly without replacement; the node universe is kept intact.
struct EdgeSplit {
    Hypergraph train;
    std::vector<Hyperedge> held_out;
};

EdgeSplit hide_edges(const Hypergraph& g, double hide_ratio, uint64_t seed);

// Synthetic generator: nodes are assigned to clusters round-robin, a
// (1 - noise_fraction) share of edges joins three same-cluster nodes, the rest
// are uniform. Duplicate draws collapse, so fewer edges can come out than asked.
Hypergraph synthesize_planted(uint32_t nodes_per_type, uint32_t clusters, uint32_t edges,
                              double noise_fraction, uint64_t seed);

// Pairwise transforms used by expansion baselines. Pairs carry global indices.
std::vector<std::pair<uint32_t, uint32_t>> clique_expand(const Hypergraph& g);

struct StarExpansion {
    // (member global index, instance node index); instance i is |V| + i.
    std::vector<std::pair<uint32_t, uint32_t>> links;
    uint32_t total_nodes = 0;
};

StarExpansion star_expand(const Hypergraph& g);

// Reads a triplet file: one edge per line, three tab-separated labels,
// '#'-prefixed lines ignored. Throws ParseError naming the offending line.
std::vector<std::array<std::string, 3>> read_triple_file(const std::string& path);

}  // namespace dhne
