#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dhne/hypergraph.hpp"
#include "dhne/numerics.hpp"

namespace dhne {

// Layer widths of the network. The encoder input width is the global node
// count, so every type's autoencoder sees the full co-occurrence row.
struct DhneDims {
    size_t feature_dim = 0;   // |V|
    size_t embed_dim = 64;    // d
    size_t latent_dim = 192;  // defaults to 3 * d, the concatenated embedding length

    DhneDims() = default;
    DhneDims(size_t feature, size_t embed) : feature_dim(feature), embed_dim(embed), latent_dim(3 * embed) {}
    DhneDims(size_t feature, size_t embed, size_t latent)
        : feature_dim(feature), embed_dim(embed), latent_dim(latent) {}

    friend bool operator==(const DhneDims&, const DhneDims&) = default;
};

// Every trainable weight of the model. Each node type owns an autoencoder and
// a map into the shared joint latent space; the output layer is shared.
struct DhneParams {
    DhneDims dims;
    std::array<DenseLayer, 3> encoder;  // d x |V| each
    std::array<DenseLayer, 3> decoder;  // |V| x d each
    std::array<Matrix, 3> joint;        // latent x d each
    Vector joint_bias;                  // latent (shared across types)
    DenseLayer output;                  // 1 x latent

    static DhneParams init(const DhneDims& dims, uint64_t seed);
    static DhneParams zeros(const DhneDims& dims);

    size_t parameter_count() const;

    // Canonical flat layout: encoders (w, b per type), decoders (w, b per
    // type), joint maps per type, joint bias, output (w, b).
    std::vector<double> pack() const;
    static DhneParams unpack(const DhneDims& dims, std::span<const double> flat);

    void add_scaled(const DhneParams& other, double scale);  // this += scale * other
    void scale(double factor);
};

// Learned embeddings per type; row i of embeddings[t] is node (t, i).
struct EmbeddingTable {
    std::array<Matrix, 3> per_type;

    std::span<const double> row(NodeRef n) const { return per_type[n.type].row(n.index); }
};

// One training tuple: the dense co-occurrence rows of the three members plus
// the similarity label (1 for an observed hyperedge, 0 for a sampled negative).
struct TupleBatchItem {
    std::array<Vector, 3> rows;
    double label = 1.0;
};

Vector encode(const DhneParams& params, uint32_t type, std::span<const double> adjacency_row);
// Sparse fast path; bit-identical to encode on the matching dense row.
Vector encode_sparse(const DhneParams& params, uint32_t type, std::span<const SparseEntry> row);

Vector decode(const DhneParams& params, uint32_t type, std::span<const double> embedding);

// Tuplewise similarity in (0, 1). The result is clamped away from exactly
// {0, 1} so the log loss below stays finite at double precision.
double score_tuple(const DhneParams& params, std::span<const double> x_a,
                   std::span<const double> x_b, std::span<const double> x_c);

double score_edge(const DhneParams& params, const EmbeddingTable& table, const Hyperedge& e);

// Cross-entropy against the 0/1 similarity label; score must lie in (0, 1).
double loss_first_order(double label, double score);

// Reconstruction error restricted to the nonzero support of the input row.
double loss_second_order(std::span<const double> input_row, std::span<const double> reconstruction);

double total_loss(double first_order, double second_order, double alpha);

struct BatchGradients {
    DhneParams grads;
    double mean_loss = 0.0;
    double mean_first_order = 0.0;
    double mean_second_order = 0.0;
};

// Analytic gradient of the batch-mean combined objective. Negative tuples
// contribute only to the similarity term; reconstruction terms come from the
// member rows of positives.
BatchGradients gradients(const DhneParams& params, std::span<const TupleBatchItem> batch,
                         double alpha);

// Out-of-sample extension: identical computation to encode.
Vector embed_out_of_sample(const DhneParams& params, uint32_t type, std::span<const double> row);
Vector embed_out_of_sample(const DhneParams& params, uint32_t type, std::span<const SparseEntry> row);

EmbeddingTable compute_embeddings(const DhneParams& params, const Hypergraph& g,
                                  const SparseAdjacency& adj);

}  // namespace dhne
