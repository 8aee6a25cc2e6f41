#include "dhne/model.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "dhne/errors.hpp"
#include "dhne/rng.hpp"

namespace dhne {

namespace {

constexpr double kScoreClamp = 1e-15;

void check_dims(const DhneDims& dims) {
    if (dims.feature_dim == 0 || dims.embed_dim == 0 || dims.latent_dim == 0) {
        throw ConfigError("model dimensions must all be >= 1");
    }
}

void check_type(uint32_t type) {
    if (type >= 3) throw ShapeError("node type index must be in [0, 3), got " + std::to_string(type));
}

void check_len(const char* what, size_t expected, size_t actual) {
    if (expected != actual) {
        throw ShapeError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
    }
}

}  // namespace

DhneParams DhneParams::init(const DhneDims& dims, uint64_t seed) {
    check_dims(dims);
    Rng rng(seed);
    DhneParams p;
    p.dims = dims;
    for (int t = 0; t < 3; ++t) p.encoder[t] = init_params(dims.embed_dim, dims.feature_dim, rng);
    for (int t = 0; t < 3; ++t) p.decoder[t] = init_params(dims.feature_dim, dims.embed_dim, rng);
    for (int t = 0; t < 3; ++t) p.joint[t] = init_matrix(dims.latent_dim, dims.embed_dim, rng);
    p.joint_bias.assign(dims.latent_dim, 0.0);
    p.output = init_params(1, dims.latent_dim, rng);
    return p;
}

DhneParams DhneParams::zeros(const DhneDims& dims) {
    check_dims(dims);
    DhneParams p;
    p.dims = dims;
    for (int t = 0; t < 3; ++t) {
        p.encoder[t] = DenseLayer{Matrix(dims.embed_dim, dims.feature_dim), Vector(dims.embed_dim, 0.0)};
        p.decoder[t] = DenseLayer{Matrix(dims.feature_dim, dims.embed_dim), Vector(dims.feature_dim, 0.0)};
        p.joint[t] = Matrix(dims.latent_dim, dims.embed_dim);
    }
    p.joint_bias.assign(dims.latent_dim, 0.0);
    p.output = DenseLayer{Matrix(1, dims.latent_dim), Vector(1, 0.0)};
    return p;
}

size_t DhneParams::parameter_count() const {
    const size_t enc = 3 * (dims.embed_dim * dims.feature_dim + dims.embed_dim);
    const size_t dec = 3 * (dims.feature_dim * dims.embed_dim + dims.feature_dim);
    const size_t joint_w = 3 * dims.latent_dim * dims.embed_dim;
    return enc + dec + joint_w + dims.latent_dim + dims.latent_dim + 1;
}

namespace {

void append(std::vector<double>& out, const Matrix& m) {
    out.insert(out.end(), m.data().begin(), m.data().end());
}

void append(std::vector<double>& out, const Vector& v) {
    out.insert(out.end(), v.begin(), v.end());
}

void take(std::span<const double>& flat, Matrix& m) {
    std::memcpy(m.data().data(), flat.data(), m.data().size() * sizeof(double));
    flat = flat.subspan(m.data().size());
}

void take(std::span<const double>& flat, Vector& v) {
    std::memcpy(v.data(), flat.data(), v.size() * sizeof(double));
    flat = flat.subspan(v.size());
}

}  // namespace

std::vector<double> DhneParams::pack() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (int t = 0; t < 3; ++t) {
        append(out, encoder[t].weight);
        append(out, encoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        append(out, decoder[t].weight);
        append(out, decoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) append(out, joint[t]);
    append(out, joint_bias);
    append(out, output.weight);
    append(out, output.bias);
    return out;
}

DhneParams DhneParams::unpack(const DhneDims& dims, std::span<const double> flat) {
    DhneParams p = zeros(dims);
    if (flat.size() != p.parameter_count()) {
        throw ShapeError("unpack: expected " + std::to_string(p.parameter_count()) +
                         " values, got " + std::to_string(flat.size()));
    }
    for (int t = 0; t < 3; ++t) {
        take(flat, p.encoder[t].weight);
        take(flat, p.encoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        take(flat, p.decoder[t].weight);
        take(flat, p.decoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) take(flat, p.joint[t]);
    take(flat, p.joint_bias);
    take(flat, p.output.weight);
    take(flat, p.output.bias);
    return p;
}

void DhneParams::add_scaled(const DhneParams& other, double factor) {
    for (int t = 0; t < 3; ++t) {
        dhne::add_scaled(encoder[t].weight.data(), other.encoder[t].weight.data(), factor);
        dhne::add_scaled(encoder[t].bias, other.encoder[t].bias, factor);
        dhne::add_scaled(decoder[t].weight.data(), other.decoder[t].weight.data(), factor);
        dhne::add_scaled(decoder[t].bias, other.decoder[t].bias, factor);
        dhne::add_scaled(joint[t].data(), other.joint[t].data(), factor);
    }
    dhne::add_scaled(joint_bias, other.joint_bias, factor);
    dhne::add_scaled(output.weight.data(), other.output.weight.data(), factor);
    dhne::add_scaled(output.bias, other.output.bias, factor);
}

void DhneParams::scale(double factor) {
    for (int t = 0; t < 3; ++t) {
        for (double& v : encoder[t].weight.data()) v *= factor;
        for (double& v : encoder[t].bias) v *= factor;
        for (double& v : decoder[t].weight.data()) v *= factor;
        for (double& v : decoder[t].bias) v *= factor;
        for (double& v : joint[t].data()) v *= factor;
    }
    for (double& v : joint_bias) v *= factor;
    for (double& v : output.weight.data()) v *= factor;
    for (double& v : output.bias) v *= factor;
}

Vector encode(const DhneParams& params, uint32_t type, std::span<const double> adjacency_row) {
    check_type(type);
    check_len("encode", params.dims.feature_dim, adjacency_row.size());
    return layer_forward(params.encoder[type], adjacency_row, true);
}

Vector encode_sparse(const DhneParams& params, uint32_t type, std::span<const SparseEntry> row) {
    check_type(type);
    const DenseLayer& layer = params.encoder[type];
    Vector pre(layer.weight.rows());
    // Accumulation order matches the dense loop (ascending column index), so
    // the result is bit-identical to encode on the materialized row.
    for (size_t r = 0; r < layer.weight.rows(); ++r) {
        const auto w = layer.weight.row(r);
        double acc = 0.0;
        for (const SparseEntry& e : row) {
            if (e.index >= w.size()) {
                throw ShapeError("encode_sparse: entry index " + std::to_string(e.index) +
                                 " outside feature dimension " + std::to_string(w.size()));
            }
            acc += w[e.index] * static_cast<double>(e.count);
        }
        pre[r] = acc + layer.bias[r];
    }
    sigmoid_inplace(pre);
    return pre;
}

Vector decode(const DhneParams& params, uint32_t type, std::span<const double> embedding) {
    check_type(type);
    check_len("decode", params.dims.embed_dim, embedding.size());
    return layer_forward(params.decoder[type], embedding, true);
}

namespace {

// Joint latent pre-activation: joint_a x_a + joint_b x_b + joint_c x_c + bias.
Vector joint_preactivation(const DhneParams& params, std::span<const double> x_a,
                           std::span<const double> x_b, std::span<const double> x_c) {
    check_len("score_tuple (type 0)", params.dims.embed_dim, x_a.size());
    check_len("score_tuple (type 1)", params.dims.embed_dim, x_b.size());
    check_len("score_tuple (type 2)", params.dims.embed_dim, x_c.size());
    Vector pre = params.joint_bias;
    const std::array<std::span<const double>, 3> xs = {x_a, x_b, x_c};
    for (int t = 0; t < 3; ++t) {
        const Matrix& w = params.joint[t];
        for (size_t r = 0; r < w.rows(); ++r) {
            const auto row = w.row(r);
            double acc = 0.0;
            for (size_t c = 0; c < row.size(); ++c) acc += row[c] * xs[t][c];
            pre[r] += acc;
        }
    }
    return pre;
}

double clamp_score(double s) {
    if (s < kScoreClamp) return kScoreClamp;
    if (s > 1.0 - kScoreClamp) return 1.0 - kScoreClamp;
    return s;
}

}  // namespace

double score_tuple(const DhneParams& params, std::span<const double> x_a,
                   std::span<const double> x_b, std::span<const double> x_c) {
    Vector latent = joint_preactivation(params, x_a, x_b, x_c);
    sigmoid_inplace(latent);
    double pre = params.output.bias[0];
    const auto w = params.output.weight.row(0);
    for (size_t i = 0; i < w.size(); ++i) pre += w[i] * latent[i];
    return clamp_score(sigmoid_scalar(pre));
}

double score_edge(const DhneParams& params, const EmbeddingTable& table, const Hyperedge& e) {
    return score_tuple(params, table.row(e.members[0]), table.row(e.members[1]),
                       table.row(e.members[2]));
}

double loss_first_order(double label, double score) {
    if (!(score > 0.0 && score < 1.0)) {
        throw std::domain_error("loss_first_order: score must lie strictly in (0, 1)");
    }
    return -(label * std::log(score) + (1.0 - label) * std::log(1.0 - score));
}

double loss_second_order(std::span<const double> input_row, std::span<const double> reconstruction) {
    check_len("loss_second_order", input_row.size(), reconstruction.size());
    double acc = 0.0;
    for (size_t j = 0; j < input_row.size(); ++j) {
        if (input_row[j] == 0.0) continue;
        const double diff = input_row[j] - reconstruction[j];
        acc += diff * diff;
    }
    return acc;
}

double total_loss(double first_order, double second_order, double alpha) {
    if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
    return first_order + alpha * second_order;
}

BatchGradients gradients(const DhneParams& params, std::span<const TupleBatchItem> batch,
                         double alpha) {
    if (batch.empty()) throw ConfigError("gradients: batch must be non-empty");
    if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");

    const DhneDims& dims = params.dims;
    BatchGradients result;
    result.grads = DhneParams::zeros(dims);
    DhneParams& g = result.grads;

    std::array<Vector, 3> x, z;         // embeddings and their pre-activations
    std::array<Vector, 3> recon;        // decoder outputs (positives only)
    std::array<Vector, 3> dx;           // loss gradient w.r.t. embeddings
    Vector latent, d_latent, dz, dh;

    for (const TupleBatchItem& item : batch) {
        if (item.label != 0.0 && item.label != 1.0) {
            throw ConfigError("gradients: labels must be 0 or 1");
        }
        const bool positive = item.label == 1.0;

        // Forward.
        for (uint32_t t = 0; t < 3; ++t) {
            check_len("gradients", dims.feature_dim, item.rows[t].size());
            z[t] = matvec(params.encoder[t].weight, item.rows[t]);
            for (size_t i = 0; i < z[t].size(); ++i) z[t][i] += params.encoder[t].bias[i];
            x[t] = sigmoid(z[t]);
        }
        latent = joint_preactivation(params, x[0], x[1], x[2]);
        sigmoid_inplace(latent);
        double out_pre = params.output.bias[0];
        {
            const auto w = params.output.weight.row(0);
            for (size_t i = 0; i < w.size(); ++i) out_pre += w[i] * latent[i];
        }
        const double score = clamp_score(sigmoid_scalar(out_pre));
        if (!std::isfinite(score)) throw NumericError("gradients: non-finite similarity score");
        const double l1 = loss_first_order(item.label, score);

        double l2 = 0.0;
        if (positive && alpha != 0.0) {
            for (uint32_t t = 0; t < 3; ++t) {
                recon[t] = layer_forward(params.decoder[t], x[t], true);
                l2 += loss_second_order(item.rows[t], recon[t]);
            }
        }
        const double item_loss = l1 + alpha * l2;
        if (!std::isfinite(item_loss)) throw NumericError("gradients: non-finite loss");
        result.mean_loss += item_loss;
        result.mean_first_order += l1;
        result.mean_second_order += l2;

        // Backward. d(loss)/d(out_pre) reduces to score - label.
        const double d_out = score - item.label;
        {
            auto w = g.output.weight.row(0);
            for (size_t i = 0; i < w.size(); ++i) w[i] += d_out * latent[i];
        }
        g.output.bias[0] += d_out;

        d_latent.assign(dims.latent_dim, 0.0);
        {
            const auto w = params.output.weight.row(0);
            for (size_t i = 0; i < w.size(); ++i) {
                d_latent[i] = d_out * w[i] * latent[i] * (1.0 - latent[i]);
            }
        }
        for (size_t i = 0; i < dims.latent_dim; ++i) g.joint_bias[i] += d_latent[i];
        for (uint32_t t = 0; t < 3; ++t) {
            add_outer(g.joint[t], d_latent, x[t], 1.0);
            dx[t] = matvec_transposed(params.joint[t], d_latent);
        }

        if (positive && alpha != 0.0) {
            for (uint32_t t = 0; t < 3; ++t) {
                // Masked reconstruction gradient: zero-support positions of the
                // input row contribute nothing.
                dh.assign(dims.feature_dim, 0.0);
                bool any = false;
                for (size_t j = 0; j < dims.feature_dim; ++j) {
                    if (item.rows[t][j] == 0.0) continue;
                    const double r = recon[t][j];
                    dh[j] = alpha * 2.0 * (r - item.rows[t][j]) * r * (1.0 - r);
                    any = true;
                }
                if (!any) continue;
                add_outer(g.decoder[t].weight, dh, x[t], 1.0);
                for (size_t j = 0; j < dims.feature_dim; ++j) g.decoder[t].bias[j] += dh[j];
                matvec_transposed_add(params.decoder[t].weight, dh, dx[t]);
            }
        }

        for (uint32_t t = 0; t < 3; ++t) {
            dz.assign(dims.embed_dim, 0.0);
            for (size_t i = 0; i < dims.embed_dim; ++i) {
                dz[i] = dx[t][i] * x[t][i] * (1.0 - x[t][i]);
            }
            add_outer(g.encoder[t].weight, dz, item.rows[t], 1.0);
            for (size_t i = 0; i < dims.embed_dim; ++i) g.encoder[t].bias[i] += dz[i];
        }
    }

    const double inv = 1.0 / static_cast<double>(batch.size());
    g.scale(inv);
    result.mean_loss *= inv;
    result.mean_first_order *= inv;
    result.mean_second_order *= inv;
    return result;
}

Vector embed_out_of_sample(const DhneParams& params, uint32_t type, std::span<const double> row) {
    return encode(params, type, row);
}

Vector embed_out_of_sample(const DhneParams& params, uint32_t type,
                           std::span<const SparseEntry> row) {
    return encode_sparse(params, type, row);
}

EmbeddingTable compute_embeddings(const DhneParams& params, const Hypergraph& g,
                                  const SparseAdjacency& adj) {
    if (params.dims.feature_dim != adj.global_size()) {
        throw ShapeError("compute_embeddings: adjacency size " + std::to_string(adj.global_size()) +
                         " does not match feature dimension " +
                         std::to_string(params.dims.feature_dim));
    }
    EmbeddingTable table;
    for (uint32_t t = 0; t < 3; ++t) {
        table.per_type[t] = Matrix(g.count(t), params.dims.embed_dim);
        for (uint32_t i = 0; i < g.count(t); ++i) {
            const uint32_t global = g.global_index(NodeRef{t, i});
            const Vector emb = encode_sparse(params, t, adj.row(global));
            std::copy(emb.begin(), emb.end(), table.per_type[t].row(i).begin());
        }
    }
    return table;
}

}  // namespace dhne
