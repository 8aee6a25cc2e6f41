#include "dhne/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dhne/errors.hpp"

namespace dhne {

double sigmoid_scalar(double x) {
    x = std::clamp(x, -700.0, 700.0);
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Vector sigmoid(std::span<const double> x) {
    Vector out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = sigmoid_scalar(x[i]);
    return out;
}

void sigmoid_inplace(Vector& x) {
    for (double& v : x) v = sigmoid_scalar(v);
}

static void check_length(const char* op, size_t expected, size_t actual) {
    if (expected != actual) {
        throw ShapeError(std::string(op) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
    }
}

void matvec_into(const Matrix& w, std::span<const double> x, Vector& out) {
    check_length("matvec", w.cols(), x.size());
    out.assign(w.rows(), 0.0);
    for (size_t r = 0; r < w.rows(); ++r) {
        const auto row = w.row(r);
        double acc = 0.0;
        for (size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
        out[r] = acc;
    }
}

Vector matvec(const Matrix& w, std::span<const double> x) {
    Vector out;
    matvec_into(w, x, out);
    return out;
}

void matvec_transposed_add(const Matrix& w, std::span<const double> x, Vector& out) {
    check_length("matvec_transposed", w.rows(), x.size());
    out.resize(w.cols(), 0.0);
    for (size_t r = 0; r < w.rows(); ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const auto row = w.row(r);
        for (size_t c = 0; c < row.size(); ++c) out[c] += xr * row[c];
    }
}

Vector matvec_transposed(const Matrix& w, std::span<const double> x) {
    Vector out(w.cols(), 0.0);
    matvec_transposed_add(w, x, out);
    return out;
}

void add_outer(Matrix& m, std::span<const double> a, std::span<const double> b, double scale) {
    check_length("add_outer rows", m.rows(), a.size());
    check_length("add_outer cols", m.cols(), b.size());
    for (size_t r = 0; r < m.rows(); ++r) {
        const double ar = scale * a[r];
        if (ar == 0.0) continue;
        auto row = m.row(r);
        for (size_t c = 0; c < row.size(); ++c) row[c] += ar * b[c];
    }
}

void add_scaled(Vector& v, std::span<const double> other, double scale) {
    check_length("add_scaled", v.size(), other.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] += scale * other[i];
}

Vector layer_forward(const DenseLayer& layer, std::span<const double> x, bool activate) {
    check_length("layer_forward", layer.in_dim(), x.size());
    Vector out = matvec(layer.weight, x);
    for (size_t i = 0; i < out.size(); ++i) out[i] += layer.bias[i];
    if (activate) sigmoid_inplace(out);
    return out;
}

Matrix init_matrix(size_t out, size_t in, Rng& rng) {
    if (out == 0 || in == 0) throw ConfigError("init_params: dimensions must be >= 1");
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    Matrix w(out, in);
    for (double& v : w.data()) v = rng.uniform(-bound, bound);
    return w;
}

DenseLayer init_params(size_t out, size_t in, Rng& rng) {
    DenseLayer layer;
    layer.weight = init_matrix(out, in, rng);
    layer.bias.assign(out, 0.0);
    return layer;
}

DenseLayer init_params(size_t out, size_t in, uint64_t seed) {
    Rng rng(seed);
    return init_params(out, in, rng);
}

double finite_diff_check(const std::function<double(const Vector&)>& f,
                         const Vector& analytic_grad, Vector point, double step) {
    if (step <= 0.0) throw ConfigError("finite_diff_check: step must be positive");
    check_length("finite_diff_check", point.size(), analytic_grad.size());
    double worst = 0.0;
    for (size_t i = 0; i < point.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + step;
        const double up = f(point);
        point[i] = saved - step;
        const double down = f(point);
        point[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericError("finite_diff_check: objective returned a non-finite value");
        }
        const double numeric = (up - down) / (2.0 * step);
        const double rel = std::abs(analytic_grad[i] - numeric) / std::max(1.0, std::abs(numeric));
        worst = std::max(worst, rel);
    }
    return worst;
}

}  // namespace dhne
