#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dhne/rng.hpp"

namespace dhne {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit floats.
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

// Fully connected layer: weight is (out x in), bias has length out.
struct DenseLayer {
    Matrix weight;
    Vector bias;

    size_t out_dim() const { return weight.rows(); }
    size_t in_dim() const { return weight.cols(); }
};

// Numerically stable logistic; the argument is clamped to [-700, 700] before
// exponentiation because adjacency rows can produce large pre-activations.
double sigmoid_scalar(double x);
Vector sigmoid(std::span<const double> x);
void sigmoid_inplace(Vector& x);

// y = W x  (checks x length against W cols).
Vector matvec(const Matrix& w, std::span<const double> x);
void matvec_into(const Matrix& w, std::span<const double> x, Vector& out);

// y = W^T x  (x length must equal W rows).
Vector matvec_transposed(const Matrix& w, std::span<const double> x);
void matvec_transposed_add(const Matrix& w, std::span<const double> x, Vector& out);

// m += scale * a b^T  with a of length m.rows and b of length m.cols.
void add_outer(Matrix& m, std::span<const double> a, std::span<const double> b, double scale);

void add_scaled(Vector& v, std::span<const double> other, double scale);

// sigma(W x + b) when activate, else W x + b.
Vector layer_forward(const DenseLayer& layer, std::span<const double> x, bool activate);

// Glorot-uniform weights in [-sqrt(6/(in+out)), +sqrt(6/(in+out))], zero bias.
DenseLayer init_params(size_t out, size_t in, uint64_t seed);
DenseLayer init_params(size_t out, size_t in, Rng& rng);
Matrix init_matrix(size_t out, size_t in, Rng& rng);

// Central-difference gradient verification. Returns the max over coordinates of
// |analytic - numeric| / max(1, |numeric|). Throws NumericError on non-finite f.
double finite_diff_check(const std::function<double(const Vector&)>& f,
                         const Vector& analytic_grad, Vector point, double step);

}  // namespace dhne
