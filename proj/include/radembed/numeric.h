#pragma once

// Small dense kernels shared by the embedding and CRF models. Everything is
// double precision; gradients elsewhere in the library are hand-derived and
// checked against finite_diff_check.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "radembed/error.h"

namespace radembed {

using Real = double;
using Vector = std::vector<Real>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Real fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  Real& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Real operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Real> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Real> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<Real> flat() { return data_; }
  std::span<const Real> flat() const { return data_; }

  void fill(Real v);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

// Returns W x + b.
Vector linear_forward(const Matrix& w, std::span<const Real> b, std::span<const Real> x);

// y += W^T g, the input-side backward pass of linear_forward.
void linear_backward_input(const Matrix& w, std::span<const Real> g, std::span<Real> y);

// dW += g x^T.
void add_outer(Matrix& dw, std::span<const Real> g, std::span<const Real> x);

Vector hardtanh(std::span<const Real> x);

// Multiplies g by the HardTanh derivative at pre-activation z (1 strictly
// inside (-1, 1), 0 elsewhere).
void hardtanh_backward(std::span<const Real> z, std::span<Real> g);

Vector softmax(std::span<const Real> z);

Real log_sum_exp(std::span<const Real> z);

Real dot(std::span<const Real> a, std::span<const Real> b);

// param -= lr * grad.
void sgd_step(std::span<Real> param, std::span<const Real> grad, Real lr);
void sgd_step(Matrix& param, const Matrix& grad, Real lr);

bool all_finite(std::span<const Real> x);

// Compares analytic_grad against central differences of f around params,
// one coordinate at a time. Returns the max over coordinates of
// |a - n| / max(|a|, |n|, 1e-8).
Real finite_diff_check(const std::function<Real(std::span<const Real>)>& f,
                       std::span<const Real> params, std::span<const Real> analytic_grad,
                       Real eps = 1e-5);

// Seeded generator: the 64-bit Mersenne Twister (std::mt19937_64, whose output
// sequence is fixed by the C++ standard) with distribution code implemented
// here, so draws are identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  Real uniform() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  void fill_uniform(std::span<Real> out, Real scale) {
    for (Real& x : out) x = uniform(-scale, scale);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace radembed
