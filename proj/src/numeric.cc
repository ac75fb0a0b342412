#include "radembed/numeric.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace radembed {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Real> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw ConfigError("Matrix: data length " + std::to_string(data_.size()) + " != " +
                      std::to_string(rows_) + "x" + std::to_string(cols_));
}

void Matrix::fill(Real v) { std::fill(data_.begin(), data_.end(), v); }

Vector linear_forward(const Matrix& w, std::span<const Real> b, std::span<const Real> x) {
  if (w.cols() != x.size() || w.rows() != b.size())
    throw ConfigError("linear_forward: W is " + std::to_string(w.rows()) + "x" +
                      std::to_string(w.cols()) + ", b has " + std::to_string(b.size()) +
                      ", x has " + std::to_string(x.size()));
  Vector y(b.begin(), b.end());
  for (std::size_t r = 0; r < w.rows(); ++r) y[r] += dot(w.row(r), x);
  return y;
}

void linear_backward_input(const Matrix& w, std::span<const Real> g, std::span<Real> y) {
  if (w.rows() != g.size() || w.cols() != y.size())
    throw ConfigError("linear_backward_input: shape mismatch");
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const Real gr = g[r];
    if (gr == 0.0) continue;
    auto row = w.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) y[c] += gr * row[c];
  }
}

void add_outer(Matrix& dw, std::span<const Real> g, std::span<const Real> x) {
  if (dw.rows() != g.size() || dw.cols() != x.size())
    throw ConfigError("add_outer: shape mismatch");
  for (std::size_t r = 0; r < dw.rows(); ++r) {
    const Real gr = g[r];
    if (gr == 0.0) continue;
    auto row = dw.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += gr * x[c];
  }
}

Vector hardtanh(std::span<const Real> x) {
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(-1.0, std::min(1.0, x[i]));
  return y;
}

void hardtanh_backward(std::span<const Real> z, std::span<Real> g) {
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(z[i] > -1.0 && z[i] < 1.0)) g[i] = 0.0;
}

Vector softmax(std::span<const Real> z) {
  const Real m = *std::max_element(z.begin(), z.end());
  Vector p(z.size());
  Real total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - m);
    total += p[i];
  }
  for (Real& v : p) v /= total;
  return p;
}

Real log_sum_exp(std::span<const Real> z) {
  const Real m = *std::max_element(z.begin(), z.end());
  if (m == -std::numeric_limits<Real>::infinity()) return m;
  Real total = 0.0;
  for (Real v : z) total += std::exp(v - m);
  return m + std::log(total);
}

Real dot(std::span<const Real> a, std::span<const Real> b) {
  Real s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void sgd_step(std::span<Real> param, std::span<const Real> grad, Real lr) {
  if (param.size() != grad.size()) throw ConfigError("sgd_step: shape mismatch");
  if (!(lr > 0.0)) throw ConfigError("sgd_step: learning rate must be positive");
  for (std::size_t i = 0; i < param.size(); ++i) param[i] -= lr * grad[i];
}

void sgd_step(Matrix& param, const Matrix& grad, Real lr) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols())
    throw ConfigError("sgd_step: shape mismatch");
  sgd_step(param.flat(), grad.flat(), lr);
}

bool all_finite(std::span<const Real> x) {
  return std::all_of(x.begin(), x.end(), [](Real v) { return std::isfinite(v); });
}

Real finite_diff_check(const std::function<Real(std::span<const Real>)>& f,
                       std::span<const Real> params, std::span<const Real> analytic_grad,
                       Real eps) {
  if (!(eps > 0.0)) throw ConfigError("finite_diff_check: eps must be positive");
  if (params.size() != analytic_grad.size())
    throw ConfigError("finite_diff_check: gradient length mismatch");
  Vector p(params.begin(), params.end());
  Real worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Real saved = p[i];
    p[i] = saved + eps;
    const Real up = f(p);
    p[i] = saved - eps;
    const Real down = f(p);
    p[i] = saved;
    const Real numeric = (up - down) / (2.0 * eps);
    const Real a = analytic_grad[i];
    const Real denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ConfigError("Rng::below: n must be positive");
  // Rejection sampling on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

}  // namespace radembed
