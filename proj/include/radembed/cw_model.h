#pragma once

// Context scorer and radical-prediction head of the radical-enhanced
// embedding model, with hand-derived gradients.
//
//   score(s)   = W2 . HardTanh(W1 [x_1 ... x_n] + b1) + b2
//   loss_c     = max(0, 1 - score(s) + score(s_w))
//   loss_r(c)  = -log softmax(Wr e_c + br)[gold(c)]
//   loss       = alpha * loss_c
//              + (1 - alpha) * (sum_{c in s} loss_r(c) + sum_{c in s_w} loss_r(c))
//
// Characters shared by s and s_w are counted in both sums.

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "radembed/embedding.h"
#include "radembed/ngram.h"
#include "radembed/numeric.h"
#include "radembed/radicals.h"

namespace radembed {

struct CwParams {
  Matrix w1;  // hidden x (window * dim)
  Vector b1;  // hidden
  Matrix w2;  // 1 x hidden
  Real b2 = 0.0;

  static CwParams zeros(std::size_t window, std::size_t dim, std::size_t hidden);
  std::size_t hidden() const { return w1.rows(); }
  std::size_t input_size() const { return w1.cols(); }
  void set_zero();
  bool operator==(const CwParams&) const = default;
};

struct RadicalHead {
  Matrix w;  // num_radicals x dim
  Vector b;  // num_radicals

  static RadicalHead zeros(std::size_t num_radicals, std::size_t dim);
  std::size_t num_radicals() const { return w.rows(); }
  void set_zero();
  bool operator==(const RadicalHead&) const = default;
};

// Gradient of a few embedding columns, keyed by character index. Repeated
// characters accumulate into one entry.
class SparseColumnGrad {
 public:
  explicit SparseColumnGrad(std::size_t dim = 0) : dim_(dim) {}

  void clear() {
    ids_.clear();
    cols_.clear();
    slot_.clear();
  }
  std::span<Real> at(CharIndex c);
  std::size_t size() const { return ids_.size(); }
  CharIndex id(std::size_t k) const { return ids_[k]; }
  std::span<const Real> column(std::size_t k) const { return cols_[k]; }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::vector<CharIndex> ids_;
  std::vector<Vector> cols_;
  std::unordered_map<CharIndex, std::size_t> slot_;
};

struct ScoreTrace {
  Vector input;   // concatenated window embeddings
  Vector pre;     // W1 x + b1
  Vector hidden;  // HardTanh(pre)
  Real score = 0.0;
};

ScoreTrace score_forward(const EmbeddingMatrix& emb, const CwParams& p,
                         std::span<const CharIndex> window);

Real score_ngram(const EmbeddingMatrix& emb, const CwParams& p, std::span<const CharIndex> window);

// Adds coeff * d score / d params into `grad` and the window columns into `emb_grad`.
void score_backward(const ScoreTrace& trace, const CwParams& p, std::span<const CharIndex> window,
                    Real coeff, CwParams& grad, SparseColumnGrad& emb_grad);

Real ranking_loss(const EmbeddingMatrix& emb, const CwParams& p, std::span<const CharIndex> s,
                  std::span<const CharIndex> s_w);

Real radical_loss(const EmbeddingMatrix& emb, const RadicalHead& head, CharIndex c,
                  RadicalIndex gold);

struct HybridGradient {
  CwParams cw;
  RadicalHead head;
  SparseColumnGrad emb;

  static HybridGradient zeros_like(const EmbeddingMatrix& emb, const CwParams& p,
                                   const RadicalHead& head);
  void reset();
};

struct HybridLoss {
  Real total = 0.0;
  Real context = 0.0;  // ranking loss
  Real radical = 0.0;  // both radical sums, unweighted
};

// Loss of one sample. `gold` maps every vocabulary index to its radical
// class. When `grad` is non-null it is reset and filled with the gradient.
// At alpha == 1 the radical terms are skipped and at alpha == 0 the ranking
// term is skipped, so the degenerate cases are exact.
HybridLoss hybrid_loss(const EmbeddingMatrix& emb, const CwParams& p, const RadicalHead& head,
                       const NgramSample& sample, std::span<const RadicalIndex> gold, Real alpha,
                       HybridGradient* grad = nullptr);

}  // namespace radembed
