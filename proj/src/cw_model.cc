#include "radembed/cw_model.h"

#include <cmath>

#include "radembed/error.h"

namespace radembed {

CwParams CwParams::zeros(std::size_t window, std::size_t dim, std::size_t hidden) {
  return CwParams{Matrix(hidden, window * dim), Vector(hidden, 0.0), Matrix(1, hidden), 0.0};
}

void CwParams::set_zero() {
  w1.fill(0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  w2.fill(0.0);
  b2 = 0.0;
}

RadicalHead RadicalHead::zeros(std::size_t num_radicals, std::size_t dim) {
  return RadicalHead{Matrix(num_radicals, dim), Vector(num_radicals, 0.0)};
}

void RadicalHead::set_zero() {
  w.fill(0.0);
  std::fill(b.begin(), b.end(), 0.0);
}

std::span<Real> SparseColumnGrad::at(CharIndex c) {
  auto [it, inserted] = slot_.emplace(c, ids_.size());
  if (!inserted) return cols_[it->second];
  ids_.push_back(c);
  cols_.emplace_back(dim_, 0.0);
  return cols_.back();
}

ScoreTrace score_forward(const EmbeddingMatrix& emb, const CwParams& p,
                         std::span<const CharIndex> window) {
  const std::size_t d = emb.dim();
  if (window.size() * d != p.input_size())
    throw ConfigError("score_ngram: window of " + std::to_string(window.size()) +
                      " does not match W1 input size " + std::to_string(p.input_size()));
  ScoreTrace t;
  t.input.resize(window.size() * d);
  for (std::size_t k = 0; k < window.size(); ++k) {
    auto col = emb.column(window[k]);
    std::copy(col.begin(), col.end(), t.input.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
  t.pre = linear_forward(p.w1, p.b1, t.input);
  t.hidden = hardtanh(t.pre);
  t.score = dot(p.w2.row(0), t.hidden) + p.b2;
  return t;
}

Real score_ngram(const EmbeddingMatrix& emb, const CwParams& p, std::span<const CharIndex> window) {
  return score_forward(emb, p, window).score;
}

void score_backward(const ScoreTrace& trace, const CwParams& p, std::span<const CharIndex> window,
                    Real coeff, CwParams& grad, SparseColumnGrad& emb_grad) {
  const std::size_t h = p.hidden();
  grad.b2 += coeff;
  auto gw2 = grad.w2.row(0);
  auto w2 = p.w2.row(0);
  Vector dz(h);
  for (std::size_t j = 0; j < h; ++j) {
    gw2[j] += coeff * trace.hidden[j];
    dz[j] = coeff * w2[j];
  }
  hardtanh_backward(trace.pre, dz);
  add_outer(grad.w1, dz, trace.input);
  for (std::size_t j = 0; j < h; ++j) grad.b1[j] += dz[j];

  Vector dx(trace.input.size(), 0.0);
  linear_backward_input(p.w1, dz, dx);
  const std::size_t d = emb_grad.dim();
  for (std::size_t k = 0; k < window.size(); ++k) {
    auto col = emb_grad.at(window[k]);
    for (std::size_t i = 0; i < d; ++i) col[i] += dx[k * d + i];
  }
}

Real ranking_loss(const EmbeddingMatrix& emb, const CwParams& p, std::span<const CharIndex> s,
                  std::span<const CharIndex> s_w) {
  return std::max(0.0, 1.0 - score_ngram(emb, p, s) + score_ngram(emb, p, s_w));
}

namespace {

struct RadicalTrace {
  Vector probs;
  Real loss = 0.0;
};

RadicalTrace radical_forward(const EmbeddingMatrix& emb, const RadicalHead& head, CharIndex c,
                             RadicalIndex gold) {
  if (gold < 0 || static_cast<std::size_t>(gold) >= head.num_radicals())
    throw ConfigError("radical_loss: gold class " + std::to_string(gold) + " out of range");
  const Vector logits = linear_forward(head.w, head.b, emb.column(c));
  // -log softmax computed via log-sum-exp rather than log(p) so a confident
  // wrong prediction stays finite.
  RadicalTrace t;
  t.loss = log_sum_exp(logits) - logits[static_cast<std::size_t>(gold)];
  t.probs = softmax(logits);
  return t;
}

void radical_backward(const RadicalTrace& t, const EmbeddingMatrix& emb, const RadicalHead& head,
                      CharIndex c, RadicalIndex gold, Real coeff, RadicalHead& grad,
                      SparseColumnGrad& emb_grad) {
  Vector g(t.probs.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = coeff * t.probs[i];
  g[static_cast<std::size_t>(gold)] -= coeff;
  add_outer(grad.w, g, emb.column(c));
  for (std::size_t i = 0; i < g.size(); ++i) grad.b[i] += g[i];
  linear_backward_input(head.w, g, emb_grad.at(c));
}

}  // namespace

Real radical_loss(const EmbeddingMatrix& emb, const RadicalHead& head, CharIndex c,
                  RadicalIndex gold) {
  return radical_forward(emb, head, c, gold).loss;
}

HybridGradient HybridGradient::zeros_like(const EmbeddingMatrix& emb, const CwParams& p,
                                          const RadicalHead& head) {
  HybridGradient g{CwParams{Matrix(p.w1.rows(), p.w1.cols()), Vector(p.b1.size(), 0.0),
                            Matrix(1, p.w2.cols()), 0.0},
                   RadicalHead::zeros(head.num_radicals(), head.w.cols()),
                   SparseColumnGrad(emb.dim())};
  return g;
}

void HybridGradient::reset() {
  cw.set_zero();
  head.set_zero();
  emb.clear();
}

HybridLoss hybrid_loss(const EmbeddingMatrix& emb, const CwParams& p, const RadicalHead& head,
                       const NgramSample& sample, std::span<const RadicalIndex> gold, Real alpha,
                       HybridGradient* grad) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("hybrid_loss: alpha must be in [0, 1]");
  if (grad) grad->reset();
  const auto& s = sample.window;
  const std::size_t mid = sample.middle();
  HybridLoss out;

  if (alpha > 0.0) {
    const auto s_w = sample.corrupted();
    const ScoreTrace good = score_forward(emb, p, s);
    const ScoreTrace bad = score_forward(emb, p, s_w);
    const Real margin = 1.0 - good.score + bad.score;
    out.context = std::max(0.0, margin);
    if (grad && margin > 0.0) {
      score_backward(good, p, s, -alpha, grad->cw, grad->emb);
      score_backward(bad, p, s_w, alpha, grad->cw, grad->emb);
    }
  }

  if (alpha < 1.0) {
    auto gold_of = [&](CharIndex c) {
      if (c < 0 || static_cast<std::size_t>(c) >= gold.size())
        throw ConfigError("hybrid_loss: character index outside the radical table");
      return gold[static_cast<std::size_t>(c)];
    };
    // Every context position of s also appears in s_w, so its term is
    // computed once and counted twice.
    const Real w = 1.0 - alpha;
    std::vector<Real> terms(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      const RadicalTrace t = radical_forward(emb, head, s[k], gold_of(s[k]));
      terms[k] = t.loss;
      if (grad)
        radical_backward(t, emb, head, s[k], gold_of(s[k]), k == mid ? w : 2.0 * w, grad->head,
                         grad->emb);
    }
    const CharIndex cm = sample.corrupt_middle;
    const RadicalTrace tw = radical_forward(emb, head, cm, gold_of(cm));
    if (grad) radical_backward(tw, emb, head, cm, gold_of(cm), w, grad->head, grad->emb);

    Real sum_s = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) sum_s += terms[k];
    Real sum_sw = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) sum_sw += k == mid ? tw.loss : terms[k];
    out.radical = sum_s + sum_sw;
  }

  out.total = alpha * out.context + (1.0 - alpha) * out.radical;
  return out;
}

}  // namespace radembed
