#pragma once

// Random tiny models and parameter flattening for gradient checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "radembed/cw_model.h"
#include "radembed/embed_trainer.h"
#include "radembed/neural_crf.h"
#include "radembed/numeric.h"

namespace fixtures {

using namespace radembed;

struct TinyEmbedModel {
  std::size_t vocab_size, dim, hidden, window, radicals;
  EmbeddingMatrix emb;
  CwParams cw;
  RadicalHead head;
  std::vector<RadicalIndex> gold;
};

inline TinyEmbedModel random_embed_model(Rng& rng, std::size_t vocab_size, std::size_t dim,
                                         std::size_t hidden, std::size_t window,
                                         std::size_t radicals, Real scale = 1.0) {
  TinyEmbedModel m{vocab_size, dim, hidden, window, radicals,
                   EmbeddingMatrix(dim, vocab_size), CwParams::zeros(window, dim, hidden),
                   RadicalHead::zeros(radicals, dim), {}};
  rng.fill_uniform(m.emb.flat(), scale);
  rng.fill_uniform(m.cw.w1.flat(), scale);
  rng.fill_uniform(m.cw.b1, scale);
  rng.fill_uniform(m.cw.w2.flat(), scale);
  m.cw.b2 = rng.uniform(-scale, scale);
  rng.fill_uniform(m.head.w.flat(), scale);
  rng.fill_uniform(m.head.b, scale);
  for (std::size_t i = 0; i < vocab_size; ++i)
    m.gold.push_back(static_cast<RadicalIndex>(rng.below(radicals)));
  return m;
}

// Order: W_e, W1, b1, W2, b2, Wr, br.
inline Vector flatten(const TinyEmbedModel& m) {
  Vector out;
  auto add = [&](std::span<const Real> s) { out.insert(out.end(), s.begin(), s.end()); };
  add(m.emb.flat());
  add(m.cw.w1.flat());
  add(m.cw.b1);
  add(m.cw.w2.flat());
  out.push_back(m.cw.b2);
  add(m.head.w.flat());
  add(m.head.b);
  return out;
}

inline void unflatten(TinyEmbedModel& m, std::span<const Real> p) {
  std::size_t pos = 0;
  auto take = [&](std::span<Real> dst) {
    std::copy(p.begin() + static_cast<std::ptrdiff_t>(pos),
              p.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
    pos += dst.size();
  };
  take(m.emb.flat());
  take(m.cw.w1.flat());
  take(m.cw.b1);
  take(m.cw.w2.flat());
  m.cw.b2 = p[pos++];
  take(m.head.w.flat());
  take(m.head.b);
}

inline Vector flatten_gradient(const TinyEmbedModel& m, const HybridGradient& g) {
  Vector emb(m.emb.flat().size(), 0.0);
  for (std::size_t k = 0; k < g.emb.size(); ++k) {
    auto col = g.emb.column(k);
    std::copy(col.begin(), col.end(), emb.begin() + static_cast<std::ptrdiff_t>(g.emb.id(k) * m.dim));
  }
  Vector out = emb;
  auto add = [&](std::span<const Real> s) { out.insert(out.end(), s.begin(), s.end()); };
  add(g.cw.w1.flat());
  add(g.cw.b1);
  add(g.cw.w2.flat());
  out.push_back(g.cw.b2);
  add(g.head.w.flat());
  add(g.head.b);
  return out;
}

// Smallest distance of any HardTanh pre-activation to +-1 over the given
// windows, and of the hinge argument to 0. Finite differences are only
// meaningful away from these kinks.
inline Real kink_distance(const TinyEmbedModel& m, const NgramSample& s) {
  const auto good = score_forward(m.emb, m.cw, s.window);
  const auto bad = score_forward(m.emb, m.cw, s.corrupted());
  Real d = std::abs(1.0 - good.score + bad.score);
  for (const auto* t : {&good, &bad})
    for (Real z : t->pre) d = std::min({d, std::abs(z - 1.0), std::abs(z + 1.0)});
  return d;
}

// A random sample over the tiny vocabulary; every window slot is a real
// character or PAD.
inline NgramSample random_sample(Rng& rng, const TinyEmbedModel& m) {
  if (m.vocab_size < 4) throw std::invalid_argument("random_sample needs two real characters");
  NgramSample s;
  for (std::size_t k = 0; k < m.window; ++k)
    s.window.push_back(static_cast<CharIndex>(rng.below(m.vocab_size)));
  do {
    s.corrupt_middle = static_cast<CharIndex>(2 + rng.below(m.vocab_size - 2));
  } while (s.corrupt_middle == s.window[s.middle()]);
  return s;
}

using LD = long double;

// Central differences of an extended-precision reference loss F against
// `analytic`, with the same relative error as finite_diff_check. Doing the
// reference in long double keeps its rounding far below eps * 1e-8, so an
// exactly cancelling coordinate does not show up as a spurious 1e-3 error.
template <typename F>
Real ld_fd_error(const F& f, std::span<const Real> params, std::span<const Real> analytic,
                 Real eps = 1e-5) {
  std::vector<LD> p(params.begin(), params.end());
  LD worst = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const LD keep = p[i];
    p[i] = keep + eps;
    const LD up = f(p);
    p[i] = keep - eps;
    const LD down = f(p);
    p[i] = keep;
    const LD n = (up - down) / (2.0L * eps);
    const LD a = analytic[i];
    worst = std::max(worst, std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8L}));
  }
  return static_cast<Real>(worst);
}

// Hybrid loss written out from the flat layout, in long double.
inline LD ld_hybrid_loss(const TinyEmbedModel& shape, std::span<const LD> p, const NgramSample& s,
                         Real alpha) {
  const std::size_t d = shape.dim, h = shape.hidden, n = shape.window, N = shape.radicals;
  const std::size_t o_w1 = shape.vocab_size * d, o_b1 = o_w1 + h * n * d, o_w2 = o_b1 + h,
                    o_b2 = o_w2 + h, o_wr = o_b2 + 1, o_br = o_wr + N * d;
  auto e = [&](CharIndex c, std::size_t i) { return p[static_cast<std::size_t>(c) * d + i]; };
  auto score = [&](const std::vector<CharIndex>& w) {
    LD out = p[o_b2];
    for (std::size_t j = 0; j < h; ++j) {
      LD z = p[o_b1 + j];
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < d; ++i) z += p[o_w1 + j * n * d + k * d + i] * e(w[k], i);
      out += p[o_w2 + j] * std::clamp(z, -1.0L, 1.0L);
    }
    return out;
  };
  auto radical = [&](CharIndex c) {
    std::vector<LD> z(N);
    for (std::size_t r = 0; r < N; ++r) {
      z[r] = p[o_br + r];
      for (std::size_t i = 0; i < d; ++i) z[r] += p[o_wr + r * d + i] * e(c, i);
    }
    LD m = *std::max_element(z.begin(), z.end()), sum = 0.0L;
    for (LD v : z) sum += std::exp(v - m);
    return m + std::log(sum) - z[static_cast<std::size_t>(shape.gold[c])];
  };
  const auto sw = s.corrupted();
  const LD ctx = std::max(0.0L, 1.0L - score(s.window) + score(sw));
  LD rad = 0.0L;
  for (CharIndex c : s.window) rad += radical(c);
  for (CharIndex c : sw) rad += radical(c);
  return alpha * ctx + (1.0L - alpha) * rad;
}

// Max relative error between the analytic hybrid gradient and central
// differences over every parameter.
inline Real hybrid_fd_error(TinyEmbedModel& m, const NgramSample& s, Real alpha, Real eps = 1e-5) {
  HybridGradient g = HybridGradient::zeros_like(m.emb, m.cw, m.head);
  hybrid_loss(m.emb, m.cw, m.head, s, m.gold, alpha, &g);
  return ld_fd_error([&](std::span<const LD> p) { return ld_hybrid_loss(m, p, s, alpha); },
                     flatten(m), flatten_gradient(m, g), eps);
}

// Writes a flat parameter vector back into a CRF model (parameter_blocks order).
inline void set_crf_parameters(CrfModel& m, std::span<const Real> p) {
  std::size_t pos = 0;
  for (auto block : m.parameter_blocks()) {
    std::copy(p.begin() + static_cast<std::ptrdiff_t>(pos),
              p.begin() + static_cast<std::ptrdiff_t>(pos + block.size()), block.begin());
    pos += block.size();
  }
}

inline Vector get_crf_parameters(CrfModel& m) {
  Vector out;
  for (auto block : m.parameter_blocks()) out.insert(out.end(), block.begin(), block.end());
  return out;
}

inline Vocabulary tiny_vocab(std::size_t n_chars) {
  std::vector<char32_t> chars;
  for (std::size_t i = 0; i < n_chars; ++i) chars.push_back(U'a' + static_cast<char32_t>(i));
  return Vocabulary::from_chars(chars);
}

// Random neural CRF with O(1) weights so that hidden units land on both
// sides of the HardTanh kinks.
inline CrfModel random_neural_crf(Rng& rng, std::size_t n_chars, std::size_t dim, std::size_t hidden,
                                  bool finetune) {
  Vocabulary vocab = tiny_vocab(n_chars);
  EmbeddingMatrix emb(dim, vocab.size());
  rng.fill_uniform(emb.flat(), 1.0);
  CrfConfig cfg;
  cfg.hidden = hidden;
  cfg.finetune_embeddings = finetune;
  CrfModel m = init_crf_model(cfg, std::move(vocab), std::move(emb));
  for (auto block : m.parameter_blocks()) rng.fill_uniform(block, 1.0);
  return m;
}

// Smallest distance of a HardTanh pre-activation to +-1 across the sentence.
inline Real crf_kink_distance(const CrfModel& m, std::span<const CharIndex> sentence) {
  Real d = INFINITY;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto window = context_window(sentence, i, m.config.window);
    Vector x;
    for (CharIndex c : window) {
      auto col = m.embeddings.column(c);
      x.insert(x.end(), col.begin(), col.end());
    }
    for (Real z : linear_forward(m.net.w1, m.net.b1, x))
      d = std::min({d, std::abs(z - 1.0), std::abs(z + 1.0)});
  }
  return d;
}

// log P(gold | sentence) from the flat parameter layout, by enumerating all
// 4^L tag sequences in long double. Keep L small.
inline LD ld_crf_log_likelihood(const CrfModel& m, std::span<const LD> p,
                                std::span<const CharIndex> sentence, std::span<const Tag> gold) {
  const std::size_t T = kNumTags, L = sentence.size();
  std::size_t pos = 0;
  const LD* trans = &p[pos];
  pos += T * T;
  const LD* start = &p[pos];
  pos += T;
  const LD* stop = &p[pos];
  pos += T;

  std::vector<std::array<LD, 4>> emit(L);
  if (m.config.mode == EmissionMode::kNeural) {
    const std::size_t d = m.embeddings.dim(), h = m.net.b1.size(), n = m.config.window,
                      in = n * d;
    const LD* w1 = &p[pos];
    const LD* b1 = w1 + h * in;
    const LD* w2 = b1 + h;
    const LD* b2 = w2 + T * h;
    const LD* table = m.config.finetune_embeddings ? b2 + T : nullptr;
    auto e = [&](CharIndex c, std::size_t i) -> LD {
      return table ? table[static_cast<std::size_t>(c) * d + i]
                   : static_cast<LD>(m.embeddings.column(c)[i]);
    };
    for (std::size_t t = 0; t < L; ++t) {
      std::vector<LD> hid(h);
      for (std::size_t j = 0; j < h; ++j) {
        LD z = b1[j];
        for (std::size_t k = 0; k < n; ++k) {
          const auto at = static_cast<std::ptrdiff_t>(t + k) - static_cast<std::ptrdiff_t>(n / 2);
          const CharIndex c = at < 0 || at >= static_cast<std::ptrdiff_t>(L)
                                  ? Vocabulary::kPad
                                  : sentence[static_cast<std::size_t>(at)];
          for (std::size_t i = 0; i < d; ++i) z += w1[j * in + k * d + i] * e(c, i);
        }
        hid[j] = std::clamp(z, -1.0L, 1.0L);
      }
      for (std::size_t y = 0; y < T; ++y) {
        emit[t][y] = b2[y];
        for (std::size_t j = 0; j < h; ++j) emit[t][y] += w2[y * h + j] * hid[j];
      }
    }
  } else {
    const LD* chars = &p[pos];
    const LD* rads = chars + m.indicators.char_weights.size();
    for (std::size_t t = 0; t < L; ++t) {
      const auto c = static_cast<std::size_t>(sentence[t]);
      for (std::size_t y = 0; y < T; ++y) {
        emit[t][y] = chars[c * T + y];
        if (m.config.mode == EmissionMode::kCharRadical)
          emit[t][y] += rads[static_cast<std::size_t>(m.indicators.radical_of[c]) * T + y];
      }
    }
  }

  auto path = [&](auto tag_of) {
    LD s = start[tag_of(0)] + stop[tag_of(L - 1)];
    for (std::size_t t = 0; t < L; ++t) {
      s += emit[t][tag_of(t)];
      if (t > 0) s += trans[tag_of(t - 1) * T + tag_of(t)];
    }
    return s;
  };
  std::size_t total = 1;
  for (std::size_t t = 0; t < L; ++t) total *= T;
  std::vector<LD> scores(total);
  for (std::size_t code = 0; code < total; ++code) {
    scores[code] = path([&](std::size_t t) {
      std::size_t c = code;
      for (std::size_t k = 0; k < L - 1 - t; ++k) c /= T;
      return c % T;
    });
  }
  const LD mx = *std::max_element(scores.begin(), scores.end());
  LD z = 0.0L;
  for (LD v : scores) z += std::exp(v - mx);
  return path([&](std::size_t t) { return tag_index(gold[t]); }) - (mx + std::log(z));
}

inline Real crf_fd_error(CrfModel& m, std::span<const CharIndex> sentence, std::span<const Tag> gold,
                         Real eps = 1e-5) {
  CrfGradient g;
  sequence_log_likelihood(m, sentence, gold, &g);
  return ld_fd_error(
      [&](std::span<const LD> p) { return ld_crf_log_likelihood(m, p, sentence, gold); },
      get_crf_parameters(m), g.flatten(m), eps);
}

// Random word segmentation over characters [2, vocab_size).
inline Segmentation random_segmentation(Rng& rng, std::size_t vocab_size, const Vocabulary& vocab,
                                        std::size_t max_words, std::size_t max_len) {
  Segmentation words(1 + rng.below(max_words));
  for (auto& w : words) {
    const auto len = 1 + rng.below(max_len);
    for (std::uint64_t k = 0; k < len; ++k)
      w += vocab.char_at(static_cast<CharIndex>(2 + rng.below(vocab_size - 2)));
  }
  return words;
}

}  // namespace fixtures
