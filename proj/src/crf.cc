#include "radembed/crf.h"

#include <cmath>
#include <limits>

#include "radembed/error.h"

namespace radembed {
namespace {

constexpr std::size_t T = kNumTags;
constexpr Real kNegInf = -std::numeric_limits<Real>::infinity();

void check_lattice(const TagLattice& lattice) {
  if (lattice.length() == 0) throw ConfigError("CRF lattice must have length >= 1");
  if (lattice.transition.rows() != T || lattice.transition.cols() != T)
    throw ConfigError("CRF transition table must be 4x4");
}

// alpha[i][y]: log-sum of scores of prefixes ending in tag y at position i,
// including emit[i][y] but not the stop score.
std::vector<TagScores> forward(const TagLattice& lat) {
  const std::size_t n = lat.length();
  std::vector<TagScores> alpha(n);
  for (std::size_t y = 0; y < T; ++y) alpha[0][y] = lat.start[y] + lat.emissions[0][y];
  std::array<Real, T> terms;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < T; ++y) {
      for (std::size_t p = 0; p < T; ++p) terms[p] = alpha[i - 1][p] + lat.transition(p, y);
      alpha[i][y] = log_sum_exp(terms) + lat.emissions[i][y];
    }
  }
  return alpha;
}

// beta[i][y]: log-sum of scores of suffixes after position i given tag y at i,
// including the stop score.
std::vector<TagScores> backward(const TagLattice& lat) {
  const std::size_t n = lat.length();
  std::vector<TagScores> beta(n);
  beta[n - 1] = lat.stop;
  std::array<Real, T> terms;
  for (std::size_t i = n - 1; i-- > 0;) {
    for (std::size_t y = 0; y < T; ++y) {
      for (std::size_t q = 0; q < T; ++q)
        terms[q] = lat.transition(y, q) + lat.emissions[i + 1][q] + beta[i + 1][q];
      beta[i][y] = log_sum_exp(terms);
    }
  }
  return beta;
}

Real final_log_sum(const TagLattice& lat, const TagScores& last_alpha) {
  std::array<Real, T> terms;
  for (std::size_t y = 0; y < T; ++y) terms[y] = last_alpha[y] + lat.stop[y];
  return log_sum_exp(terms);
}

}  // namespace

Real sequence_score(const TagLattice& lattice, std::span<const Tag> tags) {
  check_lattice(lattice);
  if (tags.size() != lattice.length())
    throw ConfigError("sequence_score: tag sequence length differs from the lattice");
  Real s = lattice.start[tag_index(tags.front())];
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s += lattice.emissions[i][tag_index(tags[i])];
    if (i > 0) s += lattice.transition(tag_index(tags[i - 1]), tag_index(tags[i]));
  }
  return s + lattice.stop[tag_index(tags.back())];
}

Real log_partition(const TagLattice& lattice) {
  check_lattice(lattice);
  return final_log_sum(lattice, forward(lattice).back());
}

LatticeGradient lattice_log_likelihood(const TagLattice& lattice, std::span<const Tag> gold) {
  check_lattice(lattice);
  const std::size_t n = lattice.length();
  if (gold.size() != n) throw ConfigError("lattice_log_likelihood: gold length differs from the lattice");

  const auto alpha = forward(lattice);
  const auto beta = backward(lattice);
  const Real log_z = final_log_sum(lattice, alpha.back());

  LatticeGradient g;
  g.log_likelihood = sequence_score(lattice, gold) - log_z;
  g.emissions.assign(n, TagScores{});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < T; ++y)
      g.emissions[i][y] = -std::exp(alpha[i][y] + beta[i][y] - log_z);
  for (std::size_t y = 0; y < T; ++y) {
    g.start[y] = g.emissions[0][y];
    g.stop[y] = g.emissions[n - 1][y];
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t p = 0; p < T; ++p)
      for (std::size_t y = 0; y < T; ++y)
        g.transition(p, y) -= std::exp(alpha[i - 1][p] + lattice.transition(p, y) +
                                       lattice.emissions[i][y] + beta[i][y] - log_z);

  for (std::size_t i = 0; i < n; ++i) {
    g.emissions[i][tag_index(gold[i])] += 1.0;
    if (i > 0) g.transition(tag_index(gold[i - 1]), tag_index(gold[i])) += 1.0;
  }
  g.start[tag_index(gold.front())] += 1.0;
  g.stop[tag_index(gold.back())] += 1.0;
  return g;
}

std::vector<Tag> viterbi_decode(const TagLattice& lattice, bool constrain) {
  check_lattice(lattice);
  const std::size_t n = lattice.length();
  auto trans = [&](std::size_t p, std::size_t y) {
    if (constrain && !transition_allowed(kAllTags[p], kAllTags[y])) return kNegInf;
    return lattice.transition(p, y);
  };

  std::vector<TagScores> best(n);
  std::vector<std::array<std::uint8_t, T>> back(n);
  for (std::size_t y = 0; y < T; ++y)
    best[0][y] = (constrain && !can_start(kAllTags[y]) ? kNegInf : lattice.start[y]) +
                 lattice.emissions[0][y];
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < T; ++y) {
      std::size_t arg = 0;
      Real top = best[i - 1][0] + trans(0, y);
      for (std::size_t p = 1; p < T; ++p) {
        const Real v = best[i - 1][p] + trans(p, y);
        if (v > top) {
          top = v;
          arg = p;
        }
      }
      best[i][y] = top + lattice.emissions[i][y];
      back[i][y] = static_cast<std::uint8_t>(arg);
    }
  }
  std::size_t last = 0;
  Real top = kNegInf;
  for (std::size_t y = 0; y < T; ++y) {
    const Real v = best[n - 1][y] + (constrain && !can_end(kAllTags[y]) ? kNegInf : lattice.stop[y]);
    if (y == 0 || v > top) {
      top = v;
      last = y;
    }
  }
  std::vector<Tag> tags(n);
  tags[n - 1] = kAllTags[last];
  for (std::size_t i = n - 1; i > 0; --i) {
    last = back[i][last];
    tags[i - 1] = kAllTags[last];
  }
  return tags;
}

}  // namespace radembed
