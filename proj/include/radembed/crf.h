#pragma once

// Linear-chain CRF over the four BIES tags. A lattice holds per-position
// emission scores, a 4x4 transition table (row = previous tag) and start/stop
// scores; a tag sequence y scores
//
//   start[y_0] + sum_i emit[i][y_i] + sum_{i>=1} trans[y_{i-1}][y_i] + stop[y_last]
//
// and P(y | x) = exp(score(y)) / sum_y' exp(score(y')).

#include <array>
#include <span>
#include <vector>

#include "radembed/numeric.h"
#include "radembed/tagging.h"

namespace radembed {

using TagScores = std::array<Real, kNumTags>;

struct TagLattice {
  std::vector<TagScores> emissions;
  Matrix transition = Matrix(kNumTags, kNumTags);
  TagScores start{};
  TagScores stop{};

  std::size_t length() const { return emissions.size(); }
};

Real sequence_score(const TagLattice& lattice, std::span<const Tag> tags);

// log of the sum of exp(sequence_score) over all 4^L sequences, by the
// forward recursion in log space. Requires length >= 1.
Real log_partition(const TagLattice& lattice);

// Gradient of log P(gold | x) with respect to every lattice score: the gold
// indicator counts minus the posterior expectations from forward-backward.
struct LatticeGradient {
  Real log_likelihood = 0.0;
  std::vector<TagScores> emissions;
  Matrix transition = Matrix(kNumTags, kNumTags);
  TagScores start{};
  TagScores stop{};
};

LatticeGradient lattice_log_likelihood(const TagLattice& lattice, std::span<const Tag> gold);

// Highest-scoring sequence. Ties prefer the lower tag index, both for the
// final tag and for every back-pointer. With `constrain` set, transitions
// that break BIES well-formedness (and ill-formed first/last tags) are
// excluded.
std::vector<Tag> viterbi_decode(const TagLattice& lattice, bool constrain = false);

}  // namespace radembed
