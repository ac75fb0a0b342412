#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radembed/numeric.h"
#include "radembed/vocabulary.h"

namespace radembed {

// A true window and the replacement for its middle character.
struct NgramSample {
  std::vector<CharIndex> window;
  CharIndex corrupt_middle = Vocabulary::kUnk;

  std::size_t middle() const { return window.size() / 2; }
  std::vector<CharIndex> corrupted() const {
    auto w = window;
    w[middle()] = corrupt_middle;
    return w;
  }
};

// Window of `size` indices centred on position i, PAD beyond the sentence.
std::vector<CharIndex> context_window(std::span<const CharIndex> sentence, std::size_t i,
                                      std::size_t size);

// `corruptions` samples per character position, left to right. Each
// corruption is drawn uniformly from the real characters other than the
// true middle. Requires odd n and at least 3 real characters.
std::vector<NgramSample> sample_ngrams(std::span<const CharIndex> sentence, std::size_t n,
                                       Rng& rng, const Vocabulary& vocab,
                                       std::size_t corruptions = 1);

}  // namespace radembed
