#include "radembed/ngram.h"

#include <string>

#include "radembed/error.h"

namespace radembed {

std::vector<CharIndex> context_window(std::span<const CharIndex> sentence, std::size_t i,
                                      std::size_t size) {
  const auto half = static_cast<std::ptrdiff_t>(size / 2);
  std::vector<CharIndex> w(size, Vocabulary::kPad);
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(size); ++k) {
    const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(i) - half + k;
    if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(sentence.size())) w[k] = sentence[pos];
  }
  return w;
}

std::vector<NgramSample> sample_ngrams(std::span<const CharIndex> sentence, std::size_t n,
                                       Rng& rng, const Vocabulary& vocab,
                                       std::size_t corruptions) {
  if (n == 0 || n % 2 == 0) throw ConfigError("sample_ngrams: window size must be odd");
  if (sentence.empty()) throw ConfigError("sample_ngrams: empty sentence");
  const std::size_t usable = vocab.num_chars();
  if (usable < 3)
    throw ConfigError("sample_ngrams: vocabulary has " + std::to_string(usable) +
                      " usable characters, need at least 3");
  constexpr CharIndex kFirst = 2;
  std::vector<NgramSample> out;
  out.reserve(sentence.size() * corruptions);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    auto window = context_window(sentence, i, n);
    const CharIndex truth = window[n / 2];
    const bool truth_usable = truth >= kFirst;
    for (std::size_t k = 0; k < corruptions; ++k) {
      NgramSample s;
      s.window = window;
      if (truth_usable) {
        auto pick = static_cast<CharIndex>(rng.below(usable - 1)) + kFirst;
        if (pick >= truth) ++pick;
        s.corrupt_middle = pick;
      } else {
        s.corrupt_middle = static_cast<CharIndex>(rng.below(usable)) + kFirst;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace radembed
