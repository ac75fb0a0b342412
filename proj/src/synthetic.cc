#include "radembed/synthetic.h"

#include <algorithm>
#include <cmath>

#include "radembed/error.h"
#include "radembed/text.h"

namespace radembed::synthetic {
namespace {

constexpr char32_t kCjkBase = 0x4E00;
constexpr char32_t kKangxiBase = 0x2F00;

// Draws an index in [0, weights.size()) proportionally to the cumulative weights.
std::size_t draw(Rng& rng, const std::vector<Real>& cumulative) {
  const Real u = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<Real> zipf_cumulative(std::size_t n) {
  std::vector<Real> c(n);
  Real total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 1.0 / static_cast<Real>(i + 1);
    c[i] = total;
  }
  return c;
}

}  // namespace

RadicalCorpus make_radical_corpus(const RadicalCorpusOptions& shape) {
  if (shape.groups < 2 || shape.members_per_group == 0 || shape.markers_per_group == 0)
    throw ConfigError("radical corpus: need >= 2 groups with members and markers");
  if (shape.min_phrases == 0 || shape.max_phrases < shape.min_phrases)
    throw ConfigError("radical corpus: bad phrase range");
  Rng rng(shape.seed);
  // Shuffled code points so group membership is not visible in index order.
  const std::size_t n_members = shape.groups * shape.members_per_group;
  const std::size_t n_markers = shape.groups * shape.markers_per_group;
  std::vector<char32_t> pool(n_members + n_markers);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = kCjkBase + static_cast<char32_t>(i);
  rng.shuffle(pool);

  auto member = [&](std::size_t g, std::size_t k) { return pool[g * shape.members_per_group + k]; };
  auto marker = [&](std::size_t g, std::size_t k) {
    return pool[n_members + g * shape.markers_per_group + k];
  };

  RadicalCorpus out;
  for (std::size_t g = 0; g < shape.groups; ++g) {
    const std::string radical = utf8_encode(kKangxiBase + static_cast<char32_t>(g));
    std::u32string chars;
    for (std::size_t k = 0; k < shape.members_per_group; ++k) {
      out.radicals.push_back(utf8_encode(member(g, k)) + "\t" + radical);
      chars.push_back(member(g, k));
    }
    out.categories.push_back("group" + std::to_string(g) + "\t" + utf8_encode(chars));
  }

  const auto member_weights = zipf_cumulative(shape.members_per_group);
  for (std::size_t s = 0; s < shape.sentences; ++s) {
    const std::size_t phrases =
        shape.min_phrases + static_cast<std::size_t>(rng.below(shape.max_phrases - shape.min_phrases + 1));
    std::u32string line;
    for (std::size_t p = 0; p < phrases; ++p) {
      const std::size_t g = static_cast<std::size_t>(rng.below(shape.groups));
      auto context_marker = [&]() {
        std::size_t cg = g;
        if (rng.uniform() < shape.context_noise) cg = static_cast<std::size_t>(rng.below(shape.groups));
        return marker(cg, static_cast<std::size_t>(rng.below(shape.markers_per_group)));
      };
      line.push_back(context_marker());
      line.push_back(member(g, draw(rng, member_weights)));
      line.push_back(context_marker());
    }
    out.corpus.push_back(utf8_encode(line));
  }
  return out;
}

SegmentationCorpus make_segmentation_corpus(const SegmentationCorpusOptions& shape) {
  if (shape.lexicon == 0 || shape.char_pool < 4 || shape.radicals == 0)
    throw ConfigError("segmentation corpus: empty lexicon, pool or radical set");
  if (shape.min_words == 0 || shape.max_words < shape.min_words)
    throw ConfigError("segmentation corpus: bad sentence length range");
  Rng rng(shape.seed);
  static constexpr std::size_t kLengths[] = {1, 2, 2, 2, 3, 4, 1, 2, 3, 2};
  std::vector<std::u32string> lexicon;
  while (lexicon.size() < shape.lexicon) {
    const std::size_t len = kLengths[rng.below(std::size(kLengths))];
    std::u32string w;
    for (std::size_t k = 0; k < len; ++k)
      w.push_back(kCjkBase + static_cast<char32_t>(rng.below(shape.char_pool)));
    if (std::find(lexicon.begin(), lexicon.end(), w) == lexicon.end()) lexicon.push_back(w);
  }

  SegmentationCorpus out;
  for (std::size_t c = 0; c < shape.char_pool; ++c)
    out.radicals.push_back(utf8_encode(kCjkBase + static_cast<char32_t>(c)) + "\t" +
                           utf8_encode(kKangxiBase + static_cast<char32_t>(rng.below(shape.radicals))));

  const auto weights = zipf_cumulative(lexicon.size());
  for (std::size_t s = 0; s < shape.sentences; ++s) {
    const std::size_t n =
        shape.min_words + static_cast<std::size_t>(rng.below(shape.max_words - shape.min_words + 1));
    std::string line;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) line.push_back(' ');
      line += utf8_encode(lexicon[draw(rng, weights)]);
    }
    out.segmented.push_back(std::move(line));
  }
  return out;
}

std::vector<std::string> unsegment(const std::vector<std::string>& segmented) {
  std::vector<std::string> out;
  out.reserve(segmented.size());
  for (const auto& line : segmented) {
    std::string s;
    for (char ch : line)
      if (ch != ' ') s.push_back(ch);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace radembed::synthetic
