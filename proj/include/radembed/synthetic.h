#pragma once

// Deterministic synthetic corpora for tests, demos and the acceptance suite.
// None of this is real Chinese text; characters are drawn from the CJK
// Unified Ideographs block and radicals from the Kangxi Radicals block
// purely so the files look like the real formats.

#include <cstdint>
#include <string>
#include <vector>

#include "radembed/numeric.h"

namespace radembed::synthetic {

// Sentences are runs of phrases `marker member marker`. Members of group g
// carry radical g and form similarity category g; markers are group-specific
// (radical-less) context characters, swapped for another group's marker with
// probability `context_noise`. Members are drawn with Zipf(1) frequencies so
// many are rare.
struct RadicalCorpusOptions {
  std::size_t groups = 8;
  std::size_t members_per_group = 12;
  std::size_t markers_per_group = 2;
  std::size_t sentences = 2000;
  std::size_t min_phrases = 3;
  std::size_t max_phrases = 5;
  Real context_noise = 0.3;
  std::uint64_t seed = 1;
};

struct RadicalCorpus {
  std::vector<std::string> corpus;      // raw sentences
  std::vector<std::string> radicals;    // character<TAB>radical
  std::vector<std::string> categories;  // name<TAB>characters
};

RadicalCorpus make_radical_corpus(const RadicalCorpusOptions& shape);

// A fixed lexicon of 1-4 character words over a shared character pool;
// sentences are Zipf-weighted word sequences. Characters may recur across
// words, so segmentation is not a per-character lookup.
struct SegmentationCorpusOptions {
  std::size_t lexicon = 120;
  std::size_t char_pool = 300;
  std::size_t radicals = 20;
  std::size_t sentences = 500;
  std::size_t min_words = 4;
  std::size_t max_words = 10;
  std::uint64_t seed = 1;
};

struct SegmentationCorpus {
  std::vector<std::string> segmented;  // space-separated words
  std::vector<std::string> radicals;   // character<TAB>radical
};

SegmentationCorpus make_segmentation_corpus(const SegmentationCorpusOptions& shape);

// Strips the spaces from segmented lines.
std::vector<std::string> unsegment(const std::vector<std::string>& segmented);

}  // namespace radembed::synthetic
