#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radembed {

// Boundary tags. The numeric order is part of the model file format and of
// the Viterbi tie rule (lower index wins).
enum class Tag : std::uint8_t { kB = 0, kI = 1, kE = 2, kS = 3 };
inline constexpr std::size_t kNumTags = 4;
inline constexpr std::array<Tag, kNumTags> kAllTags = {Tag::kB, Tag::kI, Tag::kE, Tag::kS};

constexpr std::size_t tag_index(Tag t) { return static_cast<std::size_t>(t); }
char tag_letter(Tag t);

// Well-formedness of BIES: B/I must be followed by I or E; E/S by B, S or the
// end; the first tag is B or S.
constexpr bool transition_allowed(Tag prev, Tag next) {
  const bool open = prev == Tag::kB || prev == Tag::kI;
  const bool continues = next == Tag::kI || next == Tag::kE;
  return open == continues;
}
constexpr bool can_start(Tag t) { return t == Tag::kB || t == Tag::kS; }
constexpr bool can_end(Tag t) { return t == Tag::kE || t == Tag::kS; }

bool is_well_formed(std::span<const Tag> tags);

struct TaggedSentence {
  std::u32string chars;
  std::vector<Tag> tags;
};

using Segmentation = std::vector<std::u32string>;

// Throws DataError on an empty word.
TaggedSentence words_to_bies(std::span<const std::u32string> words);

// Total inverse: a word boundary is closed before every B or S and at the
// end, which also repairs ill-formed decoder output.
Segmentation bies_to_words(std::u32string_view chars, std::span<const Tag> tags);
inline Segmentation bies_to_words(const TaggedSentence& s) { return bies_to_words(s.chars, s.tags); }

// Parses one line of a space-segmented corpus. An empty line is a sentence
// with no words; any other empty field is an error.
Segmentation parse_segmented_line(std::string_view line, std::size_t line_number = 0);
std::vector<Segmentation> parse_segmented(std::span<const std::string> lines);
std::string format_segmented(const Segmentation& words);

}  // namespace radembed
