#include "radembed/tagging.h"

#include "radembed/error.h"
#include "radembed/text.h"

namespace radembed {

char tag_letter(Tag t) { return "BIES"[tag_index(t)]; }

bool is_well_formed(std::span<const Tag> tags) {
  if (tags.empty()) return true;
  if (!can_start(tags.front()) || !can_end(tags.back())) return false;
  for (std::size_t i = 1; i < tags.size(); ++i)
    if (!transition_allowed(tags[i - 1], tags[i])) return false;
  return true;
}

TaggedSentence words_to_bies(std::span<const std::u32string> words) {
  TaggedSentence out;
  for (const auto& w : words) {
    if (w.empty()) throw DataError("words_to_bies: empty word");
    out.chars += w;
    if (w.size() == 1) {
      out.tags.push_back(Tag::kS);
      continue;
    }
    out.tags.push_back(Tag::kB);
    out.tags.insert(out.tags.end(), w.size() - 2, Tag::kI);
    out.tags.push_back(Tag::kE);
  }
  return out;
}

Segmentation bies_to_words(std::u32string_view chars, std::span<const Tag> tags) {
  if (chars.size() != tags.size()) throw ConfigError("bies_to_words: length mismatch");
  Segmentation words;
  std::u32string current;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if ((tags[i] == Tag::kB || tags[i] == Tag::kS) && !current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
    current.push_back(chars[i]);
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

Segmentation parse_segmented_line(std::string_view line, std::size_t line_number) {
  Segmentation words;
  if (line.empty()) return words;
  for (std::string_view field : split_spaces(line)) {
    if (field.empty()) throw DataError("segmented corpus: empty word (stray space)", line_number);
    std::u32string w;
    try {
      w = utf8_decode(field);
    } catch (const DataError& e) {
      throw DataError(e.what(), line_number);
    }
    for (char32_t c : w)
      if (c == U'\t' || c == U'\r' || c == U'\v' || c == U'\f')
        throw DataError("segmented corpus: words must be separated by single spaces", line_number);
    words.push_back(std::move(w));
  }
  return words;
}

std::vector<Segmentation> parse_segmented(std::span<const std::string> lines) {
  std::vector<Segmentation> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back(parse_segmented_line(lines[i], i + 1));
  return out;
}

std::string format_segmented(const Segmentation& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += utf8_encode(words[i]);
  }
  return out;
}

}  // namespace radembed
