#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "radembed/vocabulary.h"

namespace radembed {

using RadicalIndex = std::int32_t;

// Character -> radical class map. Classes are numbered by first appearance in
// the source file; the reserved NO_RADICAL class is always the last index,
// N - 1, and receives every character the dictionary does not list.
class RadicalDict {
 public:
  static constexpr std::string_view kNoRadicalName = "<NONE>";

  RadicalDict();

  // `character<TAB>radical` lines; '#' comment lines and blank lines skipped.
  static RadicalDict parse(std::span<const std::string> lines);
  static RadicalDict load(const std::string& path);
  // Writes entries in insertion order so reloading reproduces every index.
  void save(std::ostream& out) const;

  std::size_t num_classes() const { return names_.size() + 1; }
  RadicalIndex no_radical() const { return static_cast<RadicalIndex>(names_.size()); }
  std::size_t num_characters() const { return entries_.size(); }

  RadicalIndex radical_of(char32_t c) const;
  std::string radical_name(RadicalIndex r) const;

  // Gold radical per vocabulary index; PAD and UNK map to NO_RADICAL.
  std::vector<RadicalIndex> gold_for(const Vocabulary& vocab) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, RadicalIndex> name_index_;
  std::vector<std::pair<char32_t, RadicalIndex>> entries_;
  std::unordered_map<char32_t, RadicalIndex> by_char_;
};

}  // namespace radembed
