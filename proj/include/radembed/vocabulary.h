#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace radembed {

using CharIndex = std::int32_t;

// Character vocabulary. Index 0 is <PAD>, index 1 is <UNK>, the rest are
// characters in descending corpus frequency with ties broken by code point.
class Vocabulary {
 public:
  static constexpr CharIndex kPad = 0;
  static constexpr CharIndex kUnk = 1;
  static constexpr std::string_view kPadToken = "<PAD>";
  static constexpr std::string_view kUnkToken = "<UNK>";

  Vocabulary();

  // Counts every non-whitespace character in `lines` and keeps those seen at
  // least min_count times. Throws DataError if no character survives.
  static Vocabulary build(std::span<const std::string> lines, std::size_t min_count = 1);

  // Characters in index order, starting at index 2.
  static Vocabulary from_chars(std::span<const char32_t> chars);

  // One token per line: <PAD>, <UNK>, then one character per line.
  static Vocabulary load(std::istream& in);
  static Vocabulary load(const std::string& path);
  void save(std::ostream& out) const;
  void save(const std::string& path) const;

  std::size_t size() const { return chars_.size(); }
  // Number of real characters (excludes PAD and UNK).
  std::size_t num_chars() const { return chars_.size() - 2; }

  std::optional<CharIndex> find(char32_t c) const;
  CharIndex index_of(char32_t c) const { return find(c).value_or(kUnk); }
  std::vector<CharIndex> encode(std::u32string_view s) const;

  // Code point at `index`; 0 for PAD and UNK.
  char32_t char_at(CharIndex index) const { return chars_.at(static_cast<std::size_t>(index)); }
  std::string token(CharIndex index) const;

  // FNV-1a 64 over the serialized vocabulary file.
  std::uint64_t fingerprint() const;

  bool operator==(const Vocabulary& other) const { return chars_ == other.chars_; }

 private:
  void add(char32_t c);

  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, CharIndex> index_;
};

}  // namespace radembed
