#include "radembed/vocabulary.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "radembed/error.h"
#include "radembed/text.h"

namespace radembed {

Vocabulary::Vocabulary() : chars_{0, 0} {}

void Vocabulary::add(char32_t c) {
  const auto idx = static_cast<CharIndex>(chars_.size());
  if (!index_.emplace(c, idx).second)
    throw DataError("duplicate vocabulary entry '" + utf8_encode(c) + "'");
  chars_.push_back(c);
}

Vocabulary Vocabulary::build(std::span<const std::string> lines, std::size_t min_count) {
  if (min_count < 1) throw ConfigError("build_vocabulary: min_count must be >= 1");
  std::map<char32_t, std::size_t> counts;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::u32string chars;
    try {
      chars = sentence_chars(lines[ln]);
    } catch (const DataError& e) {
      throw DataError(e.what(), ln + 1);
    }
    for (char32_t c : chars) ++counts[c];
  }
  std::vector<std::pair<char32_t, std::size_t>> kept;
  for (const auto& [c, n] : counts)
    if (n >= min_count) kept.emplace_back(c, n);
  if (kept.empty()) throw DataError("build_vocabulary: corpus has no characters");
  // counts is ordered by code point, so a stable sort on frequency keeps the tie rule.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  for (const auto& [c, n] : kept) v.add(c);
  return v;
}

Vocabulary Vocabulary::from_chars(std::span<const char32_t> chars) {
  Vocabulary v;
  for (char32_t c : chars) v.add(c);
  return v;
}

Vocabulary Vocabulary::load(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.size() < 2 || lines[0] != kPadToken || lines[1] != kUnkToken)
    throw DataError("vocabulary file must start with <PAD> and <UNK> lines");
  Vocabulary v;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    std::u32string cps;
    try {
      cps = utf8_decode(lines[i]);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
    if (cps.size() != 1) throw DataError("vocabulary line must hold one character", i + 1);
    try {
      v.add(cps[0]);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
  }
  return v;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load(in);
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < chars_.size(); ++i) out << token(static_cast<CharIndex>(i)) << '\n';
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save(out);
}

std::optional<CharIndex> Vocabulary::find(char32_t c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<CharIndex> Vocabulary::encode(std::u32string_view s) const {
  std::vector<CharIndex> out;
  out.reserve(s.size());
  for (char32_t c : s) out.push_back(index_of(c));
  return out;
}

std::string Vocabulary::token(CharIndex index) const {
  if (index == kPad) return std::string(kPadToken);
  if (index == kUnk) return std::string(kUnkToken);
  return utf8_encode(char_at(index));
}

std::uint64_t Vocabulary::fingerprint() const {
  std::ostringstream ss;
  save(ss);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : ss.str()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace radembed
