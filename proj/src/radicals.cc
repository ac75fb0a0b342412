#include "radembed/radicals.h"

#include <ostream>

#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/text.h"

namespace radembed {

RadicalDict::RadicalDict() = default;

RadicalDict RadicalDict::parse(std::span<const std::string> lines) {
  RadicalDict dict;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError("radical dictionary: expected character<TAB>radical", ln + 1);
    const std::string ch = line.substr(0, tab);
    const std::string radical = line.substr(tab + 1);
    std::u32string cps;
    try {
      cps = utf8_decode(ch);
      utf8_decode(radical);
    } catch (const DataError& e) {
      throw DataError(std::string("radical dictionary: ") + e.what(), ln + 1);
    }
    if (cps.size() != 1)
      throw DataError("radical dictionary: first field must be a single character", ln + 1);
    if (radical.empty()) throw DataError("radical dictionary: empty radical", ln + 1);

    auto [it, inserted] =
        dict.name_index_.emplace(radical, static_cast<RadicalIndex>(dict.names_.size()));
    if (inserted) dict.names_.push_back(radical);
    const RadicalIndex r = it->second;

    auto existing = dict.by_char_.find(cps[0]);
    if (existing != dict.by_char_.end()) {
      if (existing->second != r)
        throw DataError("radical dictionary: conflicting radical for '" + ch + "'", ln + 1);
      continue;
    }
    dict.by_char_.emplace(cps[0], r);
    dict.entries_.emplace_back(cps[0], r);
  }
  if (dict.entries_.empty()) log_warning("radical dictionary is empty; every character maps to NO_RADICAL");
  return dict;
}

RadicalDict RadicalDict::load(const std::string& path) { return parse(read_lines_from(path)); }

void RadicalDict::save(std::ostream& out) const {
  for (const auto& [c, r] : entries_) out << utf8_encode(c) << '\t' << names_[r] << '\n';
}

RadicalIndex RadicalDict::radical_of(char32_t c) const {
  auto it = by_char_.find(c);
  return it == by_char_.end() ? no_radical() : it->second;
}

std::string RadicalDict::radical_name(RadicalIndex r) const {
  if (r == no_radical()) return std::string(kNoRadicalName);
  return names_.at(static_cast<std::size_t>(r));
}

std::vector<RadicalIndex> RadicalDict::gold_for(const Vocabulary& vocab) const {
  std::vector<RadicalIndex> gold(vocab.size(), no_radical());
  for (std::size_t i = 2; i < vocab.size(); ++i)
    gold[i] = radical_of(vocab.char_at(static_cast<CharIndex>(i)));
  return gold;
}

}  // namespace radembed
