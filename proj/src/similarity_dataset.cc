#include "radembed/similarity_dataset.h"

#include "radembed/error.h"
#include "radembed/text.h"

namespace radembed {

void SimilarityDataset::add(SimilarityCategory cat, std::size_t line) {
  const std::size_t id = categories_.size();
  std::u32string unique;
  for (char32_t c : cat.chars) {
    auto [it, inserted] = category_by_char_.emplace(c, id);
    if (inserted) {
      unique.push_back(c);
    } else if (it->second != id) {
      throw DataError("similarity dataset: character '" + utf8_encode(c) +
                          "' appears in categories '" + categories_[it->second].name + "' and '" +
                          cat.name + "'",
                      line);
    }
  }
  cat.chars = std::move(unique);
  categories_.push_back(std::move(cat));
}

void SimilarityDataset::validate() const {
  if (categories_.size() < 2) throw DataError("similarity dataset needs at least 2 categories");
}

SimilarityDataset SimilarityDataset::parse(std::span<const std::string> lines) {
  SimilarityDataset ds;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError("similarity dataset: expected category<TAB>characters", ln + 1);
    SimilarityCategory cat;
    cat.name = line.substr(0, tab);
    try {
      cat.chars = sentence_chars(std::string_view(line).substr(tab + 1));
    } catch (const DataError& e) {
      throw DataError(e.what(), ln + 1);
    }
    if (cat.chars.empty()) throw DataError("similarity dataset: category has no characters", ln + 1);
    ds.add(std::move(cat), ln + 1);
  }
  ds.validate();
  return ds;
}

SimilarityDataset SimilarityDataset::load(const std::string& path) {
  return parse(read_lines_from(path));
}

SimilarityDataset SimilarityDataset::from_categories(std::vector<SimilarityCategory> categories) {
  SimilarityDataset ds;
  for (auto& c : categories) ds.add(std::move(c), 0);
  ds.validate();
  return ds;
}

std::optional<std::size_t> SimilarityDataset::category_of(char32_t c) const {
  auto it = category_by_char_.find(c);
  if (it == category_by_char_.end()) return std::nullopt;
  return it->second;
}

}  // namespace radembed
