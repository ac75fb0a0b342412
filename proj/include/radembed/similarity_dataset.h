#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace radembed {

struct SimilarityCategory {
  std::string name;
  std::u32string chars;
};

// Semantic categories for nearest-neighbour evaluation. Each character
// belongs to exactly one category and there are at least two categories.
class SimilarityDataset {
 public:
  // `category_name<TAB>characters` lines; blank and '#' lines skipped.
  static SimilarityDataset parse(std::span<const std::string> lines);
  static SimilarityDataset load(const std::string& path);
  static SimilarityDataset from_categories(std::vector<SimilarityCategory> categories);

  const std::vector<SimilarityCategory>& categories() const { return categories_; }
  std::optional<std::size_t> category_of(char32_t c) const;
  std::size_t num_chars() const { return category_by_char_.size(); }

 private:
  void add(SimilarityCategory cat, std::size_t line);
  void validate() const;

  std::vector<SimilarityCategory> categories_;
  std::unordered_map<char32_t, std::size_t> category_by_char_;
};

}  // namespace radembed
