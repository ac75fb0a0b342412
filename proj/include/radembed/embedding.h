#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radembed/numeric.h"
#include "radembed/vocabulary.h"

namespace radembed {

// d x |V| embedding table with one column per character. Columns are stored
// contiguously so a lookup is a span, not a strided walk.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t dim, std::size_t vocab_size)
      : dim_(dim), vocab_size_(vocab_size), data_(dim * vocab_size, 0.0) {}

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return vocab_size_; }

  std::span<Real> column(CharIndex c) { return {data_.data() + offset(c), dim_}; }
  std::span<const Real> column(CharIndex c) const { return {data_.data() + offset(c), dim_}; }

  std::span<Real> flat() { return data_; }
  std::span<const Real> flat() const { return data_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t offset(CharIndex c) const;

  std::size_t dim_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<Real> data_;
};

struct EmbeddingFile {
  Vocabulary vocab;
  EmbeddingMatrix embeddings;
};

// Text format: a `|V| d` header, then one line per vocabulary entry with the
// token followed by d shortest-round-trip decimals, space separated.
void save_embeddings_text(std::ostream& out, const Vocabulary& vocab, const EmbeddingMatrix& emb);
void save_embeddings_text(const std::string& path, const Vocabulary& vocab,
                          const EmbeddingMatrix& emb);
EmbeddingFile load_embeddings_text(std::istream& in);
EmbeddingFile load_embeddings_text(const std::string& path);

}  // namespace radembed
