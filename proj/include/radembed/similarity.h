#pragma once

#include <span>
#include <string>
#include <vector>

#include "radembed/embedding.h"
#include "radembed/similarity_dataset.h"
#include "radembed/vocabulary.h"

namespace radembed {

// u.v / (|u| |v|), clamped to [-1, 1]. Throws ConfigError on a zero vector
// or a length mismatch.
Real cosine(std::span<const Real> u, std::span<const Real> v);

struct Neighbor {
  CharIndex index;
  Real score;
};

struct NeighborList {
  CharIndex query;
  std::vector<Neighbor> neighbors;
};

// The K most cosine-similar characters to `query`, excluding the query
// itself, PAD, UNK and zero vectors. Ties go to the lower vocabulary index.
// Throws ConfigError when fewer than K candidates exist.
NeighborList top_k_neighbors(const EmbeddingMatrix& emb, CharIndex query, std::size_t k);

// Looks the query up by character; throws DataError if it is not in the vocabulary.
NeighborList top_k_neighbors(const EmbeddingMatrix& emb, const Vocabulary& vocab, char32_t query,
                             std::size_t k);

struct AccuracyReport {
  Real accuracy = 0.0;
  std::size_t evaluated = 0;                 // |S| after dropping missing characters
  std::vector<char32_t> missing;             // dataset characters absent from the vocabulary
  std::vector<NeighborList> neighbors;       // per evaluated character, dataset order
};

// Mean over dataset characters of (same-category neighbours among the top K) / K.
// Neighbours outside the dataset count as misses. Missing characters are
// skipped with a warning; throws DataError if none remain.
AccuracyReport category_accuracy(const EmbeddingMatrix& emb, const Vocabulary& vocab,
                                 const SimilarityDataset& dataset, std::size_t k = 10);

}  // namespace radembed
