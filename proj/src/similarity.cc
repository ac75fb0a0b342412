#include "radembed/similarity.h"

#include <algorithm>
#include <cmath>

#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/text.h"

namespace radembed {

Real cosine(std::span<const Real> u, std::span<const Real> v) {
  if (u.size() != v.size()) throw ConfigError("cosine: length mismatch");
  const Real nu = std::sqrt(dot(u, u));
  const Real nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) throw ConfigError("cosine: zero vector has no direction");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

namespace {

std::vector<Real> column_norms(const EmbeddingMatrix& emb) {
  std::vector<Real> norms(emb.vocab_size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    auto c = emb.column(static_cast<CharIndex>(i));
    norms[i] = std::sqrt(dot(c, c));
  }
  return norms;
}

NeighborList neighbors_with_norms(const EmbeddingMatrix& emb, std::span<const Real> norms,
                                  CharIndex query, std::size_t k) {
  const auto q = emb.column(query);
  const Real nq = norms[static_cast<std::size_t>(query)];
  if (nq == 0.0) throw ConfigError("top_k_neighbors: query has a zero embedding");
  std::vector<Neighbor> cands;
  cands.reserve(emb.vocab_size());
  for (std::size_t i = 2; i < emb.vocab_size(); ++i) {
    const auto c = static_cast<CharIndex>(i);
    if (c == query || norms[i] == 0.0) continue;
    const Real s = std::clamp(dot(q, emb.column(c)) / (nq * norms[i]), -1.0, 1.0);
    cands.push_back({c, s});
  }
  if (cands.size() < k)
    throw ConfigError("top_k_neighbors: K=" + std::to_string(k) + " exceeds the " +
                      std::to_string(cands.size()) + " available candidates");
  auto better = [](const Neighbor& a, const Neighbor& b) {
    return a.score != b.score ? a.score > b.score : a.index < b.index;
  };
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(),
                    better);
  cands.resize(k);
  return {query, std::move(cands)};
}

}  // namespace

NeighborList top_k_neighbors(const EmbeddingMatrix& emb, CharIndex query, std::size_t k) {
  if (query < 2 || static_cast<std::size_t>(query) >= emb.vocab_size())
    throw ConfigError("top_k_neighbors: query index out of range");
  return neighbors_with_norms(emb, column_norms(emb), query, k);
}

NeighborList top_k_neighbors(const EmbeddingMatrix& emb, const Vocabulary& vocab, char32_t query,
                             std::size_t k) {
  auto idx = vocab.find(query);
  if (!idx) throw DataError("top_k_neighbors: '" + utf8_encode(query) + "' is not in the vocabulary");
  return top_k_neighbors(emb, *idx, k);
}

AccuracyReport category_accuracy(const EmbeddingMatrix& emb, const Vocabulary& vocab,
                                 const SimilarityDataset& dataset, std::size_t k) {
  if (k == 0) throw ConfigError("category_accuracy: K must be positive");
  if (emb.vocab_size() != vocab.size())
    throw ConfigError("category_accuracy: vocabulary and embedding sizes differ");
  AccuracyReport report;
  const auto norms = column_norms(emb);
  // Integer hit total keeps the result independent of dataset order.
  std::size_t total_hits = 0;
  for (const auto& cat : dataset.categories()) {
    for (char32_t c : cat.chars) {
      auto idx = vocab.find(c);
      if (!idx) {
        report.missing.push_back(c);
        continue;
      }
      NeighborList nl = neighbors_with_norms(emb, norms, *idx, k);
      const auto own = dataset.category_of(c);
      std::size_t hits = 0;
      for (const auto& n : nl.neighbors) hits += dataset.category_of(vocab.char_at(n.index)) == own;
      total_hits += hits;
      ++report.evaluated;
      report.neighbors.push_back(std::move(nl));
    }
  }
  if (!report.missing.empty()) {
    std::u32string shown(report.missing.begin(),
                         report.missing.begin() + std::min<std::ptrdiff_t>(20, report.missing.size()));
    log_warning(std::to_string(report.missing.size()) +
                " similarity-dataset characters are not in the vocabulary and were skipped: " +
                utf8_encode(shown) + (report.missing.size() > 20 ? "..." : ""));
  }
  if (report.evaluated == 0)
    throw DataError("category_accuracy: no dataset character is in the vocabulary");
  report.accuracy =
      static_cast<Real>(total_hits) / (static_cast<Real>(k) * static_cast<Real>(report.evaluated));
  return report;
}

}  // namespace radembed
