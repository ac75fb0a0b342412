#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radembed/cw_model.h"
#include "radembed/embedding.h"
#include "radembed/radicals.h"
#include "radembed/vocabulary.h"

namespace radembed {

struct TrainConfig {
  Real alpha = 0.8;
  Real lr = 0.1;
  std::size_t epochs = 5;
  std::size_t window = 5;
  std::size_t dim = 30;
  std::size_t hidden = 30;
  std::uint64_t seed = 1;
  Real init_scale = 0.01;
  std::size_t corruptions = 1;  // corrupted windows per position

  // Throws ConfigError on out-of-range values.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct EmbeddingModel {
  EmbeddingMatrix embeddings;
  CwParams cw;
  RadicalHead head;
};

struct EmbeddingTrainResult {
  EmbeddingModel model;
  std::vector<Real> epoch_mean_loss;
};

// Uniform [-init_scale, init_scale] for every parameter, drawn in the order
// embeddings, W1, b1, W2, b2, Wr, br.
EmbeddingModel init_embedding_model(std::size_t vocab_size, std::size_t num_radicals,
                                    const TrainConfig& cfg, Rng& rng);

using EpochCallback = std::function<void(std::size_t epoch, Real mean_loss)>;

// Per-sample SGD over the encoded corpus. Sentence order is reshuffled every
// epoch; windows within a sentence go left to right. Throws NumericError on a
// non-finite loss.
EmbeddingTrainResult train_embeddings(std::span<const std::vector<CharIndex>> sentences,
                                      const Vocabulary& vocab, std::span<const RadicalIndex> gold,
                                      std::size_t num_radicals, const TrainConfig& cfg,
                                      const EpochCallback& on_epoch = {});

// Convenience overload over raw corpus lines and a radical dictionary.
EmbeddingTrainResult train_embeddings(std::span<const std::string> corpus_lines,
                                      const Vocabulary& vocab, const RadicalDict& radicals,
                                      const TrainConfig& cfg, const EpochCallback& on_epoch = {});

std::vector<std::vector<CharIndex>> encode_corpus(std::span<const std::string> lines,
                                                  const Vocabulary& vocab);

// Binary checkpoint, little endian:
//   "RADEMB01"                     8-byte magic
//   u64 vocabulary fingerprint
//   f64 alpha, f64 lr, u64 epochs, u64 window, u64 dim, u64 hidden,
//   u64 seed, f64 init_scale, u64 corruptions
//   u64 |V|, u64 N
//   reals W_e (column per character)
//   matrix W1, reals b1, matrix W2, f64 b2
//   matrix Wr, reals br
// where "reals" is a u64 count followed by f64 values and "matrix" is
// u64 rows, u64 cols, reals.
struct EmbeddingCheckpoint {
  TrainConfig config;
  std::uint64_t vocab_fingerprint = 0;
  EmbeddingModel model;
};

void save_embedding_checkpoint(std::ostream& out, const EmbeddingCheckpoint& ck);
void save_embedding_checkpoint(const std::string& path, const EmbeddingCheckpoint& ck);
EmbeddingCheckpoint load_embedding_checkpoint(std::istream& in);
EmbeddingCheckpoint load_embedding_checkpoint(const std::string& path);

}  // namespace radembed
