#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radembed/crf.h"
#include "radembed/cw_model.h"
#include "radembed/embedding.h"
#include "radembed/radicals.h"
#include "radembed/tagging.h"
#include "radembed/vocabulary.h"

namespace radembed {

enum class EmissionMode : std::uint8_t {
  kNeural = 0,       // window of embeddings -> linear -> HardTanh -> linear
  kChar = 1,         // one weight per (character, tag)
  kCharRadical = 2,  // plus one weight per (radical, tag)
};

std::string to_string(EmissionMode mode);
EmissionMode parse_emission_mode(const std::string& name);  // neural | char | char+radical

struct CrfConfig {
  EmissionMode mode = EmissionMode::kNeural;
  std::size_t window = 3;
  std::size_t hidden = 300;
  Real lr = 0.1;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  bool finetune_embeddings = false;
  bool constrain_tags = false;

  void validate() const;
};

struct EmissionNet {
  Matrix w1;  // hidden x (window * dim)
  Vector b1;  // hidden
  Matrix w2;  // 4 x hidden
  Vector b2;  // 4
};

struct IndicatorTables {
  Matrix char_weights;     // |V| x 4
  Matrix radical_weights;  // N x 4 (empty unless kCharRadical)
  std::vector<RadicalIndex> radical_of;  // per vocabulary index
};

struct CrfModel {
  CrfConfig config;
  Vocabulary vocab;
  Matrix transition = Matrix(kNumTags, kNumTags);
  TagScores start{};
  TagScores stop{};
  EmissionNet net;             // kNeural only
  EmbeddingMatrix embeddings;  // kNeural only
  IndicatorTables indicators;  // kChar / kCharRadical only

  // Every trainable array in a fixed order: transition, start, stop, then
  // W1, b1, W2, b2 (+ embeddings when fine-tuning) or the indicator tables.
  std::vector<std::span<Real>> parameter_blocks();
  std::size_t num_parameters();
};

// Neural mode: Glorot-uniform emission net, zero transitions. Indicator
// modes: zero tables. `radicals` is required for kCharRadical.
CrfModel init_crf_model(const CrfConfig& cfg, Vocabulary vocab, EmbeddingMatrix embeddings,
                        const RadicalDict* radicals = nullptr);

TagScores emission_scores(const CrfModel& model, std::span<const CharIndex> sentence, std::size_t i);
TagScores indicator_emission_scores(const CrfModel& model, std::span<const CharIndex> sentence,
                                    std::size_t i);

TagLattice build_lattice(const CrfModel& model, std::span<const CharIndex> sentence);

// Gradient of the log-likelihood (an ascent direction), shaped like the model.
struct CrfGradient {
  Matrix transition = Matrix(kNumTags, kNumTags);
  TagScores start{};
  TagScores stop{};
  EmissionNet net;
  SparseColumnGrad embeddings;
  SparseColumnGrad char_rows{kNumTags};
  SparseColumnGrad radical_rows{kNumTags};

  // Dense vector in the order of CrfModel::parameter_blocks().
  Vector flatten(const CrfModel& model) const;
};

// log P(gold | sentence); fills `grad` when non-null.
Real sequence_log_likelihood(const CrfModel& model, std::span<const CharIndex> sentence,
                             std::span<const Tag> gold, CrfGradient* grad = nullptr);

std::vector<Tag> decode(const CrfModel& model, std::span<const CharIndex> sentence);
Segmentation segment(const CrfModel& model, std::u32string_view chars);

struct SegEvalReport {
  std::size_t gold_words = 0;
  std::size_t predicted_words = 0;
  std::size_t correct_words = 0;
  Real precision = 0.0;
  Real recall = 0.0;
  Real f1 = 0.0;
};

// Word-span P/R/F1. Sentence i of `gold` and `predicted` must cover the same
// characters. When a corpus has no words at all its ratio is taken as 1.
SegEvalReport score_segmentation(std::span<const Segmentation> gold,
                                 std::span<const Segmentation> predicted);

SegEvalReport evaluate_segmentation(const CrfModel& model, std::span<const Segmentation> gold);

struct CrfTrainResult {
  CrfModel model;               // the epoch with the best dev F1
  std::vector<Real> dev_f1;     // per epoch
  std::vector<Real> train_nll;  // mean negative log-likelihood per sentence, per epoch
  std::size_t best_epoch = 0;   // 1-based, 0 when no epoch ran
};

using CrfEpochCallback = std::function<void(std::size_t epoch, Real train_nll, Real dev_f1)>;

// Per-sentence SGD ascent on the log-likelihood, sentence order reshuffled
// each epoch from config.seed. Throws NumericError on a non-finite loss.
CrfTrainResult train_crf(std::span<const Segmentation> train, std::span<const Segmentation> dev,
                         CrfModel init, const CrfEpochCallback& on_epoch = {});

// Binary container, little endian: "RADCRF01", then u64 mode, window,
// hidden, epochs, seed, finetune, constrain and f64 lr; the vocabulary file
// as a length-prefixed string; transition matrix, start and stop reals;
// W1, b1, W2, b2; u64 dim, u64 |V|, embedding reals; char and radical weight
// matrices; u64 count then u64 radical class per vocabulary index.
void save_crf_model(std::ostream& out, const CrfModel& model);
void save_crf_model(const std::string& path, const CrfModel& model);
CrfModel load_crf_model(std::istream& in);
CrfModel load_crf_model(const std::string& path);

}  // namespace radembed
