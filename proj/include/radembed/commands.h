#pragma once

// The five subcommands of the `radembed` tool as plain functions, so tests can
// drive them without spawning a process. Every runner validates its options
// (paths, ranges) before doing any work and throws ConfigError/DataError on
// bad input.

#include <iosfwd>
#include <string>
#include <vector>

#include "radembed/embed_trainer.h"
#include "radembed/neural_crf.h"

namespace radembed::cli {

struct TrainEmbedOptions {
  std::string corpus;
  std::string radicals;
  std::string emb_out;
  std::string checkpoint;  // defaults to <emb_out>.ckpt
  std::string loss_csv;    // defaults to <emb_out>.loss.csv
  std::size_t min_count = 1;
  TrainConfig config;
};

// Writes the embedding text file, the checkpoint and the `epoch,mean_loss` CSV.
EmbeddingTrainResult run_train_embed(const TrainEmbedOptions& opts);

struct EvalSimOptions {
  std::vector<std::string> embeddings;
  std::vector<std::string> labels;  // one per embedding file; defaults to the file stem
  std::string simdata;
  std::vector<std::size_t> ks{10};
  std::string neighbors_out;        // optional per-character neighbour dump
};

// Writes a `K<TAB>alpha<TAB>accuracy` header and one row per (file, K), in
// the order given.
void run_eval_sim(const EvalSimOptions& opts, std::ostream& out);

struct TrainSegOptions {
  std::string train;
  std::string dev;        // defaults to the training corpus
  std::string test;       // optional; evaluated after training
  std::string embeddings; // required for neural emissions
  std::string radicals;   // required for char+radical emissions
  std::string checkpoint;
  std::string curve_csv;  // optional `epoch,train_nll,dev_f1`
  CrfConfig config;
};

// Trains, writes the checkpoint of the best dev epoch, and writes a short
// report (and the test scores when a test corpus is given) to `report`.
CrfTrainResult run_train_seg(const TrainSegOptions& opts, std::ostream& report);

struct EvalSegOptions {
  std::vector<std::string> checkpoints;
  std::vector<std::string> labels;
  std::string gold;
  std::string predicted;  // score a segmented file instead of decoding
};

// Writes a `P R F1 gold_words predicted_words correct_words label` TSV.
void run_eval_seg(const EvalSegOptions& opts, std::ostream& out);

struct SegmentOptions {
  std::string checkpoint;
};

// One output line per input line, words separated by single spaces.
void run_segment(const SegmentOptions& opts, std::istream& in, std::ostream& out);

std::string format_real(Real v);

}  // namespace radembed::cli
