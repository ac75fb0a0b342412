#include "radembed/commands.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/similarity.h"
#include "radembed/text.h"

namespace radembed::cli {
namespace fs = std::filesystem;

std::string format_real(Real v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void require_input(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  if (!fs::is_regular_file(path)) throw ConfigError(what + " not found: " + path);
}

void require_output(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is required");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw ConfigError(what + " directory does not exist: " + parent.string());
}

std::vector<Segmentation> load_segmented(const std::string& path) {
  const auto lines = read_lines_from(path);
  try {
    return parse_segmented(lines);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::vector<std::string> labels_for(const std::vector<std::string>& paths,
                                    const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != paths.size())
    throw ConfigError("give exactly one label per input file");
  if (!labels.empty()) return labels;
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(fs::path(p).stem().string());
  return out;
}

}  // namespace

EmbeddingTrainResult run_train_embed(const TrainEmbedOptions& opts) {
  opts.config.validate();
  if (opts.min_count < 1) throw ConfigError("min-count must be >= 1");
  require_input(opts.corpus, "corpus");
  require_input(opts.radicals, "radical dictionary");
  require_output(opts.emb_out, "embedding output");
  const std::string ckpt = opts.checkpoint.empty() ? opts.emb_out + ".ckpt" : opts.checkpoint;
  const std::string loss = opts.loss_csv.empty() ? opts.emb_out + ".loss.csv" : opts.loss_csv;
  require_output(ckpt, "checkpoint");
  require_output(loss, "loss CSV");

  const auto corpus = read_lines_from(opts.corpus);
  RadicalDict radicals;
  try {
    radicals = RadicalDict::load(opts.radicals);
  } catch (const DataError& e) {
    throw DataError(opts.radicals + ": " + e.what());
  }
  const Vocabulary vocab = Vocabulary::build(corpus, opts.min_count);
  log_info("vocabulary: " + std::to_string(vocab.num_chars()) + " characters, " +
           std::to_string(radicals.num_classes()) + " radical classes");

  auto result = train_embeddings(corpus, vocab, radicals, opts.config);

  save_embeddings_text(opts.emb_out, vocab, result.model.embeddings);
  save_embedding_checkpoint(ckpt, EmbeddingCheckpoint{opts.config, vocab.fingerprint(), result.model});
  auto out = open_out(loss);
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < result.epoch_mean_loss.size(); ++e)
    out << e + 1 << ',' << format_real(result.epoch_mean_loss[e]) << '\n';
  return result;
}

void run_eval_sim(const EvalSimOptions& opts, std::ostream& out) {
  if (opts.embeddings.empty()) throw ConfigError("at least one embedding file is required");
  if (opts.ks.empty()) throw ConfigError("at least one K is required");
  for (const auto& p : opts.embeddings) require_input(p, "embedding file");
  require_input(opts.simdata, "similarity dataset");
  if (!opts.neighbors_out.empty()) require_output(opts.neighbors_out, "neighbour dump");
  const auto labels = labels_for(opts.embeddings, opts.labels);
  for (std::size_t k : opts.ks)
    if (k == 0) throw ConfigError("K must be positive");

  const SimilarityDataset dataset = [&] {
    try {
      return SimilarityDataset::load(opts.simdata);
    } catch (const DataError& e) {
      throw DataError(opts.simdata + ": " + e.what());
    }
  }();

  std::ofstream dump;
  if (!opts.neighbors_out.empty()) {
    dump = open_out(opts.neighbors_out);
    dump << "label\tK\tquery\trank\tneighbor\tcosine\n";
  }
  out << "K\talpha\taccuracy\n";
  for (std::size_t f = 0; f < opts.embeddings.size(); ++f) {
    const EmbeddingFile ef = load_embeddings_text(opts.embeddings[f]);
    for (std::size_t k : opts.ks)
      if (k >= ef.vocab.size())
        throw ConfigError("K=" + std::to_string(k) + " must be smaller than the vocabulary size " +
                          std::to_string(ef.vocab.size()) + " of " + opts.embeddings[f]);
    for (std::size_t k : opts.ks) {
      const AccuracyReport r = category_accuracy(ef.embeddings, ef.vocab, dataset, k);
      out << k << '\t' << labels[f] << '\t' << format_real(r.accuracy) << '\n';
      if (!dump.is_open()) continue;
      for (const auto& nl : r.neighbors)
        for (std::size_t rank = 0; rank < nl.neighbors.size(); ++rank)
          dump << labels[f] << '\t' << k << '\t' << ef.vocab.token(nl.query) << '\t' << rank + 1
               << '\t' << ef.vocab.token(nl.neighbors[rank].index) << '\t'
               << format_real(nl.neighbors[rank].score) << '\n';
    }
  }
}

CrfTrainResult run_train_seg(const TrainSegOptions& opts, std::ostream& report) {
  const CrfConfig& cfg = opts.config;
  cfg.validate();
  require_input(opts.train, "training corpus");
  if (!opts.dev.empty()) require_input(opts.dev, "development corpus");
  if (!opts.test.empty()) require_input(opts.test, "test corpus");
  if (cfg.mode == EmissionMode::kNeural) require_input(opts.embeddings, "embedding file");
  if (cfg.mode == EmissionMode::kCharRadical) require_input(opts.radicals, "radical dictionary");
  require_output(opts.checkpoint, "checkpoint");
  if (!opts.curve_csv.empty()) require_output(opts.curve_csv, "dev curve CSV");

  const auto train = load_segmented(opts.train);
  std::vector<Segmentation> dev;
  if (opts.dev.empty()) {
    log_warning("no development corpus given; selecting the epoch on the training corpus");
    dev = train;
  } else {
    dev = load_segmented(opts.dev);
  }

  CrfModel init;
  if (cfg.mode == EmissionMode::kNeural) {
    EmbeddingFile ef = load_embeddings_text(opts.embeddings);
    init = init_crf_model(cfg, std::move(ef.vocab), std::move(ef.embeddings));
  } else {
    std::vector<std::string> raw;
    for (const auto& words : train) {
      std::u32string chars;
      for (const auto& w : words) chars += w;
      raw.push_back(utf8_encode(chars));
    }
    Vocabulary vocab = Vocabulary::build(raw, 1);
    RadicalDict radicals;
    if (cfg.mode == EmissionMode::kCharRadical) radicals = RadicalDict::load(opts.radicals);
    init = init_crf_model(cfg, std::move(vocab), EmbeddingMatrix{},
                          cfg.mode == EmissionMode::kCharRadical ? &radicals : nullptr);
  }

  CrfTrainResult result = train_crf(train, dev, std::move(init));
  save_crf_model(opts.checkpoint, result.model);
  if (!opts.curve_csv.empty()) {
    auto out = open_out(opts.curve_csv);
    out << "epoch,train_nll,dev_f1\n";
    for (std::size_t e = 0; e < result.dev_f1.size(); ++e)
      out << e + 1 << ',' << format_real(result.train_nll[e]) << ',' << format_real(result.dev_f1[e])
          << '\n';
  }
  report << "best_epoch\t" << result.best_epoch << '\n';
  if (result.best_epoch > 0)
    report << "dev_F1\t" << format_real(result.dev_f1[result.best_epoch - 1]) << '\n';
  if (!opts.test.empty()) {
    const SegEvalReport r = evaluate_segmentation(result.model, load_segmented(opts.test));
    report << "test_P\t" << format_real(r.precision) << "\ntest_R\t" << format_real(r.recall)
           << "\ntest_F1\t" << format_real(r.f1) << '\n';
  }
  return result;
}

void run_eval_seg(const EvalSegOptions& opts, std::ostream& out) {
  require_input(opts.gold, "gold corpus");
  if (opts.predicted.empty() && opts.checkpoints.empty())
    throw ConfigError("give a checkpoint or a predicted segmentation file");
  if (!opts.predicted.empty()) require_input(opts.predicted, "predicted segmentation");
  for (const auto& c : opts.checkpoints) require_input(c, "checkpoint");

  const auto gold = load_segmented(opts.gold);
  auto row = [&](const SegEvalReport& r, const std::string& label) {
    out << format_real(r.precision) << '\t' << format_real(r.recall) << '\t' << format_real(r.f1)
        << '\t' << r.gold_words << '\t' << r.predicted_words << '\t' << r.correct_words << '\t'
        << label << '\n';
  };
  out << "P\tR\tF1\tgold_words\tpredicted_words\tcorrect_words\tlabel\n";
  if (!opts.predicted.empty()) {
    const auto pred = load_segmented(opts.predicted);
    row(score_segmentation(gold, pred), fs::path(opts.predicted).stem().string());
  }
  const auto labels = labels_for(opts.checkpoints, opts.labels);
  for (std::size_t i = 0; i < opts.checkpoints.size(); ++i)
    row(evaluate_segmentation(load_crf_model(opts.checkpoints[i]), gold), labels[i]);
}

void run_segment(const SegmentOptions& opts, std::istream& in, std::ostream& out) {
  require_input(opts.checkpoint, "checkpoint");
  const CrfModel model = load_crf_model(opts.checkpoint);
  const auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::u32string chars;
    try {
      chars = sentence_chars(lines[i]);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
    out << format_segmented(segment(model, chars)) << '\n';
  }
}

}  // namespace radembed::cli
