// radembed: train radical-aware character embeddings, evaluate them, and
// train/apply a CRF word segmenter on top of them.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "radembed/commands.h"
#include "radembed/error.h"
#include "radembed/log.h"

namespace {

using namespace radembed;

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Seed for every random draw")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radical-enhanced Chinese character embeddings and neural CRF segmentation"};
  app.set_config("--config", "", "INI/TOML file with option values; flags override it");
  app.require_subcommand(1);
  int verbosity = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbosity, "Log progress (repeat for more)");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  // train-embed
  cli::TrainEmbedOptions te;
  auto* train_embed = app.add_subcommand("train-embed", "Train character embeddings");
  train_embed->add_option("--corpus", te.corpus, "Raw corpus, one sentence per line")->required();
  train_embed->add_option("--radicals", te.radicals, "character<TAB>radical dictionary")->required();
  train_embed->add_option("--emb-out", te.emb_out, "Embedding text file to write")->required();
  train_embed->add_option("--checkpoint", te.checkpoint, "Checkpoint path (default <emb-out>.ckpt)");
  train_embed->add_option("--loss-out", te.loss_csv, "epoch,mean_loss CSV (default <emb-out>.loss.csv)");
  train_embed->add_option("--alpha", te.config.alpha, "Weight of the context loss")->capture_default_str();
  train_embed->add_option("--dim", te.config.dim, "Embedding size")->capture_default_str();
  train_embed->add_option("--window", te.config.window, "Ngram window (odd)")->capture_default_str();
  train_embed->add_option("--hidden", te.config.hidden, "Hidden layer size")->capture_default_str();
  train_embed->add_option("--lr", te.config.lr, "SGD learning rate")->capture_default_str();
  train_embed->add_option("--epochs", te.config.epochs, "Passes over the corpus")->capture_default_str();
  train_embed->add_option("--init-scale", te.config.init_scale, "Uniform init half-width")
      ->capture_default_str();
  train_embed->add_option("--corruptions", te.config.corruptions, "Corrupted windows per position")
      ->capture_default_str();
  train_embed->add_option("--min-count", te.min_count, "Minimum character frequency")
      ->capture_default_str();
  add_seed(train_embed, te.config.seed);

  // eval-sim
  cli::EvalSimOptions es;
  std::string es_out;
  auto* eval_sim = app.add_subcommand("eval-sim", "Nearest-neighbour category accuracy");
  eval_sim->add_option("--emb", es.embeddings, "Embedding text file(s)")->required();
  eval_sim->add_option("--label", es.labels, "Label per embedding file (e.g. its alpha)");
  eval_sim->add_option("--simdata", es.simdata, "category<TAB>characters dataset")->required();
  eval_sim->add_option("--k", es.ks, "Neighbour count(s)")->capture_default_str();
  eval_sim->add_option("--neighbors-out", es.neighbors_out, "Write every neighbour list here");
  eval_sim->add_option("--out", es_out, "Write the accuracy TSV here instead of stdout");

  // train-seg
  cli::TrainSegOptions ts;
  std::string ts_mode = "neural";
  auto* train_seg = app.add_subcommand("train-seg", "Train a CRF word segmenter");
  train_seg->add_option("--train", ts.train, "Space-segmented training corpus")->required();
  train_seg->add_option("--dev", ts.dev, "Development corpus for epoch selection");
  train_seg->add_option("--test", ts.test, "Test corpus scored after training");
  train_seg->add_option("--emb", ts.embeddings, "Embedding text file (neural emissions)");
  train_seg->add_option("--radicals", ts.radicals, "Radical dictionary (char+radical emissions)");
  train_seg->add_option("--checkpoint", ts.checkpoint, "Model file to write")->required();
  train_seg->add_option("--curve-out", ts.curve_csv, "epoch,train_nll,dev_f1 CSV");
  train_seg->add_option("--emission", ts_mode, "neural | char | char+radical")
      ->check(CLI::IsMember({"neural", "char", "char+radical"}))
      ->capture_default_str();
  train_seg->add_option("--window", ts.config.window, "Character window (odd)")->capture_default_str();
  train_seg->add_option("--hidden", ts.config.hidden, "Hidden layer size")->capture_default_str();
  train_seg->add_option("--lr", ts.config.lr, "SGD learning rate")->capture_default_str();
  train_seg->add_option("--epochs", ts.config.epochs, "Passes over the corpus")->capture_default_str();
  train_seg->add_flag("--finetune-embeddings", ts.config.finetune_embeddings,
                      "Update embeddings during CRF training");
  train_seg->add_flag("--constrain-tags", ts.config.constrain_tags,
                      "Forbid ill-formed BIES transitions when decoding");
  add_seed(train_seg, ts.config.seed);

  // eval-seg
  cli::EvalSegOptions ev;
  auto* eval_seg = app.add_subcommand("eval-seg", "Word precision/recall/F1 against a gold corpus");
  eval_seg->add_option("--test", ev.gold, "Gold segmented corpus")->required();
  eval_seg->add_option("--checkpoint", ev.checkpoints, "Model file(s) to decode with");
  eval_seg->add_option("--label", ev.labels, "Label per checkpoint");
  eval_seg->add_option("--pred", ev.predicted, "Score this segmented file instead of decoding");

  // segment
  cli::SegmentOptions sg;
  std::string sg_in, sg_out;
  auto* seg = app.add_subcommand("segment", "Segment raw text, one sentence per line");
  seg->add_option("--checkpoint", sg.checkpoint, "Model file")->required();
  seg->add_option("--input", sg_in, "Raw text (default stdin)");
  seg->add_option("--output", sg_out, "Segmented text (default stdout)");

  CLI11_PARSE(app, argc, argv);

  set_log_level(quiet ? LogLevel::kQuiet
                      : verbosity >= 2 ? LogLevel::kDebug
                      : verbosity == 1 ? LogLevel::kInfo
                                       : LogLevel::kWarning);
  try {
    if (*train_embed) {
      cli::run_train_embed(te);
    } else if (*eval_sim) {
      if (es_out.empty()) {
        cli::run_eval_sim(es, std::cout);
      } else {
        std::ofstream out(es_out, std::ios::binary);
        if (!out) throw DataError("cannot write " + es_out);
        cli::run_eval_sim(es, out);
      }
    } else if (*train_seg) {
      ts.config.mode = parse_emission_mode(ts_mode);
      cli::run_train_seg(ts, std::cout);
    } else if (*eval_seg) {
      cli::run_eval_seg(ev, std::cout);
    } else if (*seg) {
      std::ifstream fin;
      std::ofstream fout;
      if (!sg_in.empty()) {
        fin.open(sg_in, std::ios::binary);
        if (!fin) throw ConfigError("input not found: " + sg_in);
      }
      if (!sg_out.empty()) {
        fout.open(sg_out, std::ios::binary);
        if (!fout) throw DataError("cannot write " + sg_out);
      }
      cli::run_segment(sg, sg_in.empty() ? std::cin : fin, sg_out.empty() ? std::cout : fout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
