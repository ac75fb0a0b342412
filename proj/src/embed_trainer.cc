#include "radembed/embed_trainer.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "radembed/binary_io.h"
#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/ngram.h"
#include "radembed/text.h"

namespace radembed {

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
  if (window == 0 || window % 2 == 0) throw ConfigError("window size must be odd");
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  if (hidden == 0) throw ConfigError("hidden size must be positive");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
    throw ConfigError("init scale must be non-negative");
  if (corruptions == 0) throw ConfigError("corruptions per window must be positive");
}

EmbeddingModel init_embedding_model(std::size_t vocab_size, std::size_t num_radicals,
                                    const TrainConfig& cfg, Rng& rng) {
  EmbeddingModel m{EmbeddingMatrix(cfg.dim, vocab_size),
                   CwParams::zeros(cfg.window, cfg.dim, cfg.hidden),
                   RadicalHead::zeros(num_radicals, cfg.dim)};
  const Real s = cfg.init_scale;
  rng.fill_uniform(m.embeddings.flat(), s);
  rng.fill_uniform(m.cw.w1.flat(), s);
  rng.fill_uniform(m.cw.b1, s);
  rng.fill_uniform(m.cw.w2.flat(), s);
  m.cw.b2 = rng.uniform(-s, s);
  rng.fill_uniform(m.head.w.flat(), s);
  rng.fill_uniform(m.head.b, s);
  return m;
}

std::vector<std::vector<CharIndex>> encode_corpus(std::span<const std::string> lines,
                                                  const Vocabulary& vocab) {
  std::vector<std::vector<CharIndex>> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(vocab.encode(sentence_chars(lines[i])));
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
  }
  return out;
}

namespace {

void apply(EmbeddingModel& m, const HybridGradient& g, Real lr) {
  sgd_step(m.cw.w1, g.cw.w1, lr);
  sgd_step(m.cw.b1, g.cw.b1, lr);
  sgd_step(m.cw.w2, g.cw.w2, lr);
  m.cw.b2 -= lr * g.cw.b2;
  sgd_step(m.head.w, g.head.w, lr);
  sgd_step(m.head.b, g.head.b, lr);
  for (std::size_t k = 0; k < g.emb.size(); ++k)
    sgd_step(m.embeddings.column(g.emb.id(k)), g.emb.column(k), lr);
}

}  // namespace

EmbeddingTrainResult train_embeddings(std::span<const std::vector<CharIndex>> sentences,
                                      const Vocabulary& vocab, std::span<const RadicalIndex> gold,
                                      std::size_t num_radicals, const TrainConfig& cfg,
                                      const EpochCallback& on_epoch) {
  cfg.validate();
  if (gold.size() != vocab.size())
    throw ConfigError("train_embeddings: radical table does not cover the vocabulary");
  if (num_radicals == 0) throw ConfigError("train_embeddings: need at least one radical class");
  std::size_t nonempty = 0;
  for (const auto& s : sentences) nonempty += !s.empty();
  if (nonempty == 0) throw DataError("train_embeddings: corpus has no non-empty sentences");

  Rng rng(cfg.seed);
  EmbeddingTrainResult result{init_embedding_model(vocab.size(), num_radicals, cfg, rng), {}};
  EmbeddingModel& m = result.model;
  HybridGradient grad = HybridGradient::zeros_like(m.embeddings, m.cw, m.head);

  std::vector<std::size_t> order(sentences.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    Real total = 0.0;
    std::size_t count = 0;
    for (std::size_t si : order) {
      const auto& sentence = sentences[si];
      if (sentence.empty()) continue;
      const auto samples = sample_ngrams(sentence, cfg.window, rng, vocab, cfg.corruptions);
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const HybridLoss loss =
            hybrid_loss(m.embeddings, m.cw, m.head, samples[k], gold, cfg.alpha, &grad);
        if (!std::isfinite(loss.total)) {
          std::ostringstream msg;
          msg << "non-finite loss " << loss.total << " at epoch " << epoch + 1 << ", sentence "
              << si + 1 << ", position " << k / cfg.corruptions + 1 << " (context "
              << loss.context << ", radical " << loss.radical << "); try a smaller learning rate";
          throw NumericError(msg.str());
        }
        total += loss.total;
        ++count;
        apply(m, grad, cfg.lr);
      }
    }
    const Real mean = total / static_cast<Real>(count);
    result.epoch_mean_loss.push_back(mean);
    log_info("embedding epoch " + std::to_string(epoch + 1) + " mean loss " + std::to_string(mean));
    if (on_epoch) on_epoch(epoch + 1, mean);
  }
  return result;
}

EmbeddingTrainResult train_embeddings(std::span<const std::string> corpus_lines,
                                      const Vocabulary& vocab, const RadicalDict& radicals,
                                      const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const auto sentences = encode_corpus(corpus_lines, vocab);
  const auto gold = radicals.gold_for(vocab);
  return train_embeddings(sentences, vocab, gold, radicals.num_classes(), cfg, on_epoch);
}

namespace {
constexpr std::string_view kMagic = "RADEMB01";
}

void save_embedding_checkpoint(std::ostream& out, const EmbeddingCheckpoint& ck) {
  using namespace binio;
  const auto& c = ck.config;
  const auto& m = ck.model;
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  write_u64(out, ck.vocab_fingerprint);
  write_f64(out, c.alpha);
  write_f64(out, c.lr);
  write_u64(out, c.epochs);
  write_u64(out, c.window);
  write_u64(out, c.dim);
  write_u64(out, c.hidden);
  write_u64(out, c.seed);
  write_f64(out, c.init_scale);
  write_u64(out, c.corruptions);
  write_u64(out, m.embeddings.vocab_size());
  write_u64(out, m.head.num_radicals());
  write_reals(out, m.embeddings.flat());
  write_matrix(out, m.cw.w1);
  write_reals(out, m.cw.b1);
  write_matrix(out, m.cw.w2);
  write_f64(out, m.cw.b2);
  write_matrix(out, m.head.w);
  write_reals(out, m.head.b);
}

void save_embedding_checkpoint(const std::string& path, const EmbeddingCheckpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_embedding_checkpoint(out, ck);
  if (!out) throw DataError("write failed: " + path);
}

EmbeddingCheckpoint load_embedding_checkpoint(std::istream& in) {
  using namespace binio;
  expect_magic(in, kMagic);
  EmbeddingCheckpoint ck;
  ck.vocab_fingerprint = read_u64(in);
  auto& c = ck.config;
  c.alpha = read_f64(in);
  c.lr = read_f64(in);
  c.epochs = read_u64(in);
  c.window = read_u64(in);
  c.dim = read_u64(in);
  c.hidden = read_u64(in);
  c.seed = read_u64(in);
  c.init_scale = read_f64(in);
  c.corruptions = read_u64(in);
  c.validate();
  const auto vocab_size = read_u64(in);
  const auto num_radicals = read_u64(in);
  auto& m = ck.model;
  m.embeddings = EmbeddingMatrix(c.dim, vocab_size);
  read_reals_into(in, m.embeddings.flat());
  m.cw.w1 = read_matrix(in);
  m.cw.b1 = read_reals(in);
  m.cw.w2 = read_matrix(in);
  m.cw.b2 = read_f64(in);
  m.head.w = read_matrix(in);
  m.head.b = read_reals(in);
  if (m.cw.w1.rows() != c.hidden || m.cw.w1.cols() != c.window * c.dim ||
      m.cw.b1.size() != c.hidden || m.cw.w2.rows() != 1 || m.cw.w2.cols() != c.hidden ||
      m.head.w.rows() != num_radicals || m.head.w.cols() != c.dim ||
      m.head.b.size() != num_radicals)
    throw DataError("checkpoint: parameter shapes disagree with the stored config");
  return ck;
}

EmbeddingCheckpoint load_embedding_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load_embedding_checkpoint(in);
}

}  // namespace radembed
