#include "radembed/neural_crf.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "radembed/binary_io.h"
#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/ngram.h"

namespace radembed {

std::string to_string(EmissionMode mode) {
  switch (mode) {
    case EmissionMode::kNeural: return "neural";
    case EmissionMode::kChar: return "char";
    case EmissionMode::kCharRadical: return "char+radical";
  }
  return "unknown";
}

EmissionMode parse_emission_mode(const std::string& name) {
  if (name == "neural") return EmissionMode::kNeural;
  if (name == "char") return EmissionMode::kChar;
  if (name == "char+radical") return EmissionMode::kCharRadical;
  throw ConfigError("unknown emission mode '" + name + "' (expected neural, char or char+radical)");
}

void CrfConfig::validate() const {
  if (window == 0 || window % 2 == 0) throw ConfigError("CRF window size must be odd");
  if (hidden == 0) throw ConfigError("CRF hidden size must be positive");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("CRF learning rate must be positive");
}

std::vector<std::span<Real>> CrfModel::parameter_blocks() {
  std::vector<std::span<Real>> blocks{transition.flat(), start, stop};
  if (config.mode == EmissionMode::kNeural) {
    blocks.insert(blocks.end(), {net.w1.flat(), net.b1, net.w2.flat(), net.b2});
    if (config.finetune_embeddings) blocks.push_back(embeddings.flat());
  } else {
    blocks.push_back(indicators.char_weights.flat());
    if (config.mode == EmissionMode::kCharRadical) blocks.push_back(indicators.radical_weights.flat());
  }
  return blocks;
}

std::size_t CrfModel::num_parameters() {
  std::size_t n = 0;
  for (auto b : parameter_blocks()) n += b.size();
  return n;
}

CrfModel init_crf_model(const CrfConfig& cfg, Vocabulary vocab, EmbeddingMatrix embeddings,
                        const RadicalDict* radicals) {
  cfg.validate();
  CrfModel m;
  m.config = cfg;
  if (cfg.mode == EmissionMode::kNeural) {
    if (embeddings.vocab_size() != vocab.size() || embeddings.dim() == 0)
      throw ConfigError("neural CRF needs an embedding table covering the vocabulary");
    const std::size_t in = cfg.window * embeddings.dim();
    Rng rng(cfg.seed);
    m.net.w1 = Matrix(cfg.hidden, in);
    m.net.b1.assign(cfg.hidden, 0.0);
    m.net.w2 = Matrix(kNumTags, cfg.hidden);
    m.net.b2.assign(kNumTags, 0.0);
    rng.fill_uniform(m.net.w1.flat(), std::sqrt(6.0 / static_cast<Real>(in + cfg.hidden)));
    rng.fill_uniform(m.net.w2.flat(), std::sqrt(6.0 / static_cast<Real>(cfg.hidden + kNumTags)));
    m.embeddings = std::move(embeddings);
  } else {
    m.indicators.char_weights = Matrix(vocab.size(), kNumTags);
    if (cfg.mode == EmissionMode::kCharRadical) {
      if (!radicals) throw ConfigError("char+radical emissions need a radical dictionary");
      m.indicators.radical_weights = Matrix(radicals->num_classes(), kNumTags);
      m.indicators.radical_of = radicals->gold_for(vocab);
    }
  }
  m.vocab = std::move(vocab);
  return m;
}

namespace {

struct EmissionTrace {
  std::vector<CharIndex> window;
  Vector input;
  Vector pre;
  Vector hidden;
  TagScores out{};
};

EmissionTrace neural_forward(const CrfModel& m, std::span<const CharIndex> sentence, std::size_t i) {
  const std::size_t d = m.embeddings.dim();
  EmissionTrace t;
  t.window = context_window(sentence, i, m.config.window);
  t.input.resize(t.window.size() * d);
  for (std::size_t k = 0; k < t.window.size(); ++k) {
    auto col = m.embeddings.column(t.window[k]);
    std::copy(col.begin(), col.end(), t.input.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
  t.pre = linear_forward(m.net.w1, m.net.b1, t.input);
  t.hidden = hardtanh(t.pre);
  const Vector out = linear_forward(m.net.w2, m.net.b2, t.hidden);
  std::copy(out.begin(), out.end(), t.out.begin());
  return t;
}

void neural_backward(const CrfModel& m, const EmissionTrace& t, const TagScores& d_out,
                     CrfGradient& g) {
  add_outer(g.net.w2, d_out, t.hidden);
  for (std::size_t y = 0; y < kNumTags; ++y) g.net.b2[y] += d_out[y];
  Vector dz(t.hidden.size(), 0.0);
  linear_backward_input(m.net.w2, d_out, dz);
  hardtanh_backward(t.pre, dz);
  add_outer(g.net.w1, dz, t.input);
  for (std::size_t j = 0; j < dz.size(); ++j) g.net.b1[j] += dz[j];
  if (!m.config.finetune_embeddings) return;
  Vector dx(t.input.size(), 0.0);
  linear_backward_input(m.net.w1, dz, dx);
  const std::size_t d = m.embeddings.dim();
  for (std::size_t k = 0; k < t.window.size(); ++k) {
    auto col = g.embeddings.at(t.window[k]);
    for (std::size_t c = 0; c < d; ++c) col[c] += dx[k * d + c];
  }
}

CharIndex checked_char(const CrfModel& m, std::span<const CharIndex> sentence, std::size_t i) {
  const CharIndex c = sentence[i];
  if (c < 0 || static_cast<std::size_t>(c) >= m.vocab.size())
    throw ConfigError("CRF: character index out of vocabulary range");
  return c;
}

void reset_gradient(const CrfModel& m, CrfGradient& g) {
  g.transition = Matrix(kNumTags, kNumTags);
  g.start = {};
  g.stop = {};
  if (m.config.mode == EmissionMode::kNeural) {
    g.net.w1 = Matrix(m.net.w1.rows(), m.net.w1.cols());
    g.net.b1.assign(m.net.b1.size(), 0.0);
    g.net.w2 = Matrix(m.net.w2.rows(), m.net.w2.cols());
    g.net.b2.assign(m.net.b2.size(), 0.0);
  } else {
    g.net = EmissionNet{};
  }
  g.embeddings = SparseColumnGrad(m.embeddings.dim());
  g.char_rows = SparseColumnGrad(kNumTags);
  g.radical_rows = SparseColumnGrad(kNumTags);
}

void add_scaled(std::span<Real> dst, std::span<const Real> src, Real scale) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

void ascend(CrfModel& m, const CrfGradient& g, Real lr) {
  add_scaled(m.transition.flat(), g.transition.flat(), lr);
  add_scaled(m.start, g.start, lr);
  add_scaled(m.stop, g.stop, lr);
  if (m.config.mode == EmissionMode::kNeural) {
    add_scaled(m.net.w1.flat(), g.net.w1.flat(), lr);
    add_scaled(m.net.b1, g.net.b1, lr);
    add_scaled(m.net.w2.flat(), g.net.w2.flat(), lr);
    add_scaled(m.net.b2, g.net.b2, lr);
    for (std::size_t k = 0; k < g.embeddings.size(); ++k)
      add_scaled(m.embeddings.column(g.embeddings.id(k)), g.embeddings.column(k), lr);
    return;
  }
  for (std::size_t k = 0; k < g.char_rows.size(); ++k)
    add_scaled(m.indicators.char_weights.row(static_cast<std::size_t>(g.char_rows.id(k))),
               g.char_rows.column(k), lr);
  for (std::size_t k = 0; k < g.radical_rows.size(); ++k)
    add_scaled(m.indicators.radical_weights.row(static_cast<std::size_t>(g.radical_rows.id(k))),
               g.radical_rows.column(k), lr);
}

}  // namespace

TagScores emission_scores(const CrfModel& model, std::span<const CharIndex> sentence, std::size_t i) {
  if (i >= sentence.size()) throw ConfigError("emission_scores: position out of range");
  return neural_forward(model, sentence, i).out;
}

TagScores indicator_emission_scores(const CrfModel& model, std::span<const CharIndex> sentence,
                                    std::size_t i) {
  if (i >= sentence.size()) throw ConfigError("indicator_emission_scores: position out of range");
  if (model.config.mode == EmissionMode::kNeural)
    throw ConfigError("indicator_emission_scores: model uses neural emissions");
  const CharIndex c = checked_char(model, sentence, i);
  const auto& ind = model.indicators;
  TagScores out{};
  auto cw = ind.char_weights.row(static_cast<std::size_t>(c));
  for (std::size_t y = 0; y < kNumTags; ++y) out[y] += cw[y];
  if (model.config.mode == EmissionMode::kCharRadical) {
    auto rw = ind.radical_weights.row(static_cast<std::size_t>(ind.radical_of[c]));
    for (std::size_t y = 0; y < kNumTags; ++y) out[y] += rw[y];
  }
  return out;
}

TagLattice build_lattice(const CrfModel& model, std::span<const CharIndex> sentence) {
  TagLattice lat;
  lat.transition = model.transition;
  lat.start = model.start;
  lat.stop = model.stop;
  lat.emissions.resize(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i)
    lat.emissions[i] = model.config.mode == EmissionMode::kNeural
                           ? emission_scores(model, sentence, i)
                           : indicator_emission_scores(model, sentence, i);
  return lat;
}

Vector CrfGradient::flatten(const CrfModel& model) const {
  Vector out;
  auto append = [&](std::span<const Real> s) { out.insert(out.end(), s.begin(), s.end()); };
  append(transition.flat());
  append(start);
  append(stop);
  if (model.config.mode == EmissionMode::kNeural) {
    append(net.w1.flat());
    append(net.b1);
    append(net.w2.flat());
    append(net.b2);
    if (model.config.finetune_embeddings) {
      const std::size_t base = out.size();
      const std::size_t d = model.embeddings.dim();
      out.resize(base + model.embeddings.flat().size(), 0.0);
      for (std::size_t k = 0; k < embeddings.size(); ++k) {
        auto col = embeddings.column(k);
        std::copy(col.begin(), col.end(),
                  out.begin() + static_cast<std::ptrdiff_t>(base + static_cast<std::size_t>(embeddings.id(k)) * d));
      }
    }
    return out;
  }
  auto scatter_rows = [&](const SparseColumnGrad& rows, std::size_t num_rows) {
    const std::size_t base = out.size();
    out.resize(base + num_rows * kNumTags, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      auto r = rows.column(k);
      std::copy(r.begin(), r.end(),
                out.begin() + static_cast<std::ptrdiff_t>(base + static_cast<std::size_t>(rows.id(k)) * kNumTags));
    }
  };
  scatter_rows(char_rows, model.indicators.char_weights.rows());
  if (model.config.mode == EmissionMode::kCharRadical)
    scatter_rows(radical_rows, model.indicators.radical_weights.rows());
  return out;
}

Real sequence_log_likelihood(const CrfModel& model, std::span<const CharIndex> sentence,
                             std::span<const Tag> gold, CrfGradient* grad) {
  if (sentence.empty()) throw ConfigError("sequence_log_likelihood: empty sentence");
  if (gold.size() != sentence.size())
    throw ConfigError("sequence_log_likelihood: gold tags and sentence differ in length");
  const bool neural = model.config.mode == EmissionMode::kNeural;

  TagLattice lat;
  lat.transition = model.transition;
  lat.start = model.start;
  lat.stop = model.stop;
  lat.emissions.resize(sentence.size());
  std::vector<EmissionTrace> traces;
  if (neural) {
    traces.reserve(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      traces.push_back(neural_forward(model, sentence, i));
      lat.emissions[i] = traces.back().out;
    }
  } else {
    for (std::size_t i = 0; i < sentence.size(); ++i)
      lat.emissions[i] = indicator_emission_scores(model, sentence, i);
  }

  if (!grad) return sequence_score(lat, gold) - log_partition(lat);

  const LatticeGradient lg = lattice_log_likelihood(lat, gold);
  reset_gradient(model, *grad);
  grad->transition = lg.transition;
  grad->start = lg.start;
  grad->stop = lg.stop;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (neural) {
      neural_backward(model, traces[i], lg.emissions[i], *grad);
      continue;
    }
    const CharIndex c = sentence[i];
    add_scaled(grad->char_rows.at(c), lg.emissions[i], 1.0);
    if (model.config.mode == EmissionMode::kCharRadical)
      add_scaled(grad->radical_rows.at(model.indicators.radical_of[c]), lg.emissions[i], 1.0);
  }
  return lg.log_likelihood;
}

std::vector<Tag> decode(const CrfModel& model, std::span<const CharIndex> sentence) {
  if (sentence.empty()) return {};
  return viterbi_decode(build_lattice(model, sentence), model.config.constrain_tags);
}

Segmentation segment(const CrfModel& model, std::u32string_view chars) {
  const auto ids = model.vocab.encode(chars);
  return bies_to_words(chars, decode(model, ids));
}

SegEvalReport score_segmentation(std::span<const Segmentation> gold,
                                 std::span<const Segmentation> predicted) {
  if (gold.size() != predicted.size())
    throw DataError("segmentation scoring: gold has " + std::to_string(gold.size()) +
                    " sentences, prediction has " + std::to_string(predicted.size()));
  SegEvalReport r;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    std::u32string gold_chars, pred_chars;
    std::vector<std::pair<std::size_t, std::size_t>> gold_spans, pred_spans;
    for (const auto& w : gold[s]) {
      gold_spans.emplace_back(gold_chars.size(), gold_chars.size() + w.size());
      gold_chars += w;
    }
    for (const auto& w : predicted[s]) {
      pred_spans.emplace_back(pred_chars.size(), pred_chars.size() + w.size());
      pred_chars += w;
    }
    if (gold_chars != pred_chars)
      throw DataError("segmentation scoring: gold and prediction cover different characters", s + 1);
    // Both span lists are sorted by start offset.
    std::size_t a = 0, b = 0;
    while (a < gold_spans.size() && b < pred_spans.size()) {
      if (gold_spans[a] == pred_spans[b]) {
        ++r.correct_words;
        ++a;
        ++b;
      } else if (gold_spans[a].first < pred_spans[b].first ||
                 (gold_spans[a].first == pred_spans[b].first &&
                  gold_spans[a].second < pred_spans[b].second)) {
        ++a;
      } else {
        ++b;
      }
    }
    r.gold_words += gold_spans.size();
    r.predicted_words += pred_spans.size();
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<Real>(num) / static_cast<Real>(den);
  };
  r.precision = ratio(r.correct_words, r.predicted_words);
  r.recall = ratio(r.correct_words, r.gold_words);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

SegEvalReport evaluate_segmentation(const CrfModel& model, std::span<const Segmentation> gold) {
  std::vector<Segmentation> predicted;
  predicted.reserve(gold.size());
  for (const auto& words : gold) {
    std::u32string chars;
    for (const auto& w : words) chars += w;
    predicted.push_back(segment(model, chars));
  }
  return score_segmentation(gold, predicted);
}

CrfTrainResult train_crf(std::span<const Segmentation> train, std::span<const Segmentation> dev,
                         CrfModel init, const CrfEpochCallback& on_epoch) {
  const CrfConfig& cfg = init.config;
  cfg.validate();
  struct Example {
    std::vector<CharIndex> ids;
    std::vector<Tag> tags;
  };
  std::vector<Example> examples;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].empty()) continue;
    TaggedSentence ts;
    try {
      ts = words_to_bies(train[i]);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
    examples.push_back({init.vocab.encode(ts.chars), std::move(ts.tags)});
  }
  if (examples.empty()) throw DataError("train_crf: training corpus has no sentences");
  if (dev.empty()) throw DataError("train_crf: development corpus is empty");

  CrfTrainResult result{init, {}, {}, 0};
  CrfModel& m = init;
  Rng rng(cfg.seed ^ 0x9E3779B97F4A7C15ull);
  CrfGradient grad;
  Real best_f1 = -1.0;
  std::vector<std::size_t> order(examples.size());
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    Real nll = 0.0;
    for (std::size_t k : order) {
      const Real ll = sequence_log_likelihood(m, examples[k].ids, examples[k].tags, &grad);
      if (!std::isfinite(ll)) {
        std::ostringstream msg;
        msg << "non-finite CRF log-likelihood " << ll << " at epoch " << epoch
            << ", training sentence " << k + 1 << "; try a smaller learning rate";
        throw NumericError(msg.str());
      }
      nll -= ll;
      ascend(m, grad, cfg.lr);
    }
    nll /= static_cast<Real>(examples.size());
    const Real f1 = evaluate_segmentation(m, dev).f1;
    result.train_nll.push_back(nll);
    result.dev_f1.push_back(f1);
    log_info("CRF epoch " + std::to_string(epoch) + " train nll " + std::to_string(nll) +
             " dev F1 " + std::to_string(f1));
    if (f1 > best_f1) {
      best_f1 = f1;
      result.model = m;
      result.best_epoch = epoch;
    }
    if (on_epoch) on_epoch(epoch, nll, f1);
  }
  return result;
}

namespace {
constexpr std::string_view kCrfMagic = "RADCRF01";
}

void save_crf_model(std::ostream& out, const CrfModel& m) {
  using namespace binio;
  const auto& c = m.config;
  out.write(kCrfMagic.data(), static_cast<std::streamsize>(kCrfMagic.size()));
  write_u64(out, static_cast<std::uint64_t>(c.mode));
  write_u64(out, c.window);
  write_u64(out, c.hidden);
  write_u64(out, c.epochs);
  write_u64(out, c.seed);
  write_u64(out, c.finetune_embeddings ? 1 : 0);
  write_u64(out, c.constrain_tags ? 1 : 0);
  write_f64(out, c.lr);
  std::ostringstream vocab;
  m.vocab.save(vocab);
  write_string(out, vocab.str());
  write_matrix(out, m.transition);
  write_reals(out, m.start);
  write_reals(out, m.stop);
  write_matrix(out, m.net.w1);
  write_reals(out, m.net.b1);
  write_matrix(out, m.net.w2);
  write_reals(out, m.net.b2);
  write_u64(out, m.embeddings.dim());
  write_u64(out, m.embeddings.vocab_size());
  write_reals(out, m.embeddings.flat());
  write_matrix(out, m.indicators.char_weights);
  write_matrix(out, m.indicators.radical_weights);
  write_u64(out, m.indicators.radical_of.size());
  for (RadicalIndex r : m.indicators.radical_of) write_u64(out, static_cast<std::uint64_t>(r));
}

void save_crf_model(const std::string& path, const CrfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_crf_model(out, model);
  if (!out) throw DataError("write failed: " + path);
}

CrfModel load_crf_model(std::istream& in) {
  using namespace binio;
  expect_magic(in, kCrfMagic);
  CrfModel m;
  auto& c = m.config;
  const auto mode = read_u64(in);
  if (mode > 2) throw DataError("checkpoint: unknown emission mode");
  c.mode = static_cast<EmissionMode>(mode);
  c.window = read_u64(in);
  c.hidden = read_u64(in);
  c.epochs = read_u64(in);
  c.seed = read_u64(in);
  c.finetune_embeddings = read_u64(in) != 0;
  c.constrain_tags = read_u64(in) != 0;
  c.lr = read_f64(in);
  c.validate();
  std::istringstream vocab(read_string(in));
  m.vocab = Vocabulary::load(vocab);
  m.transition = read_matrix(in);
  read_reals_into(in, m.start);
  read_reals_into(in, m.stop);
  m.net.w1 = read_matrix(in);
  m.net.b1 = read_reals(in);
  m.net.w2 = read_matrix(in);
  m.net.b2 = read_reals(in);
  const auto dim = read_u64(in);
  const auto vsize = read_u64(in);
  m.embeddings = EmbeddingMatrix(dim, vsize);
  read_reals_into(in, m.embeddings.flat());
  m.indicators.char_weights = read_matrix(in);
  m.indicators.radical_weights = read_matrix(in);
  const auto nrad = read_u64(in);
  if (nrad > m.vocab.size()) throw DataError("checkpoint: radical table larger than vocabulary");
  m.indicators.radical_of.resize(nrad);
  for (auto& r : m.indicators.radical_of) r = static_cast<RadicalIndex>(read_u64(in));

  if (m.transition.rows() != kNumTags || m.transition.cols() != kNumTags)
    throw DataError("checkpoint: transition table must be 4x4");
  if (c.mode == EmissionMode::kNeural) {
    if (vsize != m.vocab.size() || m.net.w1.rows() != c.hidden ||
        m.net.w1.cols() != c.window * dim || m.net.b1.size() != c.hidden ||
        m.net.w2.rows() != kNumTags || m.net.w2.cols() != c.hidden || m.net.b2.size() != kNumTags)
      throw DataError("checkpoint: emission network shapes disagree with the stored config");
  } else {
    if (m.indicators.char_weights.rows() != m.vocab.size() ||
        m.indicators.char_weights.cols() != kNumTags)
      throw DataError("checkpoint: character weight table has the wrong shape");
    if (c.mode == EmissionMode::kCharRadical) {
      if (m.indicators.radical_of.size() != m.vocab.size())
        throw DataError("checkpoint: radical table does not cover the vocabulary");
      for (RadicalIndex r : m.indicators.radical_of)
        if (r < 0 || static_cast<std::size_t>(r) >= m.indicators.radical_weights.rows())
          throw DataError("checkpoint: radical index out of range");
    }
  }
  return m;
}

CrfModel load_crf_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load_crf_model(in);
}

}  // namespace radembed
