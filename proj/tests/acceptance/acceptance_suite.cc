// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "radembed/commands.h"
#include "radembed/embed_trainer.h"
#include "radembed/log.h"
#include "radembed/neural_crf.h"
#include "radembed/similarity.h"
#include "radembed/synthetic.h"
#include "radembed/text.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace fs = std::filesystem;
using namespace radembed;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::binary);
  for (const auto& l : lines) out << l << '\n';
}

std::vector<Tag> random_tags(Rng& rng, std::size_t len) {
  std::vector<Tag> t(len);
  for (auto& y : t) y = static_cast<Tag>(rng.below(kNumTags));
  return t;
}

std::vector<CharIndex> random_sentence(Rng& rng, std::size_t len, std::size_t vocab_size) {
  std::vector<CharIndex> s(len);
  for (auto& c : s) c = static_cast<CharIndex>(2 + rng.below(vocab_size - 2));
  return s;
}

CrfModel random_indicator_crf(Rng& rng, std::size_t n_chars, bool radicals) {
  Vocabulary vocab = fixtures::tiny_vocab(n_chars);
  CrfConfig cfg;
  cfg.mode = radicals ? EmissionMode::kCharRadical : EmissionMode::kChar;
  std::vector<std::string> dict;
  for (std::size_t i = 0; i < n_chars; i += 2)
    dict.push_back(utf8_encode(vocab.char_at(static_cast<CharIndex>(2 + i))) + "\tr" + std::to_string(i % 3));
  const auto rd = RadicalDict::parse(dict);
  CrfModel m = init_crf_model(cfg, std::move(vocab), EmbeddingMatrix{}, &rd);
  for (auto block : m.parameter_blocks()) rng.fill_uniform(block, 1.0);
  return m;
}

Outcome gradients() {
  Rng rng(20240601);
  Real worst_h = 0.0, worst_c = 0.0;
  int hybrid = 0, crf = 0, skipped = 0;
  while (hybrid < 120) {
    auto m = fixtures::random_embed_model(rng, 4 + rng.below(6), 1 + rng.below(4), 1 + rng.below(4),
                                          rng.below(2) ? 3 : 5, 1 + rng.below(5));
    const auto s = fixtures::random_sample(rng, m);
    if (fixtures::kink_distance(m, s) < 1e-3) {
      ++skipped;
      continue;
    }
    worst_h = std::max(worst_h, fixtures::hybrid_fd_error(m, s, rng.uniform()));
    ++hybrid;
  }
  while (crf < 120) {
    const std::size_t len = 1 + rng.below(5);
    if (crf % 4 < 2) {
      CrfModel m = fixtures::random_neural_crf(rng, 6, 1 + rng.below(4), 1 + rng.below(6), crf % 4 == 1);
      const auto s = random_sentence(rng, len, m.vocab.size());
      if (fixtures::crf_kink_distance(m, s) < 1e-3) {
        ++skipped;
        continue;
      }
      worst_c = std::max(worst_c, fixtures::crf_fd_error(m, s, random_tags(rng, len)));
    } else {
      CrfModel m = random_indicator_crf(rng, 7, crf % 4 == 3);
      const auto s = random_sentence(rng, len, m.vocab.size());
      worst_c = std::max(worst_c, fixtures::crf_fd_error(m, s, random_tags(rng, len)));
    }
    ++crf;
  }
  return {worst_h < 1e-4 && worst_c < 1e-4,
          fmt("hybrid_loss %d instances max rel err %.2e; sequence_log_likelihood %d instances max rel "
              "err %.2e; eps 1e-5, tol 1e-4; %d draws near a HardTanh/hinge kink redrawn",
              hybrid, worst_h, crf, worst_c, skipped)};
}

Outcome lattices() {
  Rng rng(77);
  Real worst = 0.0;
  int mismatched = 0;
  const int n = 600;
  for (int t = 0; t < n; ++t) {
    TagLattice lat;
    lat.emissions.resize(1 + t % 6);
    const Real scale = t % 10 == 0 ? 300.0 : 3.0;
    for (auto& e : lat.emissions) rng.fill_uniform(e, scale);
    rng.fill_uniform(lat.transition.flat(), scale);
    rng.fill_uniform(lat.start, scale);
    rng.fill_uniform(lat.stop, scale);
    worst = std::max(worst, std::abs(log_partition(lat) - static_cast<Real>(oracle::brute_log_partition(lat))));
    const auto y = viterbi_decode(lat);
    mismatched += sequence_score(lat, y) != oracle::brute_max_score(lat);
  }
  return {worst <= 1e-8 && mismatched == 0,
          fmt("%d lattices L=1..6: max |log Z - brute| %.2e (tol 1e-8); Viterbi score != brute max in %d",
              n, worst, mismatched)};
}

Outcome alpha_identities() {
  Rng rng(4);
  int bad1 = 0, bad0 = 0;
  const int n = 2000;
  for (int t = 0; t < n; ++t) {
    auto m = fixtures::random_embed_model(rng, 4 + rng.below(10), 1 + rng.below(8), 1 + rng.below(8),
                                          rng.below(2) ? 3 : 5, 1 + rng.below(6), rng.uniform(0.1, 3.0));
    const auto s = fixtures::random_sample(rng, m);
    const auto sw = s.corrupted();
    bad1 += hybrid_loss(m.emb, m.cw, m.head, s, m.gold, 1.0).total != ranking_loss(m.emb, m.cw, s.window, sw);
    Real a = 0.0, b = 0.0;
    for (CharIndex c : s.window) a += radical_loss(m.emb, m.head, c, m.gold[c]);
    for (CharIndex c : sw) b += radical_loss(m.emb, m.head, c, m.gold[c]);
    bad0 += hybrid_loss(m.emb, m.cw, m.head, s, m.gold, 0.0).total != a + b;
  }
  return {bad1 == 0 && bad0 == 0,
          fmt("%d random inputs: alpha=1 != ranking_loss in %d, alpha=0 != double radical sum in %d", n,
              bad1, bad0)};
}

Outcome radical_trend() {
  Real sum04 = 0.0, sum10 = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    synthetic::RadicalCorpusOptions shape;
    shape.seed = seed;
    const auto rc = synthetic::make_radical_corpus(shape);
    const auto radicals = RadicalDict::parse(rc.radicals);
    const auto ds = SimilarityDataset::parse(rc.categories);
    const auto vocab = Vocabulary::build(rc.corpus);
    Real acc[2];
    for (int k = 0; k < 2; ++k) {
      TrainConfig cfg;
      cfg.alpha = k == 0 ? 0.4 : 1.0;
      cfg.seed = seed;
      cfg.epochs = 10;
      cfg.lr = 0.05;
      cfg.init_scale = 0.5;
      const auto r = train_embeddings(rc.corpus, vocab, radicals, cfg);
      acc[k] = category_accuracy(r.model.embeddings, vocab, ds, 10).accuracy;
    }
    sum04 += acc[0];
    sum10 += acc[1];
    per_seed += fmt(" %.3f/%.3f", acc[0], acc[1]);
  }
  const Real margin = (sum04 - sum10) / 5.0;
  return {margin >= 0.05,
          fmt("2000 sentences, K=10, 5 seeds: mean acc alpha=0.4 %.4f vs alpha=1.0 %.4f, margin %.4f "
              "(need >= 0.05); per seed%s",
              sum04 / 5, sum10 / 5, margin, per_seed.c_str())};
}

Outcome segmentation() {
  synthetic::SegmentationCorpusOptions shape;
  shape.sentences = 500;
  const auto sc = synthetic::make_segmentation_corpus(shape);
  const auto all = parse_segmented(sc.segmented);
  const std::vector<Segmentation> train(all.begin(), all.begin() + 400), dev(all.begin() + 400, all.begin() + 450),
      test(all.begin() + 450, all.end());
  const auto raw = synthetic::unsegment(sc.segmented);
  const auto radicals = RadicalDict::parse(sc.radicals);

  const auto vocab = Vocabulary::build(raw);
  TrainConfig tc;
  tc.epochs = 10;
  tc.lr = 0.05;
  tc.init_scale = 0.5;
  const auto emb = train_embeddings(raw, vocab, radicals, tc);
  CrfConfig nc;
  nc.epochs = 30;
  const auto neural = train_crf(train, dev, init_crf_model(nc, vocab, emb.model.embeddings));
  const Real f_neural = evaluate_segmentation(neural.model, test).f1;

  const std::vector<std::string> train_raw(raw.begin(), raw.begin() + 400);
  CrfConfig cc;
  cc.mode = EmissionMode::kChar;
  cc.epochs = 30;
  const auto chr = train_crf(train, dev, init_crf_model(cc, Vocabulary::build(train_raw), EmbeddingMatrix{}));
  const Real f_char = evaluate_segmentation(chr.model, test).f1;
  return {f_neural >= 0.90 && f_char >= 0.80,
          fmt("500 sentences (400 train / 50 dev / 50 test): NeuralCRF test F1 %.4f (need >= 0.90), "
              "CRF(character) test F1 %.4f (need >= 0.80)",
              f_neural, f_char)};
}

Outcome metric_oracles() {
  Rng rng(606);
  int seg_bad = 0;
  std::vector<Segmentation> all_gold, all_pred;
  for (int t = 0; t < 100; ++t) {
    CrfModel m = random_indicator_crf(rng, 8, t % 2 == 1);
    const auto gold = fixtures::random_segmentation(rng, m.vocab.size(), m.vocab, 8, 4);
    std::u32string chars;
    for (const auto& w : gold) chars += w;
    const std::vector<Segmentation> g{gold}, p{segment(m, chars)};
    const auto r = evaluate_segmentation(m, g);
    const auto o = oracle::span_set_counts(g, p);
    seg_bad += r.correct_words != o.correct || r.gold_words != o.gold || r.predicted_words != o.predicted;
    all_gold.push_back(gold);
    all_pred.push_back(p[0]);
  }
  const auto agg = score_segmentation(all_gold, all_pred);
  const auto oagg = oracle::span_set_counts(all_gold, all_pred);
  seg_bad += agg.correct_words != oagg.correct || agg.gold_words != oagg.gold || agg.predicted_words != oagg.predicted;

  int acc_bad = 0;
  const int acc_trials = 50;
  for (int t = 0; t < acc_trials; ++t) {
    const std::size_t n = 20 + rng.below(179);
    std::vector<char32_t> chars;
    for (std::size_t i = 0; i < n; ++i) chars.push_back(static_cast<char32_t>(0x4E00 + i));
    const auto vocab = Vocabulary::from_chars(chars);
    EmbeddingMatrix emb(1 + rng.below(12), vocab.size());
    rng.fill_uniform(emb.flat(), 1.0);
    std::vector<CharIndex> ids(vocab.num_chars());
    std::iota(ids.begin(), ids.end(), 2);
    rng.shuffle(ids);
    std::vector<SimilarityCategory> cats(2 + rng.below(8));
    for (std::size_t g = 0; g < cats.size(); ++g) cats[g].name = "g" + std::to_string(g);
    const std::size_t used = std::min<std::size_t>(n, 10 + rng.below(100));
    for (std::size_t i = 0; i < used; ++i) cats[i % cats.size()].chars += vocab.char_at(ids[i]);
    const auto ds = SimilarityDataset::from_categories(cats);
    const std::size_t k = 1 + rng.below(10);
    acc_bad += category_accuracy(emb, vocab, ds, k).accuracy != oracle::brute_category_accuracy(emb, vocab, ds, k);
  }
  return {seg_bad == 0 && acc_bad == 0,
          fmt("evaluate_segmentation vs span-set oracle: %d/101 disagree (100 pairs + pooled); "
              "category_accuracy vs brute force (|V| <= 200): %d/%d not exactly equal",
              seg_bad, acc_bad, acc_trials)};
}

Outcome determinism(const fs::path& dir) {
  synthetic::RadicalCorpusOptions rs;
  rs.sentences = 300;
  const auto rc = synthetic::make_radical_corpus(rs);
  write_lines(dir / "corpus.txt", rc.corpus);
  write_lines(dir / "radicals.tsv", rc.radicals);
  synthetic::SegmentationCorpusOptions ss;
  ss.sentences = 120;
  const auto sc = synthetic::make_segmentation_corpus(ss);
  write_lines(dir / "seg_train.txt", std::vector<std::string>(sc.segmented.begin(), sc.segmented.begin() + 100));
  write_lines(dir / "seg_dev.txt", std::vector<std::string>(sc.segmented.begin() + 100, sc.segmented.end()));
  write_lines(dir / "seg_radicals.tsv", sc.radicals);

  std::vector<std::string> files;
  auto run_all = [&](const std::string& tag) {
    std::vector<std::string> produced;
    cli::TrainEmbedOptions te;
    te.corpus = (dir / "corpus.txt").string();
    te.radicals = (dir / "radicals.tsv").string();
    te.emb_out = (dir / ("emb_" + tag + ".txt")).string();
    te.config.epochs = 2;
    te.config.seed = 9;
    cli::run_train_embed(te);
    produced.insert(produced.end(), {te.emb_out, te.emb_out + ".ckpt", te.emb_out + ".loss.csv"});
    for (const std::string mode : {"neural", "char", "char+radical"}) {
      cli::TrainSegOptions ts;
      ts.train = (dir / "seg_train.txt").string();
      ts.dev = (dir / "seg_dev.txt").string();
      ts.embeddings = te.emb_out;
      ts.radicals = (dir / "seg_radicals.tsv").string();
      ts.config.mode = parse_emission_mode(mode);
      ts.config.epochs = 2;
      ts.config.hidden = 40;
      ts.config.seed = 3;
      const std::string stem = (dir / ("crf_" + std::to_string(static_cast<int>(ts.config.mode)) + "_" + tag)).string();
      ts.checkpoint = stem + ".bin";
      ts.curve_csv = stem + ".curve.csv";
      std::ostringstream report;
      cli::run_train_seg(ts, report);
      std::ofstream(stem + ".report.txt", std::ios::binary) << report.str();
      produced.insert(produced.end(), {ts.checkpoint, ts.curve_csv, stem + ".report.txt"});
    }
    return produced;
  };
  const auto a = run_all("a");
  const auto b = run_all("b");
  int differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += slurp(a[i]) != slurp(b[i]) || slurp(a[i]).empty();
  return {differ == 0, fmt("train-embed and train-seg (neural, char, char+radical) run twice: %d of %zu "
                           "output files differ",
                           differ, a.size())};
}

Outcome round_trips() {
  Rng rng(8);
  int bies_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    Segmentation words(1 + rng.below(12));
    for (auto& w : words) {
      const auto len = 1 + rng.below(6);
      for (std::uint64_t k = 0; k < len; ++k) w += static_cast<char32_t>(0x4E00 + rng.below(3000));
    }
    bies_bad += bies_to_words(words_to_bies(words)) != words;
  }
  std::vector<char32_t> chars;
  for (std::size_t i = 0; i < 300; ++i) chars.push_back(static_cast<char32_t>(0x4E00 + i));
  const auto vocab = Vocabulary::from_chars(chars);
  EmbeddingMatrix emb(30, vocab.size());
  for (Real& v : emb.flat()) {
    const auto kind = rng.below(10);
    v = kind == 0 ? std::ldexp(rng.uniform(-1, 1), -1060)   // subnormal
        : kind == 1 ? std::ldexp(rng.uniform(-1, 1), 1000)  // huge
                    : rng.uniform(-1, 1);
  }
  std::stringstream io;
  save_embeddings_text(io, vocab, emb);
  const auto back = load_embeddings_text(io);
  std::size_t bits_bad = back.vocab == vocab ? 0 : 1;
  for (std::size_t i = 0; i < emb.flat().size(); ++i)
    bits_bad += std::bit_cast<std::uint64_t>(back.embeddings.flat()[i]) != std::bit_cast<std::uint64_t>(emb.flat()[i]);
  return {bies_bad == 0 && bits_bad == 0,
          fmt("BIES round trip failed on %d/1000 segmentations; embedding text file: %zu of %zu values not "
              "bit-equal after save/load",
              bies_bad, bits_bad, emb.flat().size())};
}

}  // namespace

int main() {
  set_log_level(LogLevel::kQuiet);
  const fs::path dir = fs::temp_directory_path() / ("radembed_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  run(1, "gradient suite", gradients);
  run(2, "lattice oracle suite", lattices);
  run(3, "degenerate-alpha identities", alpha_identities);
  run(4, "radical-benefit trend", radical_trend);
  run(5, "segmentation sanity", segmentation);
  run(6, "metric oracles", metric_oracles);
  run(7, "determinism", [&] { return determinism(dir); });
  run(8, "round trips", round_trips);

  fs::remove_all(dir);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
