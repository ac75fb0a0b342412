// Python bindings for the training, evaluation and decoding entry points.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "radembed/commands.h"
#include "radembed/crf.h"
#include "radembed/embed_trainer.h"
#include "radembed/error.h"
#include "radembed/log.h"
#include "radembed/neural_crf.h"
#include "radembed/similarity.h"
#include "radembed/tagging.h"
#include "radembed/text.h"

namespace py = pybind11;
using namespace radembed;

namespace {

// Embeddings as seen from Python: characters plus a (|V|, d) table whose
// first two rows are <PAD> and <UNK>.
struct PyEmbeddings {
  Vocabulary vocab;
  EmbeddingMatrix matrix;
  std::vector<Real> mean_loss;

  std::vector<std::string> tokens() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vocab.size(); ++i) out.push_back(vocab.token(static_cast<CharIndex>(i)));
    return out;
  }

  py::array_t<Real> vectors() const {
    py::array_t<Real> a({matrix.vocab_size(), matrix.dim()});
    auto r = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < matrix.vocab_size(); ++i) {
      auto col = matrix.column(static_cast<CharIndex>(i));
      for (std::size_t k = 0; k < matrix.dim(); ++k) r(i, k) = col[k];
    }
    return a;
  }

  std::vector<std::pair<std::string, Real>> neighbors(const std::string& ch, std::size_t k) const {
    const auto cps = utf8_decode(ch);
    if (cps.size() != 1) throw ConfigError("query must be a single character");
    std::vector<std::pair<std::string, Real>> out;
    for (const auto& n : top_k_neighbors(matrix, vocab, cps[0], k).neighbors)
      out.emplace_back(vocab.token(n.index), n.score);
    return out;
  }
};

struct PySegmenter {
  CrfModel model;
  std::vector<Real> dev_f1;
  std::vector<Real> train_nll;
  std::size_t best_epoch = 0;
};

std::vector<Segmentation> parse_lines(const std::vector<std::string>& lines) { return parse_segmented(lines); }

std::string tags_to_string(const std::vector<Tag>& tags) {
  std::string s;
  for (Tag t : tags) s += tag_letter(t);
  return s;
}

std::vector<Tag> tags_from_string(const std::string& s) {
  std::vector<Tag> tags;
  for (char c : s) {
    switch (c) {
      case 'B': tags.push_back(Tag::kB); break;
      case 'I': tags.push_back(Tag::kI); break;
      case 'E': tags.push_back(Tag::kE); break;
      case 'S': tags.push_back(Tag::kS); break;
      default: throw ConfigError(std::string("unknown tag '") + c + "'");
    }
  }
  return tags;
}

TagLattice make_lattice(py::array_t<Real, py::array::c_style | py::array::forcecast> emissions,
                        py::array_t<Real, py::array::c_style | py::array::forcecast> transition,
                        std::optional<std::vector<Real>> start, std::optional<std::vector<Real>> stop) {
  if (emissions.ndim() != 2 || emissions.shape(1) != static_cast<py::ssize_t>(kNumTags))
    throw ConfigError("emissions must have shape (L, 4)");
  if (emissions.shape(0) == 0) throw ConfigError("emissions must have at least one row");
  if (transition.ndim() != 2 || transition.shape(0) != 4 || transition.shape(1) != 4)
    throw ConfigError("transition must have shape (4, 4)");
  TagLattice lat;
  auto e = emissions.unchecked<2>();
  for (py::ssize_t i = 0; i < emissions.shape(0); ++i) {
    TagScores row{};
    for (std::size_t y = 0; y < kNumTags; ++y) row[y] = e(i, static_cast<py::ssize_t>(y));
    lat.emissions.push_back(row);
  }
  auto t = transition.unchecked<2>();
  for (std::size_t a = 0; a < kNumTags; ++a)
    for (std::size_t b = 0; b < kNumTags; ++b)
      lat.transition(a, b) = t(static_cast<py::ssize_t>(a), static_cast<py::ssize_t>(b));
  auto fill = [](const std::optional<std::vector<Real>>& v, TagScores& dst, const char* name) {
    if (!v) return;
    if (v->size() != kNumTags) throw ConfigError(std::string(name) + " must have 4 entries");
    std::copy(v->begin(), v->end(), dst.begin());
  };
  fill(start, lat.start, "start");
  fill(stop, lat.stop, "stop");
  return lat;
}

py::dict report_dict(const SegEvalReport& r) {
  py::dict d;
  d["precision"] = r.precision;
  d["recall"] = r.recall;
  d["f1"] = r.f1;
  d["gold_words"] = r.gold_words;
  d["predicted_words"] = r.predicted_words;
  d["correct_words"] = r.correct_words;
  return d;
}

}  // namespace

PYBIND11_MODULE(_radembed, m) {
  m.doc() = "Radical-enhanced character embeddings and CRF word segmentation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("set_quiet", [](bool quiet) { set_log_level(quiet ? LogLevel::kQuiet : LogLevel::kWarning); },
        py::arg("quiet") = true);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("lr", &TrainConfig::lr)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("window", &TrainConfig::window)
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("hidden", &TrainConfig::hidden)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("init_scale", &TrainConfig::init_scale)
      .def_readwrite("corruptions", &TrainConfig::corruptions)
      .def("validate", &TrainConfig::validate);

  py::class_<CrfConfig>(m, "CrfConfig")
      .def(py::init<>())
      .def_property(
          "mode", [](const CrfConfig& c) { return to_string(c.mode); },
          [](CrfConfig& c, const std::string& s) { c.mode = parse_emission_mode(s); })
      .def_readwrite("window", &CrfConfig::window)
      .def_readwrite("hidden", &CrfConfig::hidden)
      .def_readwrite("lr", &CrfConfig::lr)
      .def_readwrite("epochs", &CrfConfig::epochs)
      .def_readwrite("seed", &CrfConfig::seed)
      .def_readwrite("finetune_embeddings", &CrfConfig::finetune_embeddings)
      .def_readwrite("constrain_tags", &CrfConfig::constrain_tags)
      .def("validate", &CrfConfig::validate);

  py::class_<PyEmbeddings>(m, "Embeddings")
      .def_property_readonly("tokens", &PyEmbeddings::tokens)
      .def_property_readonly("vectors", &PyEmbeddings::vectors)
      .def_readonly("mean_loss", &PyEmbeddings::mean_loss)
      .def("neighbors", &PyEmbeddings::neighbors, py::arg("char"), py::arg("k") = 10)
      .def("save", [](const PyEmbeddings& e, const std::string& path) {
        save_embeddings_text(path, e.vocab, e.matrix);
      });

  m.def(
      "train_embeddings",
      [](const std::vector<std::string>& corpus, const std::vector<std::string>& radical_lines,
         const TrainConfig& cfg, std::size_t min_count) {
        cfg.validate();
        const RadicalDict radicals = RadicalDict::parse(radical_lines);
        PyEmbeddings out;
        out.vocab = Vocabulary::build(corpus, min_count);
        EmbeddingTrainResult r;
        {
          py::gil_scoped_release release;
          r = train_embeddings(corpus, out.vocab, radicals, cfg);
        }
        out.matrix = std::move(r.model.embeddings);
        out.mean_loss = std::move(r.epoch_mean_loss);
        return out;
      },
      py::arg("corpus"), py::arg("radicals"), py::arg("config") = TrainConfig{}, py::arg("min_count") = 1);

  m.def("load_embeddings", [](const std::string& path) {
    EmbeddingFile f = load_embeddings_text(path);
    return PyEmbeddings{std::move(f.vocab), std::move(f.embeddings), {}};
  });

  m.def(
      "category_accuracy",
      [](const PyEmbeddings& e, const std::vector<std::string>& simdata_lines, std::size_t k) {
        return category_accuracy(e.matrix, e.vocab, SimilarityDataset::parse(simdata_lines), k).accuracy;
      },
      py::arg("embeddings"), py::arg("simdata"), py::arg("k") = 10);

  m.def("words_to_bies", [](const std::string& line) {
    return tags_to_string(words_to_bies(parse_segmented_line(line)).tags);
  });
  m.def("bies_to_words", [](const std::string& text, const std::string& tags) {
    return format_segmented(bies_to_words(sentence_chars(text), tags_from_string(tags)));
  });

  m.def("log_partition",
        [](py::array_t<Real, py::array::c_style | py::array::forcecast> emissions,
           py::array_t<Real, py::array::c_style | py::array::forcecast> transition,
           std::optional<std::vector<Real>> start, std::optional<std::vector<Real>> stop) {
          return log_partition(make_lattice(emissions, transition, start, stop));
        },
        py::arg("emissions"), py::arg("transition"), py::arg("start") = py::none(),
        py::arg("stop") = py::none());
  m.def("viterbi",
        [](py::array_t<Real, py::array::c_style | py::array::forcecast> emissions,
           py::array_t<Real, py::array::c_style | py::array::forcecast> transition,
           std::optional<std::vector<Real>> start, std::optional<std::vector<Real>> stop, bool constrain) {
          return tags_to_string(viterbi_decode(make_lattice(emissions, transition, start, stop), constrain));
        },
        py::arg("emissions"), py::arg("transition"), py::arg("start") = py::none(),
        py::arg("stop") = py::none(), py::arg("constrain") = false);

  m.def(
      "score_segmentation",
      [](const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
        return report_dict(score_segmentation(parse_lines(gold), parse_lines(predicted)));
      },
      py::arg("gold"), py::arg("predicted"));

  py::class_<PySegmenter>(m, "Segmenter")
      .def_readonly("dev_f1", &PySegmenter::dev_f1)
      .def_readonly("train_nll", &PySegmenter::train_nll)
      .def_readonly("best_epoch", &PySegmenter::best_epoch)
      .def_property_readonly("mode", [](const PySegmenter& s) { return to_string(s.model.config.mode); })
      .def("segment",
           [](const PySegmenter& s, const std::string& text) {
             return format_segmented(segment(s.model, sentence_chars(text)));
           })
      .def("evaluate",
           [](const PySegmenter& s, const std::vector<std::string>& gold) {
             return report_dict(evaluate_segmentation(s.model, parse_lines(gold)));
           })
      .def("save", [](const PySegmenter& s, const std::string& path) { save_crf_model(path, s.model); });

  m.def(
      "train_segmenter",
      [](const std::vector<std::string>& train, std::optional<std::vector<std::string>> dev,
         const CrfConfig& cfg, const PyEmbeddings* embeddings,
         std::optional<std::vector<std::string>> radical_lines) {
        cfg.validate();
        const auto train_s = parse_lines(train);
        const auto dev_s = dev ? parse_lines(*dev) : train_s;
        CrfModel init;
        if (cfg.mode == EmissionMode::kNeural) {
          if (!embeddings) throw ConfigError("neural emissions need embeddings");
          init = init_crf_model(cfg, embeddings->vocab, embeddings->matrix);
        } else {
          std::vector<std::string> raw;
          for (const auto& words : train_s) {
            std::u32string chars;
            for (const auto& w : words) chars += w;
            raw.push_back(utf8_encode(chars));
          }
          RadicalDict radicals;
          if (cfg.mode == EmissionMode::kCharRadical) {
            if (!radical_lines) throw ConfigError("char+radical emissions need a radical dictionary");
            radicals = RadicalDict::parse(*radical_lines);
          }
          init = init_crf_model(cfg, Vocabulary::build(raw, 1), EmbeddingMatrix{},
                                cfg.mode == EmissionMode::kCharRadical ? &radicals : nullptr);
        }
        CrfTrainResult r;
        {
          py::gil_scoped_release release;
          r = train_crf(train_s, dev_s, std::move(init));
        }
        return PySegmenter{std::move(r.model), std::move(r.dev_f1), std::move(r.train_nll), r.best_epoch};
      },
      py::arg("train"), py::arg("dev") = py::none(), py::arg("config") = CrfConfig{},
      py::arg("embeddings") = nullptr, py::arg("radicals") = py::none());

  m.def("load_segmenter", [](const std::string& path) {
    PySegmenter s;
    s.model = load_crf_model(path);
    return s;
  });
}
