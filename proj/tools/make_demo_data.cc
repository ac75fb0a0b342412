// Writes the synthetic demo files used by the README walkthrough and the
// end-to-end CLI test.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "radembed/synthetic.h"

namespace {

void write_lines(const std::filesystem::path& p, const std::vector<std::string>& lines,
                 std::size_t begin = 0, std::size_t end = std::string::npos) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  end = std::min(end, lines.size());
  for (std::size_t i = begin; i < end; ++i) out << lines[i] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic demo corpora"};
  std::string dir = "data/demo";
  radembed::synthetic::RadicalCorpusOptions rs;
  radembed::synthetic::SegmentationCorpusOptions ss;
  std::uint64_t seed = 1;
  app.add_option("--out-dir", dir, "Output directory")->capture_default_str();
  app.add_option("--sentences", rs.sentences, "Embedding corpus sentences")->capture_default_str();
  app.add_option("--seg-sentences", ss.sentences, "Segmentation sentences (80/10/10 split)")
      ->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  rs.seed = ss.seed = seed;

  try {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    const auto rc = radembed::synthetic::make_radical_corpus(rs);
    write_lines(root / "corpus.txt", rc.corpus);
    write_lines(root / "radicals.tsv", rc.radicals);
    write_lines(root / "simdata.tsv", rc.categories);

    const auto sc = radembed::synthetic::make_segmentation_corpus(ss);
    const std::size_t n = sc.segmented.size(), train_end = n * 8 / 10, dev_end = n * 9 / 10;
    write_lines(root / "seg_train.txt", sc.segmented, 0, train_end);
    write_lines(root / "seg_dev.txt", sc.segmented, train_end, dev_end);
    write_lines(root / "seg_test.txt", sc.segmented, dev_end);
    write_lines(root / "seg_raw.txt", radembed::synthetic::unsegment(sc.segmented), dev_end);
    write_lines(root / "seg_radicals.tsv", sc.radicals);
    write_lines(root / "seg_corpus.txt", radembed::synthetic::unsegment(sc.segmented), 0, train_end);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
