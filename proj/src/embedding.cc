#include "radembed/embedding.h"

#include <charconv>
#include <fstream>
#include <ostream>
#include <system_error>

#include "radembed/error.h"
#include "radembed/text.h"

namespace radembed {

std::size_t EmbeddingMatrix::offset(CharIndex c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= vocab_size_)
    throw ConfigError("embedding lookup: index " + std::to_string(c) + " out of range [0, " +
                      std::to_string(vocab_size_) + ")");
  return static_cast<std::size_t>(c) * dim_;
}

void save_embeddings_text(std::ostream& out, const Vocabulary& vocab, const EmbeddingMatrix& emb) {
  if (vocab.size() != emb.vocab_size())
    throw ConfigError("save_embeddings_text: vocabulary and embedding sizes differ");
  out << emb.vocab_size() << ' ' << emb.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto idx = static_cast<CharIndex>(i);
    out << vocab.token(idx);
    for (Real v : emb.column(idx)) {
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

void save_embeddings_text(const std::string& path, const Vocabulary& vocab,
                          const EmbeddingMatrix& emb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_embeddings_text(out, vocab, emb);
  if (!out) throw DataError("write failed: " + path);
}

namespace {

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError("embedding file: bad integer '" + std::string(s) + "'", line);
  return v;
}

}  // namespace

EmbeddingFile load_embeddings_text(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw DataError("embedding file: missing header");
  const auto header = split_spaces(lines[0]);
  if (header.size() != 2) throw DataError("embedding file: header must be '|V| d'", 1);
  const std::size_t n = parse_count(header[0], 1);
  const std::size_t dim = parse_count(header[1], 1);
  if (lines.size() < n + 1) throw DataError("embedding file: fewer rows than the header declares");
  if (n < 2) throw DataError("embedding file: needs <PAD> and <UNK> rows", 1);

  std::vector<char32_t> chars;
  EmbeddingMatrix emb(dim, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ln = i + 2;
    const auto fields = split_spaces(lines[i + 1]);
    if (fields.size() != dim + 1)
      throw DataError("embedding file: expected token and " + std::to_string(dim) + " values", ln);
    if (i == 0 && fields[0] != Vocabulary::kPadToken)
      throw DataError("embedding file: first row must be <PAD>", ln);
    if (i == 1 && fields[0] != Vocabulary::kUnkToken)
      throw DataError("embedding file: second row must be <UNK>", ln);
    if (i >= 2) {
      std::u32string cps;
      try {
        cps = utf8_decode(fields[0]);
      } catch (const DataError& e) {
        throw DataError(e.what(), ln);
      }
      if (cps.size() != 1) throw DataError("embedding file: token must be one character", ln);
      chars.push_back(cps[0]);
    }
    auto col = emb.column(static_cast<CharIndex>(i));
    for (std::size_t k = 0; k < dim; ++k) {
      std::string_view f = fields[k + 1];
      auto res = std::from_chars(f.data(), f.data() + f.size(), col[k]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw DataError("embedding file: bad number '" + std::string(f) + "'", ln);
    }
  }
  for (std::size_t i = n + 1; i < lines.size(); ++i)
    if (!lines[i].empty()) throw DataError("embedding file: more rows than the header declares", i + 1);
  EmbeddingFile out{Vocabulary::from_chars(chars), std::move(emb)};
  return out;
}

EmbeddingFile load_embeddings_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load_embeddings_text(in);
}

}  // namespace radembed
