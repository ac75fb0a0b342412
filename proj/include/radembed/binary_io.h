#pragma once

// Little-endian primitives for the checkpoint containers. Doubles are written
// as their IEEE-754 bit patterns so a save/load cycle is bit exact.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "radembed/error.h"
#include "radembed/numeric.h"

namespace radembed::binio {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

inline std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw DataError("checkpoint: unexpected end of file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

inline void write_reals(std::ostream& out, std::span<const Real> v) {
  write_u64(out, v.size());
  for (Real x : v) write_f64(out, x);
}

inline void read_reals_into(std::istream& in, std::span<Real> dst) {
  const auto n = read_u64(in);
  if (n != dst.size())
    throw DataError("checkpoint: array has " + std::to_string(n) + " values, expected " +
                    std::to_string(dst.size()));
  for (Real& x : dst) x = read_f64(in);
}

inline Vector read_reals(std::istream& in) {
  const auto n = read_u64(in);
  if (n > (std::uint64_t{1} << 34)) throw DataError("checkpoint: implausible array length");
  Vector v(n);
  for (Real& x : v) x = read_f64(in);
  return v;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  write_u64(out, m.rows());
  write_u64(out, m.cols());
  write_reals(out, m.flat());
}

inline Matrix read_matrix(std::istream& in) {
  const auto rows = read_u64(in);
  const auto cols = read_u64(in);
  Vector data = read_reals(in);
  if (data.size() != rows * cols) throw DataError("checkpoint: matrix shape mismatch");
  return Matrix(rows, cols, std::move(data));
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  const auto n = read_u64(in);
  if (n > (std::uint64_t{1} << 32)) throw DataError("checkpoint: implausible string length");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n)))
    throw DataError("checkpoint: unexpected end of file");
  return s;
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  if (!in.read(got.data(), static_cast<std::streamsize>(got.size())) || got != magic)
    throw DataError("checkpoint: bad magic, expected " + std::string(magic));
}

}  // namespace radembed::binio
