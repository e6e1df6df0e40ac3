#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include "timeop/operator_matrix.hpp"

namespace timeop {

static_assert(std::endian::native == std::endian::little,
              "binary matrix dumps are defined little-endian");

// CSV export: one row per line, each entry expanded to "re,im", so a row of
// an M x M matrix has 2M comma-separated numbers.
inline void write_matrix_csv(const OperatorMatrix& A, std::ostream& out) {
  for (Eigen::Index r = 0; r < A.dim(); ++r) {
    for (Eigen::Index c = 0; c < A.dim(); ++c) {
      const Complex z = A.entry(r, c);
      if (c) out << ',';
      out << detail::format_double(z.real()) << ','
          << detail::format_double(z.imag());
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const OperatorMatrix& A, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_matrix_csv(A, out);
}

// Binary dump: u32 dim, u32 kind tag, then row-major entries as
// 16-byte (re, im) double pairs, little-endian throughout.
inline void write_matrix_binary(const OperatorMatrix& A,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::uint32_t dim = static_cast<std::uint32_t>(A.dim());
  const std::uint32_t kind = static_cast<std::uint32_t>(A.kind());
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&kind), sizeof kind);
  for (Eigen::Index r = 0; r < A.dim(); ++r)
    for (Eigen::Index c = 0; c < A.dim(); ++c) {
      const Complex z = A.entry(r, c);
      const double re = z.real(), im = z.imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

struct BinaryMatrix {
  std::uint32_t kind_tag;
  DenseMatrix entries;
};

inline BinaryMatrix read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::uint32_t dim = 0, kind = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&kind), sizeof kind);
  if (!in) throw std::runtime_error("truncated matrix dump: " + path);
  BinaryMatrix b;
  b.kind_tag = kind;
  b.entries.resize(dim, dim);
  for (std::uint32_t r = 0; r < dim; ++r)
    for (std::uint32_t c = 0; c < dim; ++c) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof re);
      in.read(reinterpret_cast<char*>(&im), sizeof im);
      b.entries(r, c) = Complex(re, im);
    }
  if (!in) throw std::runtime_error("truncated matrix dump: " + path);
  return b;
}

}  // namespace timeop
