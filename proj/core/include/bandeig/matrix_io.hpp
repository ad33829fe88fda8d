#pragma once

#include <string>
#include <variant>

#include "bandeig/dense_hermitian.hpp"
#include "bandeig/scalar.hpp"

namespace bandeig {

enum class MatrixFormat { auto_detect, matrix_market, raw_binary };

using AnyHermitian = std::variant<DenseHermitian<double>, DenseHermitian<Complex>>;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a symmetric/Hermitian matrix. Matrix Market coordinate and array
/// files (real symmetric, complex hermitian, or general with a symmetry
/// check) are densified; raw binary is the little-endian header format
/// produced by save_matrix_raw.
AnyHermitian load_matrix(const std::string& path,
                         MatrixFormat format = MatrixFormat::auto_detect);

/// Raw binary: magic "BEIG0001", u64 n, u32 flag (0 real / 1 complex),
/// column-major doubles.
void save_matrix_raw(const std::string& path, const DenseHermitian<double>& A);
void save_matrix_raw(const std::string& path, const DenseHermitian<Complex>& A);

/// Rectangular raw block (eigenvector output): magic "BEIGVEC1", u64 rows,
/// u64 cols, u32 flag, column-major doubles.
void save_vectors_raw(const std::string& path, const MatrixX<double>& X);
void save_vectors_raw(const std::string& path, const MatrixX<Complex>& X);

using AnyVectors = std::variant<MatrixX<double>, MatrixX<Complex>>;
AnyVectors load_vectors_raw(const std::string& path);

}  // namespace bandeig
