#include "bandeig/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace bandeig {

namespace {

constexpr char kMatrixMagic[8] = {'B', 'E', 'I', 'G', '0', '0', '0', '1'};
constexpr char kVectorMagic[8] = {'B', 'E', 'I', 'G', 'V', 'E', 'C', '1'};

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

template <class S>
AnyHermitian finish(MatrixX<S> M, bool declared_symmetric, const std::string& path) {
  if (!declared_symmetric) {
    const double tol = 1e-12 * (1.0 + M.template lpNorm<Eigen::Infinity>());
    if ((M - M.adjoint().eval()).template lpNorm<Eigen::Infinity>() > tol)
      throw ParseError(path + ": matrix declared general and is not Hermitian");
  }
  return DenseHermitian<S>(std::move(M), /*check=*/false);
}

AnyHermitian load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  int lineno = 1;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string banner, object, fmt, field, symmetry;
  hs >> banner >> object >> fmt >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(path, lineno, "not a MatrixMarket matrix file");
  fmt = lower(fmt);
  field = lower(field);
  symmetry = lower(symmetry);
  const bool coordinate = fmt == "coordinate";
  if (!coordinate && fmt != "array") fail(path, lineno, "unsupported format '" + fmt + "'");
  const bool complex_field = field == "complex";
  if (!complex_field && field != "real" && field != "integer")
    fail(path, lineno, "unsupported field '" + field + "'");
  bool symmetric = symmetry == "symmetric" || symmetry == "hermitian";
  if (!symmetric && symmetry != "general")
    fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

  std::string line;
  auto next_data_line = [&]() -> std::istringstream {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '%') continue;
      return std::istringstream(line);
    }
    fail(path, lineno, "unexpected end of file");
  };

  auto sizes = next_data_line();
  std::int64_t rows = 0, cols = 0, nnz = 0;
  if (coordinate) {
    if (!(sizes >> rows >> cols >> nnz)) fail(path, lineno, "bad size line");
  } else {
    if (!(sizes >> rows >> cols)) fail(path, lineno, "bad size line");
  }
  if (rows != cols) throw ParseError(path + ": matrix is not square");
  if (rows < 1) fail(path, lineno, "empty matrix");

  auto run = [&]<class S>(S) -> AnyHermitian {
    MatrixX<S> M = MatrixX<S>::Zero(rows, cols);
    if (coordinate) {
      for (std::int64_t k = 0; k < nnz; ++k) {
        auto ls = next_data_line();
        std::int64_t i, j;
        double re, im = 0;
        if (!(ls >> i >> j >> re)) fail(path, lineno, "bad coordinate entry");
        if (complex_field && !(ls >> im)) fail(path, lineno, "missing imaginary part");
        if (i < 1 || i > rows || j < 1 || j > cols) fail(path, lineno, "index out of range");
        S v;
        if constexpr (is_complex_v<S>)
          v = S(re, im);
        else
          v = re;
        M(i - 1, j - 1) = v;
        if (symmetric && i != j) M(j - 1, i - 1) = scalar_traits<S>::conj(v);
      }
    } else {
      // array format: column-major; symmetric files store the lower triangle
      for (std::int64_t j = 0; j < cols; ++j) {
        for (std::int64_t i = symmetric ? j : 0; i < rows; ++i) {
          auto ls = next_data_line();
          double re, im = 0;
          if (!(ls >> re)) fail(path, lineno, "bad array entry");
          if (complex_field && !(ls >> im)) fail(path, lineno, "missing imaginary part");
          S v;
          if constexpr (is_complex_v<S>)
            v = S(re, im);
          else
            v = re;
          M(i, j) = v;
          if (symmetric && i != j) M(j, i) = scalar_traits<S>::conj(v);
        }
      }
    }
    return finish(std::move(M), symmetric, path);
  };

  if (complex_field) return run(Complex{});
  return run(double{});
}

AnyHermitian load_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  char magic[8];
  std::uint64_t n = 0;
  std::uint32_t flag = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&flag), 4);
  if (!in || std::memcmp(magic, kMatrixMagic, 8) != 0)
    throw ParseError(path + ": bad raw-binary header");
  if (n < 1) throw ParseError(path + ": empty matrix");
  const std::uint64_t count = n * n * (flag ? 2 : 1);
  std::vector<double> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * 8));
  if (!in) throw ParseError(path + ": truncated raw-binary payload");
  if (flag) {
    MatrixX<Complex> M(n, n);
    std::memcpy(M.data(), buf.data(), count * 8);
    return finish(std::move(M), false, path);
  }
  MatrixX<double> M(n, n);
  std::memcpy(M.data(), buf.data(), count * 8);
  return finish(std::move(M), false, path);
}

template <class S>
void write_block(const std::string& path, const char* magic, std::uint64_t rows,
                 std::uint64_t cols, bool square, const MatrixX<S>& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  const std::uint32_t flag = is_complex_v<S> ? 1 : 0;
  out.write(magic, 8);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  if (!square) out.write(reinterpret_cast<const char*>(&cols), 8);
  out.write(reinterpret_cast<const char*>(&flag), 4);
  out.write(reinterpret_cast<const char*>(M.data()),
            static_cast<std::streamsize>(sizeof(S) * M.size()));
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace

AnyHermitian load_matrix(const std::string& path, MatrixFormat format) {
  if (format == MatrixFormat::auto_detect) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ParseError(path + ": cannot open file");
    char magic[8] = {};
    probe.read(magic, 8);
    format = std::memcmp(magic, kMatrixMagic, 8) == 0 ? MatrixFormat::raw_binary
                                                      : MatrixFormat::matrix_market;
  }
  return format == MatrixFormat::raw_binary ? load_raw(path) : load_matrix_market(path);
}

void save_matrix_raw(const std::string& path, const DenseHermitian<double>& A) {
  write_block(path, kMatrixMagic, A.n(), A.n(), true, A.matrix());
}
void save_matrix_raw(const std::string& path, const DenseHermitian<Complex>& A) {
  write_block(path, kMatrixMagic, A.n(), A.n(), true, A.matrix());
}
void save_vectors_raw(const std::string& path, const MatrixX<double>& X) {
  write_block(path, kVectorMagic, X.rows(), X.cols(), false, X);
}
void save_vectors_raw(const std::string& path, const MatrixX<Complex>& X) {
  write_block(path, kVectorMagic, X.rows(), X.cols(), false, X);
}

AnyVectors load_vectors_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  char magic[8];
  std::uint64_t rows = 0, cols = 0;
  std::uint32_t flag = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  in.read(reinterpret_cast<char*>(&flag), 4);
  if (!in || std::memcmp(magic, kVectorMagic, 8) != 0)
    throw ParseError(path + ": bad raw-binary vector header");
  const std::uint64_t count = rows * cols * (flag ? 2 : 1);
  std::vector<double> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * 8));
  if (!in) throw ParseError(path + ": truncated raw-binary payload");
  if (flag) {
    MatrixX<Complex> X(rows, cols);
    std::memcpy(X.data(), buf.data(), count * 8);
    return X;
  }
  MatrixX<double> X(rows, cols);
  std::memcpy(X.data(), buf.data(), count * 8);
  return X;
}

}  // namespace bandeig
