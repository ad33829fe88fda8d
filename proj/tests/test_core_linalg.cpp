#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "bandeig/accuracy.hpp"
#include "bandeig/band_reduction.hpp"
#include "bandeig/matrix_io.hpp"
#include "bandeig/perturb.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace bandeig;
using testutil::random_hermitian;

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

TEST_CASE("DenseHermitian enforces the symmetry invariant") {
  MatrixX<Complex> M(2, 2);
  M << Complex(1, 0), Complex(2, -3), Complex(2, 3), Complex(4, 0);
  DenseHermitian<Complex> A(M);
  CHECK(A.matrix()(0, 1) == std::conj(A.matrix()(1, 0)));

  M(0, 1) = Complex(9, 9);  // clearly not the conjugate
  CHECK_THROWS_AS((void)DenseHermitian<Complex>(M), std::invalid_argument);
}

TEST_CASE("band_reduce leaves an already-banded matrix untouched") {
  auto D0 = testutil::random_banded<double>(20, 3, 5);
  DenseHermitian<double> A = D0.to_dense();
  auto [D, T] = band_reduce(A, 3);
  CHECK(T.panels().empty());
  CHECK((D.bands() - D0.bands()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("band_reduce diagonal fixed point") {
  MatrixX<double> M = MatrixX<double>::Zero(4, 4);
  M.diagonal() << 1, 2, 3, 4;
  auto [D, T] = band_reduce(DenseHermitian<double>(M), 1);
  for (Index i = 0; i < 4; ++i) CHECK(D.band(0, i) == doctest::Approx(i + 1.0));
  CHECK(T.panels().empty());
}

TEST_CASE("band_reduce rejects invalid bandwidth") {
  auto A = random_hermitian<double>(6, 1);
  CHECK_THROWS_AS(band_reduce(A, 6), std::invalid_argument);
  CHECK_THROWS_AS(band_reduce(A, 0), std::invalid_argument);
}

TEST_CASE_TEMPLATE("band_reduce preserves the spectrum", S, double, Complex) {
  auto A = random_hermitian<S>(50, 77);
  auto [D, T] = band_reduce(A, 4);
  auto ref = oracle::jacobi_eig<S>(A.matrix());
  auto got = oracle::jacobi_eig<S>(D.to_dense().matrix());
  const double scale = std::max(std::abs(ref.values(0)), std::abs(ref.values(49)));
  for (Index i = 0; i < 50; ++i)
    CHECK(std::abs(got.values(i) - ref.values(i)) <= 1e-10 * scale);
}

TEST_CASE("band_reduce spectrum preservation across bandwidths") {
  for (Index n : {24, 60}) {
    for (Index n_bw : {1, 4, 16}) {
      if (n_bw >= n) continue;
      auto A = random_hermitian<double>(n, 31 * n + n_bw);
      auto [D, T] = band_reduce(A, n_bw);
      auto ref = oracle::jacobi_eig<double>(A.matrix());
      auto got = oracle::jacobi_eig<double>(D.to_dense().matrix());
      const double scale = std::max(1.0, std::abs(ref.values(n - 1)));
      for (Index i = 0; i < n; ++i)
        CHECK(std::abs(got.values(i) - ref.values(i)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE_TEMPLATE("transform is unitary and reproduces A", S, double, Complex) {
  const Index n = 40;
  auto A = random_hermitian<S>(n, 13);
  auto [D, T] = band_reduce(A, 5);

  MatrixX<S> U = T.materialize();
  MatrixX<S> G = U.adjoint() * U - MatrixX<S>::Identity(n, n);
  CHECK(G.template lpNorm<Eigen::Infinity>() <= 100 * kEps * n);

  // round trip: U^H D U = A
  MatrixX<S> back = U.adjoint() * D.to_dense().matrix() * U;
  const double amax = A.matrix().template lpNorm<Eigen::Infinity>();
  CHECK((back - A.matrix()).template lpNorm<Eigen::Infinity>() <= 100 * kEps * n * amax);
}

TEST_CASE("backtransform identity and unitary invariance") {
  const Index n = 30;
  auto A = random_hermitian<double>(n, 21);
  auto [D, T] = band_reduce(A, 29);  // bandwidth n-1: no panels, identity transform
  REQUIRE(T.panels().empty());

  EigenPairs<double> pairs;
  pairs.values = VectorX<double>::LinSpaced(3, 0, 2);
  pairs.vectors = MatrixX<double>::Identity(n, 3);
  auto out = backtransform(T, pairs);
  CHECK((out.vectors - pairs.vectors).norm() == 0.0);
}

TEST_CASE("backtransform keeps orthonormality and bounds residuals against A") {
  const Index n = 50;
  auto A = random_hermitian<double>(n, 23);
  auto [D, T] = band_reduce(A, 4);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());

  EigenPairs<double> xhat;
  xhat.values = ref.values.head(12);
  xhat.vectors = ref.vectors.leftCols(12);
  auto x = backtransform(T, xhat);

  CHECK(orthogonality<double>(x.vectors, n) <= 1e-12);
  auto rep = accuracy_report(A, x);
  CHECK(rep.max_residual <= 1e-9);
}

TEST_CASE("orthogonality metric") {
  const Index n = 10;
  CHECK(orthogonality<double>(MatrixX<double>::Identity(n, 4), n) == 0.0);

  MatrixX<double> X = MatrixX<double>::Zero(n, 2);
  X(0, 0) = X(0, 1) = 1.0;  // duplicate e1 columns
  CHECK(orthogonality<double>(X, n) == doctest::Approx(1.0 / n));
}

TEST_CASE("matrix market coordinate, real symmetric") {
  const std::string path = "mm_sym.mtx";
  {
    std::ofstream f(path);
    f << "%%MatrixMarket matrix coordinate real symmetric\n"
      << "% comment line\n"
      << "3 3 4\n"
      << "1 1 2.0\n2 2 3.0\n3 3 4.0\n3 1 0.5\n";
  }
  auto any = load_matrix(path);
  REQUIRE(std::holds_alternative<DenseHermitian<double>>(any));
  const auto& A = std::get<DenseHermitian<double>>(any);
  CHECK(A.n() == 3);
  CHECK(A.matrix()(2, 0) == 0.5);
  CHECK(A.matrix()(0, 2) == 0.5);
  std::remove(path.c_str());
}

TEST_CASE("matrix market complex hermitian and general rejection") {
  const std::string path = "mm_herm.mtx";
  {
    std::ofstream f(path);
    f << "%%MatrixMarket matrix coordinate complex hermitian\n"
      << "2 2 2\n"
      << "1 1 1.0 0.0\n2 1 0.5 0.25\n";
  }
  auto any = load_matrix(path);
  REQUIRE(std::holds_alternative<DenseHermitian<Complex>>(any));
  const auto& A = std::get<DenseHermitian<Complex>>(any);
  CHECK(A.matrix()(0, 1) == Complex(0.5, -0.25));
  std::remove(path.c_str());

  {
    std::ofstream f(path);
    f << "%%MatrixMarket matrix coordinate real general\n"
      << "2 2 2\n"
      << "1 2 1.0\n2 1 7.0\n";  // not symmetric
  }
  CHECK_THROWS_AS(load_matrix(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("matrix market parse error carries a line number") {
  const std::string path = "mm_bad.mtx";
  {
    std::ofstream f(path);
    f << "%%MatrixMarket matrix coordinate real symmetric\n"
      << "2 2 1\n"
      << "1 garbage\n";
  }
  try {
    load_matrix(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("matrix market array format, symmetric lower triangle") {
  const std::string path = "mm_arr.mtx";
  {
    std::ofstream f(path);
    f << "%%MatrixMarket matrix array real symmetric\n"
      << "2 2\n"
      << "1.0\n0.5\n2.0\n";
  }
  auto any = load_matrix(path);
  const auto& A = std::get<DenseHermitian<double>>(any);
  CHECK(A.matrix()(1, 0) == 0.5);
  CHECK(A.matrix()(1, 1) == 2.0);
  std::remove(path.c_str());
}

TEST_CASE_TEMPLATE("raw binary round trip", S, double, Complex) {
  const std::string path = "roundtrip.beig";
  auto A = random_hermitian<S>(17, 3);
  save_matrix_raw(path, A);
  auto any = load_matrix(path);  // auto-detected
  const auto& B = std::get<DenseHermitian<S>>(any);
  CHECK((A.matrix() - B.matrix()).template lpNorm<Eigen::Infinity>() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("vector raw binary round trip") {
  const std::string path = "vecs.beig";
  MatrixX<Complex> X = MatrixX<Complex>::Random(9, 4);
  save_vectors_raw(path, X);
  auto any = load_vectors_raw(path);
  const auto& Y = std::get<MatrixX<Complex>>(any);
  CHECK((X - Y).lpNorm<Eigen::Infinity>() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("perturb_sequence basics") {
  auto A = random_hermitian<double>(20, 9);
  auto same = perturb_sequence(A, 0.0, 3, 1);
  for (const auto& B : same)
    CHECK((A.matrix() - B.matrix()).lpNorm<Eigen::Infinity>() == 0.0);

  MatrixX<double> ones = MatrixX<double>::Ones(8, 8);
  auto seq = perturb_sequence(DenseHermitian<double>(ones), 1e-4, 4, 2);
  for (const auto& B : seq) {
    CHECK((B.matrix().array() - 1.0).abs().maxCoeff() <= 1e-4 + 1e-15);
    CHECK((B.matrix() - B.matrix().adjoint()).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("perturbed eigenvalues stay within the Weyl bound") {
  const Index n = 60;
  auto A = random_hermitian<double>(n, 19);
  const double tau = 1e-4;
  auto seq = perturb_sequence(A, tau, 2, 5);
  auto base = oracle::jacobi_eig<double>(seq[0].matrix());
  auto pert = oracle::jacobi_eig<double>(seq[1].matrix());
  // Weyl: |lambda_i(A + E) - lambda_i(A)| <= ||E||_2 <= ||E||_F <= tau*||A||_F
  const double bound = tau * A.frobenius_norm();
  for (Index i = 0; i < n; ++i) CHECK(std::abs(pert.values(i) - base.values(i)) <= bound);
}

TEST_CASE("oracle self-check: residual and orthogonality") {
  auto A = random_hermitian<Complex>(40, 55);
  auto r = oracle::jacobi_eig<Complex>(A.matrix());
  double max_res = 0;
  for (Index j = 0; j < 40; ++j)
    max_res = std::max(max_res,
                       (A.matrix() * r.vectors.col(j) - r.values(j) * r.vectors.col(j)).norm());
  CHECK(max_res <= 1e-12 * std::max(1.0, A.frobenius_norm()));
  CHECK(orthogonality<Complex>(r.vectors, 40) <= 1e-13);
}
