#include "doctest.h"

#include "bandeig/perturb.hpp"
#include "bandeig/pipeline.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace bandeig;
using testutil::random_hermitian;

TEST_CASE("solve_one on diag(1..100) returns coordinate pairs") {
  const Index n = 100;
  MatrixX<double> M = MatrixX<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) M(i, i) = static_cast<double>(i + 1);
  PipelineConfig cfg;
  cfg.nev = 10;
  cfg.k = 2;
  cfg.n_bw = 4;
  cfg.n_b = 8;
  auto r = solve_one(DenseHermitian<double>(M), cfg);
  REQUIRE(r.pairs.count() == 10);
  for (Index i = 0; i < 10; ++i) {
    CHECK(std::abs(r.pairs.values(i) - (i + 1.0)) <= 1e-10);
    // signed unit coordinate vector
    CHECK(std::abs(std::abs(r.pairs.vectors(i, i)) - 1.0) <= 1e-10);
  }
}

TEST_CASE_TEMPLATE("solve_one matches the oracle on random input", S, double, Complex) {
  const Index n = 70;
  auto A = random_hermitian<S>(n, 42);
  PipelineConfig cfg;
  cfg.nev = 24;
  cfg.k = 3;
  cfg.n_bw = 8;
  cfg.n_b = 8;
  auto r = solve_one(A, cfg);
  auto ref = oracle::jacobi_eig<S>(A.matrix());
  REQUIRE(r.pairs.count() == 24);
  const double scale = std::max(std::abs(ref.values(0)), std::abs(ref.values(n - 1)));
  for (Index i = 0; i < 24; ++i)
    CHECK(std::abs(r.pairs.values(i) - ref.values(i)) <= 1e-10 * scale);
  CHECK(r.accuracy.orth <= 1e-12);
  CHECK(r.accuracy.max_residual <= 1e-11);
}

TEST_CASE("full-spectrum solve works") {
  const Index n = 40;
  auto A = random_hermitian<double>(n, 88);
  PipelineConfig cfg;
  cfg.nev = n;
  cfg.k = 2;
  cfg.n_bw = 6;
  cfg.n_b = 8;
  auto r = solve_one(A, cfg);
  auto ref = oracle::jacobi_eig<double>(A.matrix());
  REQUIRE(r.pairs.count() == n);
  const double scale = std::max(std::abs(ref.values(0)), std::abs(ref.values(n - 1)));
  for (Index i = 0; i < n; ++i)
    CHECK(std::abs(r.pairs.values(i) - ref.values(i)) <= 1e-10 * scale);
}

TEST_CASE("warm start from a solved state converges in one pass per slice") {
  const Index n = 60;
  auto A = random_hermitian<double>(n, 17);
  PipelineConfig cfg;
  cfg.nev = 20;
  cfg.k = 2;
  cfg.n_bw = 6;
  cfg.n_b = 8;
  ScfState<double> state;
  auto cold = solve_one(A, cfg, &state);
  auto warm = solve_one(A, cfg, &state);  // identical matrix: exact warm start
  CHECK(warm.warm_started);
  for (Index it : warm.slice_iterations) CHECK(it == 1);
  CHECK(warm.accuracy.max_residual <= 1e-11);
}

TEST_CASE("solve_sequence warm-starts every step after the first") {
  auto A = random_hermitian<double>(50, 23);
  auto steps = perturb_sequence(A, 1e-4, 4, 5);
  PipelineConfig cfg;
  cfg.nev = 16;
  cfg.k = 2;
  cfg.n_bw = 6;
  cfg.n_b = 8;
  auto results = solve_sequence(steps, cfg);
  REQUIRE(results.size() == 4);
  CHECK_FALSE(results[0].warm_started);
  for (size_t s = 1; s < results.size(); ++s) {
    CHECK(results[s].warm_started);
    CHECK(results[s].accuracy.max_residual <= 1e-11);
    auto ref = oracle::jacobi_eig<double>(steps[s].matrix());
    for (Index i = 0; i < 16; ++i)
      CHECK(std::abs(results[s].pairs.values(i) - ref.values(i)) <= 1e-9);
  }
}

TEST_CASE("fixed seed gives bit-identical eigenvalues") {
  auto A = random_hermitian<Complex>(40, 3);
  PipelineConfig cfg;
  cfg.nev = 12;
  cfg.k = 2;
  cfg.n_bw = 5;
  cfg.n_b = 8;
  auto r1 = solve_one(A, cfg);
  auto r2 = solve_one(A, cfg);
  REQUIRE(r1.pairs.count() == r2.pairs.count());
  for (Index i = 0; i < r1.pairs.count(); ++i)
    CHECK(r1.pairs.values(i) == r2.pairs.values(i));  // exact equality
}

TEST_CASE("grid path and no-grid path agree") {
  auto A = random_hermitian<double>(40, 31);
  PipelineConfig cfg;
  cfg.nev = 10;
  cfg.k = 2;
  cfg.n_bw = 5;
  cfg.n_b = 8;
  auto with_grid = solve_one(A, cfg);
  cfg.use_grid = false;
  auto without = solve_one(A, cfg);
  CHECK(without.traffic.phases.empty());
  CHECK(!with_grid.traffic.phases.empty());
  for (Index i = 0; i < 10; ++i)
    CHECK(with_grid.pairs.values(i) == without.pairs.values(i));
}

TEST_CASE("invalid configs are rejected up front") {
  auto A = random_hermitian<double>(10, 1);
  PipelineConfig cfg;
  cfg.nev = 11;  // > n
  CHECK_THROWS_AS(solve_one(A, cfg), std::invalid_argument);
  cfg.nev = 5;
  cfg.k = 0;
  CHECK_THROWS_AS(solve_one(A, cfg), std::invalid_argument);
}
