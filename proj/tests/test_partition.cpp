#include "doctest.h"

#include <random>

#include "bandeig/bounds.hpp"
#include "bandeig/feast.hpp"
#include "bandeig/kmeans1d.hpp"
#include "bandeig/validate.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace bandeig;
using testutil::random_banded;

TEST_CASE("kmeans1d splits the symmetric toy case at the midpoint") {
  std::vector<double> values{1, 2, 3, 4, 5, 6};
  auto part = kmeans1d(values, 2);
  REQUIRE(part.k == 2);
  CHECK(part.expected_counts[0] == 3);
  CHECK(part.expected_counts[1] == 3);
  CHECK(part.boundaries[1] == doctest::Approx(3.5));
}

TEST_CASE("kmeans1d separates two obvious clusters") {
  std::vector<double> values{0, 0.1, 0.2, 10, 10.1, 10.2};
  auto part = kmeans1d(values, 2);
  REQUIRE(part.k == 2);
  CHECK(part.boundaries[1] > 0.2);
  CHECK(part.boundaries[1] < 10.0);
  CHECK(part.expected_counts[0] == 3);
  CHECK(part.expected_counts[1] == 3);
}

TEST_CASE("kmeans1d boundaries land in the largest gaps of planted clusters") {
  // 8 planted clusters of 32 values each; inter-cluster gaps dominate
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> jitter(0.0, 0.01);
  std::vector<double> values;
  for (int c = 0; c < 8; ++c)
    for (int i = 0; i < 32; ++i) values.push_back(10.0 * c + jitter(rng));
  std::sort(values.begin(), values.end());

  auto part = kmeans1d(values, 8);
  REQUIRE(part.k == 8);

  // the 7 largest inter-value gaps
  std::vector<std::pair<double, size_t>> gaps;
  for (size_t i = 1; i < values.size(); ++i) gaps.push_back({values[i] - values[i - 1], i});
  std::sort(gaps.rbegin(), gaps.rend());
  for (Index b = 1; b < part.k; ++b) {
    bool in_top_gap = false;
    for (size_t g = 0; g < 7; ++g) {
      const size_t i = gaps[g].second;
      if (part.boundaries[b] > values[i - 1] && part.boundaries[b] < values[i]) in_top_gap = true;
    }
    CHECK(in_top_gap);
  }
}

TEST_CASE("kmeans1d balanced initialization and O(n + k) iterations") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::vector<double> values(1000);
  for (auto& v : values) v = dist(rng);
  std::sort(values.begin(), values.end());

  KMeansStats stats;
  auto part = kmeans1d(values, 16, 100, &stats);
  part.check_invariants();
  CHECK(stats.iterations >= 1);
  for (Index ops : stats.ops_per_iteration)
    CHECK(ops <= 8 * (1000 + 16));  // per-pass work is O(n + k)
}

TEST_CASE("kmeans1d respects the minimum cluster gap") {
  // a tight pair straddling what balanced init would cut
  std::vector<double> values{0.0, 1.0, 2.0, 2.0 + 5e-8, 3.0, 4.0};
  auto part = kmeans1d(values, 2);
  for (Index b = 1; b < part.k; ++b) {
    const double cut = part.boundaries[b];
    CHECK(!(cut > 2.0 && cut < 2.0 + 5e-8));
  }
}

TEST_CASE("kmeans1d merges slices when no adequate gap exists") {
  std::vector<double> values;
  for (int i = 0; i < 12; ++i) values.push_back(1e-9 * i);  // one tight cluster
  auto part = kmeans1d(values, 3);
  CHECK(part.degenerate);
  CHECK(part.k < 3);
}

TEST_CASE("compute_bounds encloses exactly nev eigenvalues") {
  auto D = random_banded<double>(60, 4, 303);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  const Index nev = 20;
  std::vector<double> priors(ref.values.data(), ref.values.data() + nev);

  BoundConfig cfg;
  cfg.nev = nev;
  auto [b0, bk] = compute_bounds(priors, nev, cfg, D);
  CHECK(inertia_robust(D, b0).n_neg == 0);
  CHECK(inertia_robust(D, bk).n_neg >= nev);
  CHECK(b0 < ref.values(0));
  CHECK(bk > ref.values(nev - 1));
}

TEST_CASE("compute_bounds recovers from a boundary placed on an eigenvalue") {
  auto D = testutil::diag_banded<double>({1, 2, 3, 4, 5});
  BoundConfig cfg;
  cfg.alpha = 0.0;  // b_k starts exactly at d_nev = an eigenvalue
  cfg.beta = 0.0;
  cfg.nev = 3;
  std::vector<double> priors{1, 2, 3};
  auto [b0, bk] = compute_bounds(priors, 3, cfg, D);
  CHECK(inertia_robust(D, bk).n_neg >= 3);
  CHECK(inertia_robust(D, b0).n_neg == 0);
}

TEST_CASE("compute_bounds handles negative d_nev") {
  auto D = testutil::diag_banded<double>({-10, -8, -6, -4, -2});
  BoundConfig cfg;
  cfg.nev = 3;
  std::vector<double> priors{-10, -8, -6};
  auto [b0, bk] = compute_bounds(priors, 3, cfg, D);
  CHECK(bk > -6.0);
  CHECK(b0 < -10.0);
  CHECK(inertia_robust(D, bk).n_neg >= 3);
}

TEST_CASE("inertia bisection partition covers the requested window") {
  auto D = random_banded<double>(80, 4, 505);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  const double b0 = ref.values(0) - 0.5;
  const double bk = 0.5 * (ref.values(39) + ref.values(40));
  auto part = inertia_bisection_partition(D, b0, bk, 4);
  part.check_invariants();
  Index total = 0;
  for (Index c : part.expected_counts) total += c;
  CHECK(total == 40);
  // expected counts agree with oracle counts per sub-interval
  for (Index i = 0; i < part.k; ++i) {
    Index count = 0;
    for (Index j = 0; j < 80; ++j)
      if (ref.values(j) >= part.boundaries[i] && ref.values(j) < part.boundaries[i + 1]) ++count;
    CHECK(count == part.expected_counts[i]);
  }
}

namespace {

template <class S>
SliceResult<S> solve_slice(const BandedHermitian<S>& D, const SpectrumPartition& part, Index i,
                           Index m0, Index m_i) {
  SliceSolveConfig<S> cfg;
  cfg.m_i = m_i;
  cfg.m0 = m0;
  cfg.include_upper = (i + 1 == part.k);
  return feast_slice(D, make_contour(part.boundaries[i], part.boundaries[i + 1], 16), cfg);
}

}  // namespace

TEST_CASE("validate_counts accepts complete results without inertia work") {
  auto D = random_banded<double>(50, 3, 606, /*diag_spread=*/0.5);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  const Index nev = 16;
  std::vector<double> priors(ref.values.data(), ref.values.data() + nev);
  auto part = kmeans1d(priors, 2);
  part.boundaries.front() = ref.values(0) - 0.5;
  part.boundaries.back() = 0.5 * (ref.values(nev - 1) + ref.values(nev));

  std::vector<SliceResult<double>> results;
  for (Index i = 0; i < part.k; ++i)
    results.push_back(solve_slice(D, part, i, -1, part.expected_counts[i]));

  auto out = validate_counts<double>(results, nev, D, part, [&](Index, Index, int) {
    FAIL("rerun must not be called when counts are complete");
    return SliceResult<double>{};
  });
  REQUIRE(out.ok);
  CHECK(out.inertia_calls == 0);
  CHECK(out.recovery_rounds == 0);
  CHECK(out.accepted.count() == nev);
}

TEST_CASE("validate_counts recovers a seeded undercount") {
  auto D = random_banded<double>(100, 4, 707, /*diag_spread=*/0.5);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  const Index nev = 30;
  std::vector<double> priors(ref.values.data(), ref.values.data() + nev);
  auto part = kmeans1d(priors, 3);
  part.boundaries.front() = ref.values(0) - 0.5;
  part.boundaries.back() = 0.5 * (ref.values(nev - 1) + ref.values(nev));

  std::vector<SliceResult<double>> results;
  for (Index i = 0; i < part.k; ++i) {
    // starve slice 1: subspace two short of the true count
    const Index m0 = i == 1 ? part.expected_counts[i] - 2 : -1;
    results.push_back(solve_slice(D, part, i, m0, part.expected_counts[i]));
  }
  REQUIRE(results[1].pairs.count() < part.expected_counts[1]);

  auto out = validate_counts<double>(results, nev, D, part, [&](Index i, Index m0, int) {
    return solve_slice(D, part, i, m0, part.expected_counts[i]);
  });
  REQUIRE(out.ok);
  CHECK(out.recovery_rounds >= 1);
  CHECK(out.inertia_calls > 0);
  REQUIRE(out.accepted.count() == nev);
  for (Index i = 0; i < nev; ++i)
    CHECK(std::abs(out.accepted.values(i) - ref.values(i)) <= 1e-9);
}

TEST_CASE("validate_counts truncates overshoot to the smallest nev") {
  auto D = random_banded<double>(40, 3, 808, /*diag_spread=*/0.5);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  const Index nev = 10;
  SpectrumPartition part;
  part.k = 1;
  part.boundaries = {ref.values(0) - 0.5, 0.5 * (ref.values(11) + ref.values(12))};
  part.expected_counts = {12};  // slice deliberately holds nev + 2

  std::vector<SliceResult<double>> results{solve_slice(D, part, 0, -1, 12)};
  REQUIRE(results[0].pairs.count() == 12);
  auto out = validate_counts<double>(results, nev, D, part,
                                     [&](Index, Index, int) { return SliceResult<double>{}; });
  REQUIRE(out.ok);
  REQUIRE(out.accepted.count() == nev);
  for (Index i = 0; i < nev; ++i)
    CHECK(std::abs(out.accepted.values(i) - ref.values(i)) <= 1e-9);
}

TEST_CASE("gap_shift_above places the cold upper bound in a real gap") {
  auto D = random_banded<double>(60, 4, 909);
  auto ref = oracle::jacobi_eig<double>(D.to_dense().matrix());
  auto [glo, ghi] = D.gershgorin_bounds();
  const double pad = 1e-3 * std::max(1.0, ghi - glo);
  const double bk = gap_shift_above(D, 20, glo - pad, ghi + pad);
  CHECK(inertia_robust(D, bk).n_neg >= 20);
  // no eigenvalue within half the cluster gap of the boundary
  for (Index i = 0; i < 60; ++i) CHECK(std::abs(ref.values(i) - bk) >= 0.5 * kClusterGap);
}
