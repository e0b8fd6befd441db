#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "spiral/error.hpp"
#include "spiral/siegel.hpp"

using namespace spiral;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

TestFunction square(double r) { return TestFunction::box({{-r, -r}, {r, r}}); }

}  // namespace

TEST_CASE("box transforms on Z^2") {
  const auto Z2 = Lattice::integer(2);
  CHECK(siegel_transform(square(1.5), Z2) == 8);
  CHECK(siegel_transform(square(1.5), Z2, true) == 8);
  CHECK(siegel_transform(square(2.5), Z2) == 24);
  // Dropped: (+-2, 0), (0, +-2), (+-2, +-2).
  CHECK(siegel_transform(square(2.5), Z2, true) == 16);
  // Closed boxes: the boundary points count.
  CHECK(siegel_transform(square(1.0), Z2) == 8);
  CHECK(square(1.5).integral() == 9.0);
}

TEST_CASE("radial indicator") {
  const auto f = TestFunction::radial(2, 0.5, 1.5);
  // Norms 1 and sqrt(2) both lie in [0.5, 1.5].
  CHECK(siegel_transform(f, Lattice::integer(2)) == 8);
  CHECK(f.integral() == doctest::Approx(std::numbers::pi * 2.0));
  const auto unit = TestFunction::radial(3, 0.0, 1.0);
  CHECK(siegel_transform(unit, Lattice::integer(3)) == 6);

  std::mt19937_64 rng(1);
  const auto g = TestFunction::radial(3, 0.9, 2.3);
  const double base = siegel_transform(g, Lattice::integer(3));
  for (int i = 0; i < 20; ++i) {
    const auto L = Lattice::integer(3).transformed(haar_rotation(3, rng));
    CHECK(siegel_transform(g, L) == base);
  }
}

TEST_CASE("additivity and monotonicity") {
  std::mt19937_64 rng(2);
  const auto f1 = square(1.7);
  const auto f2 = TestFunction::radial(2, 0.3, 2.2);
  const auto f3 = TestFunction::region(RegionSpec::R(1, 1, 0.1, 1, Norm::Euclidean));
  const auto sum = TestFunction::scaled_sum({{2.0, f1}, {-0.5, f2}, {3.0, f3}});
  CHECK(sum.integral() == doctest::Approx(2 * f1.integral() - 0.5 * f2.integral() + 3 * f3.integral()));
  for (int i = 0; i < 20; ++i) {
    const auto L = Lattice::integer(2).transformed(g_flow(0.8, 1) * haar_rotation(2, rng));
    const double s = siegel_transform(sum, L);
    CHECK(s == doctest::Approx(2 * siegel_transform(f1, L) - 0.5 * siegel_transform(f2, L) +
                               3 * siegel_transform(f3, L)));
    CHECK(siegel_transform(square(1.0), L) <= siegel_transform(square(1.7), L));
    CHECK(siegel_transform(square(1.7), L) <= siegel_transform(square(2.4), L));
  }
}

TEST_CASE("region indicator integral") {
  const auto A = DirectionSet::hemisphere({1, 0});
  const auto f = TestFunction::region(RegionSpec::R(2, 1, 0.1, 1, Norm::Euclidean, A));
  CHECK(f.integral() == doctest::Approx(0.5 * std::numbers::pi * std::log(10.0)));
  CHECK(code_of([] { TestFunction::region(RegionSpec::R(1, 1, 0, 1)); }) == ErrorCode::UnboundedRegion);
}

TEST_CASE("Haar rotations") {
  const int M = 10000;
  for (int n : {2, 3, 4}) {
    double mean_first[4] = {0, 0, 0, 0};
    double mean_moved = 0.0, mean_col = 0.0, sq_moved = 0.0, sq_col = 0.0;
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < M; ++i) {
      auto rng = sample_stream(99, static_cast<std::uint64_t>(i));
      const Eigen::MatrixXd k = haar_rotation(n, rng);
      const double resid = (k.transpose() * k - Eigen::MatrixXd::Identity(n, n)).norm();
      REQUIRE(resid <= 1e-10);
      REQUIRE(std::abs(k.determinant() - 1.0) <= 1e-10);
      for (int j = 0; j < n; ++j) mean_first[j] += k(j, 0) / M;
      auto rng2 = sample_stream(100, static_cast<std::uint64_t>(i));
      const Eigen::VectorXd moved = haar_rotation(n, rng2) * u;
      mean_moved += moved(0) / M;
      sq_moved += moved(0) * moved(0) / M;
      mean_col += k(0, 0) / M;
      sq_col += k(0, 0) * k(0, 0) / M;
    }
    for (int j = 0; j < n; ++j) CHECK(std::abs(mean_first[j]) <= 4 / std::sqrt(M));
    CHECK(std::abs(mean_moved - mean_col) <= 4 / std::sqrt(M));
    CHECK(std::abs(sq_moved - sq_col) <= 4 / std::sqrt(M));
    CHECK(sq_col == doctest::Approx(1.0 / n).epsilon(0.05));
  }
}

TEST_CASE("spherical average at t = 0 of a radial function has no variance") {
  const auto est = spherical_average(TestFunction::radial(2, 0.5, 1.5), Lattice::integer(2), 0.0, 50, 4);
  CHECK(est.mean == 8.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.samples == 50);
}

TEST_CASE("determinism across seeds and threads") {
  const auto f = TestFunction::region(RegionSpec::R(1, 1, 0.1, 1, Norm::Euclidean));
  AverageOptions one, three;
  one.trace = three.trace = true;
  three.threads = 3;
  const auto a = spherical_average(f, Lattice::integer(2), 2.0, 60, 7, one);
  const auto b = spherical_average(f, Lattice::integer(2), 2.0, 60, 7, three);
  CHECK(a.trace == b.trace);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const auto c = spherical_average(f, Lattice::integer(2), 2.0, 60, 8, one);
  CHECK(c.trace != a.trace);
}

TEST_CASE("spherical average approaches the integral") {
  const auto f = TestFunction::region(RegionSpec::R(1, 1, 0.1, 1, Norm::Euclidean));
  const auto est = spherical_average(f, Lattice::integer(2), 4.0, 400, 11);
  CHECK(std::abs(est.mean - f.integral()) <= 3 * est.std_error + 0.05 * f.integral());
}

TEST_CASE("paired ratios") {
  const auto Z2 = Lattice::integer(2);
  const auto full = thm3_ratio(Z2, DirectionSet::full(1), 0.1, 2.0, 40, 5);
  CHECK(full.ratio == 1.0);
  CHECK(full.std_error == 0.0);

  const auto Z3 = Lattice::integer(3);
  const auto A = DirectionSet::cap({1, 0.5}, 1.1);
  const auto ra = thm3_ratio(Z3, A, 0.1, 1.5, 60, 9);
  const auto rc = thm3_ratio(Z3, DirectionSet::complement(A), 0.1, 1.5, 60, 9);
  CHECK(ra.ratio + rc.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ra.denominator.trace == rc.denominator.trace);

  const auto half = thm3_ratio(Z2, DirectionSet::sign_set(true, false), 0.1, 4.0, 300, 12);
  CHECK(std::abs(half.ratio - 0.5) <= 4 * half.std_error);
  CHECK(half.numerator.integral_reference == doctest::Approx(std::log(10.0)));

  CHECK(code_of([&] { thm3_ratio(Z2, DirectionSet::full(1), 0.5, 0.0, 5, 1, 1e-7); }) == ErrorCode::DivisionByZero);
}
