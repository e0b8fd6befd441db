#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "spiral/error.hpp"
#include "spiral/lattice.hpp"

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

// Random unimodular basis: a random rotation-free integer shear composed
// with a real diagonal of determinant 1 and a random orthogonal factor.
Eigen::MatrixXd random_unimodular(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < 6; ++k) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
    const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
    int j = static_cast<int>(rng() % static_cast<unsigned>(n));
    if (j == i) j = (i + 1) % n;
    e(i, j) = small(rng);
    m = e * m;
  }
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = u(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd diag(n);
  double prod = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    diag(i) = std::exp(0.6 * u(rng));
    prod *= diag(i);
  }
  diag(n - 1) = 1.0 / prod;
  return q * diag.asDiagonal() * m;
}

// Oracle: scan every integer vector in [-K, K]^n.
std::set<std::vector<std::int64_t>> brute_box(const Eigen::MatrixXd& B, const Box& box, int K) {
  const int n = static_cast<int>(B.rows());
  std::set<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(static_cast<std::size_t>(n), -K);
  while (true) {
    bool zero = true;
    for (auto x : c) zero = zero && x == 0;
    if (!zero) {
      bool inside = true;
      for (int i = 0; i < n && inside; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += B(i, j) * static_cast<double>(c[static_cast<std::size_t>(j)]);
        inside = s >= box.lo[static_cast<std::size_t>(i)] && s <= box.hi[static_cast<std::size_t>(i)];
      }
      if (inside) out.insert(c);
    }
    int k = 0;
    for (; k < n; ++k) {
      if (c[static_cast<std::size_t>(k)] < K) {
        ++c[static_cast<std::size_t>(k)];
        break;
      }
      c[static_cast<std::size_t>(k)] = -K;
    }
    if (k == n) break;
  }
  return out;
}

// Oracle: literal P/R predicate over an integer scan of Lambda_x points;
// returns (#region ignoring A, #direction in A).
std::pair<std::uint64_t, std::uint64_t> brute_region(const std::vector<double>& x, const RegionSpec& spec, int pmax) {
  RegionSpec bare = spec;
  bare.A.reset();
  std::uint64_t in_A = 0;
  std::uint64_t count = 0;
  const auto qmax = static_cast<int>(std::floor(spec.T));
  for (int q = 1; q <= qmax; ++q) {
    if (x.size() == 1) {
      for (int p = -pmax; p <= pmax; ++p) {
        const double v[] = {q * x[0] - p, static_cast<double>(q)};
        if (region_contains(bare, v) != Membership::Out) ++count;
        if (region_contains(spec, v) == Membership::In) ++in_A;
      }
    } else {
      for (int p0 = -pmax; p0 <= pmax; ++p0)
        for (int p1 = -pmax; p1 <= pmax; ++p1) {
          const double v[] = {q * x[0] - p0, q * x[1] - p1, static_cast<double>(q)};
          if (region_contains(bare, v) != Membership::Out) ++count;
          if (region_contains(spec, v) == Membership::In) ++in_A;
        }
    }
  }
  return {count, in_A};
}

}  // namespace

TEST_CASE("lattice construction") {
  const auto L = Lattice::from_x({0.0});
  CHECK(L.basis() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(L.horospherical());
  const auto half = Lattice::from_x({0.5});
  const std::int64_t a[] = {0, 1}, b[] = {-1, 1};
  CHECK(half.point(a) == Eigen::Vector2d(0.5, 1));
  CHECK(half.point(b) == Eigen::Vector2d(-0.5, 1));
  const auto three = Lattice::from_x({0.3, 0.7});
  const std::int64_t c[] = {0, 0, 1};
  CHECK(three.point(c) == Eigen::Vector3d(0.3, 0.7, 1));
  CHECK(code_of([] { Lattice::from_basis(Eigen::Matrix2d::Identity() * 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("g_flow") {
  CHECK(g_flow(0, 3) == Eigen::MatrixXd::Identity(4, 4));
  const auto g = g_flow(std::log(2.0), 1);
  CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(g_flow(1.7, 3).determinant() - 1.0) < 1e-12);
}

TEST_CASE("region_contains") {
  const auto P = RegionSpec::P(1, 1, 50);
  const double in[] = {0.01, 40}, out[] = {0.1, 40};
  CHECK(region_contains(P, in) == Membership::In);
  CHECK(region_contains(P, out) == Membership::Out);
  const auto R = RegionSpec::R(1, 1, 0.5, 10, Norm::Sup, DirectionSet::sign_set(true, false));
  const double zero[] = {0, 7};
  CHECK(region_contains(R, zero) == Membership::Degenerate);
  const double edge_lo[] = {0.1, 5}, edge_open[] = {0.5, 1};
  CHECK(region_contains(RegionSpec::R(1, 1, 0.5, 10), edge_lo) == Membership::In);
  CHECK(region_contains(P, edge_open) == Membership::Out);
}

TEST_CASE("negation symmetry of the thinning cone") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 2000; ++i) {
    const double v[] = {u(rng), u(rng), u(rng)};
    const double w[] = {-v[0], -v[1], -v[2]};
    CHECK(in_thinning_region(v, 2, 1.5, Norm::Euclidean) == in_thinning_region(w, 2, 1.5, Norm::Euclidean));
    CHECK(in_thinning_region(v, 2, 1.5, Norm::Sup) == in_thinning_region(w, 2, 1.5, Norm::Sup));
  }
}

TEST_CASE("enumerate_in_box examples") {
  const auto Z2 = Lattice::integer(2);
  CHECK(enumerate_in_box(Z2, {{-1.5, -1.5}, {1.5, 1.5}}).size() == 8);
  CHECK(enumerate_in_box(Z2, {{0.2, 0.2}, {0.8, 0.8}}).empty());
  const auto pts = enumerate_in_box(Lattice::from_x({0.5}), {{-0.6, 0.5}, {0.6, 1.5}});
  REQUIRE(pts.size() == 2);
  std::set<double> firsts{pts[0].v(0), pts[1].v(0)};
  CHECK(firsts == std::set<double>{-0.5, 0.5});
  for (const auto& p : pts) CHECK(p.v(1) == 1.0);
}

TEST_CASE("enumerate_in_box is exhaustive against a brute-force scan") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    const Eigen::MatrixXd B = random_unimodular(n, rng);
    Box box;
    for (int i = 0; i < n; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      box.lo.push_back(a);
      box.hi.push_back(b + 0.5);
    }
    // Preimage coordinates are bounded by |B^{-1}|_inf * max|v|.
    const double bound = B.inverse().cwiseAbs().rowwise().sum().maxCoeff() * 3.0;
    const int K = static_cast<int>(std::ceil(bound)) + 1;
    const auto oracle = brute_box(B, box, K);
    std::set<std::vector<std::int64_t>> got;
    for (const auto& p : enumerate_in_box(Lattice::from_basis(B), box)) got.insert(p.coeffs);
    CHECK(got == oracle);
  }
}

TEST_CASE("candidate budget") {
  const auto Z3 = Lattice::integer(3);
  const Box big{{-50, -50, -50}, {50, 50, 50}};
  CHECK(code_of([&] { enumerate_in_box(Z3, big, 1000); }) == ErrorCode::CandidateBudgetExceeded);
  const auto old = default_candidate_budget();
  set_default_candidate_budget(5000);
  CHECK(code_of([&] { count_region(Z3, RegionSpec::P(2, 1, 1e6)); }) == ErrorCode::CandidateBudgetExceeded);
  set_default_candidate_budget(old);
}

TEST_CASE("count_region examples") {
  const auto Z2 = Lattice::integer(2);
  CHECK(count_region(Z2, RegionSpec::P(1, 1, 10)).total == 9);
  const auto withA = count_region(Z2, RegionSpec::P(1, 1, 10, Norm::Sup, DirectionSet::sign_set(true, false)));
  CHECK(withA.total == 9);
  CHECK(withA.in_A == 0);
  CHECK(withA.degenerate == 9);
  // Heights in [0.9, 1] force v2 = 1; the Euclidean unit disc holds five
  // integer v1, the sup-norm unit square nine.
  const auto Z3 = Lattice::integer(3);
  CHECK(count_region(Z3, RegionSpec::R(2, 1, 0.9, 1, Norm::Euclidean)).total == 5);
  CHECK(count_region(Z3, RegionSpec::R(2, 1, 0.9, 1, Norm::Sup)).total == 9);
  CHECK(code_of([&] { count_region(Z3, RegionSpec::R(2, 1, 0.0, 1)); }) == ErrorCode::UnboundedRegion);
}

TEST_CASE("structured and generic counts agree with a literal scan") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int split = 0;  // cases where A genuinely separates the points
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 2;
    std::vector<double> x;
    for (int i = 0; i < d; ++i) x.push_back(u(rng));
    const auto norm = trial % 3 == 0 ? Norm::Euclidean : Norm::Sup;
    const auto A = d == 1 ? DirectionSet::sign_set(true, false) : DirectionSet::cap({1, 0.3}, 1.0);
    const std::vector<RegionSpec> specs{RegionSpec::P(d, 1.3, 60, norm, A), RegionSpec::R(d, 0.8, 0.2, 45, norm, A)};
    for (const auto& spec : specs) {
      INFO("trial " << trial << " kind " << (spec.kind == RegionKind::P ? "P" : "R") << " x0 " << x[0]);
      const auto structured = count_region(Lattice::from_x(x), spec);
      const auto generic = count_region(Lattice::from_basis(Lattice::from_x(x).basis()), spec);
      const auto [total, in_A] = brute_region(x, spec, 70);
      CHECK(structured.total == total);
      CHECK(structured.in_A == in_A);
      split += in_A < total && in_A > 0 ? 1 : 0;
      CHECK(generic.total == structured.total);
      CHECK(generic.in_A == structured.in_A);
      CHECK(structured.in_A + structured.degenerate <= structured.total);
    }
  }
  CHECK(split >= 6);
}


TEST_CASE("shells") {
  const auto Z2 = Lattice::integer(2);
  CHECK(shell_count(Z2, 2, 1, Norm::Sup, std::nullopt).total == 2);
  std::uint64_t sum = 0;
  for (int i = 1; i <= 3; ++i) sum += shell_count(Z2, i, 1, Norm::Sup, std::nullopt).total;
  CHECK(sum == 7);
  CHECK(count_region(Z2, RegionSpec::P(1, 1, 8)).total == 7);

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 1 + trial % 2;
    const auto L = Lattice::from_basis(random_unimodular(d + 1, rng));
    std::uint64_t total = 0;
    for (int i = 1; i <= 7; ++i) total += shell_count(L, i, 1, Norm::Euclidean, std::nullopt).total;
    CHECK(total == count_region(L, RegionSpec::P(d, 1, 128, Norm::Euclidean)).total);
    // g_{-s} Q_i = Q_{i+1} with s = log 2 / d
    const auto shifted = L.transformed(g_flow(std::log(2.0) / d, d));
    for (int i = 1; i <= 5; ++i) {
      CHECK(shell_count(L, i + 1, 1, Norm::Sup, std::nullopt).total ==
            shell_count(shifted, i, 1, Norm::Sup, std::nullopt).total);
    }
  }
}

TEST_CASE("g_t carries R_{eps,T} onto R_{eps,1}") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 1 + trial % 2;
    const auto L = Lattice::from_basis(random_unimodular(d + 1, rng));
    const double t = 1.5;
    const double T = std::exp(d * t);
    const auto before = count_region(L, RegionSpec::R(d, 1, 0.1, T, Norm::Euclidean));
    const auto after = count_region(L.transformed(g_flow(t, d)), RegionSpec::R(d, 1, 0.1, 1, Norm::Euclidean));
    CHECK(before.total == after.total);
  }
  // A needle: Lambda_x with d = 2 pushed to t = 4.
  const std::vector<double> x{0.2718281828, 0.5772156649};
  const double t = 4.0;
  const auto direct = count_region(Lattice::from_x(x), RegionSpec::R(2, 1, 0.5, std::exp(2 * t)));
  const auto flowed = count_region(Lattice::from_x(x).transformed(g_flow(t, 2)), RegionSpec::R(2, 1, 0.5, 1));
  CHECK(direct.total == flowed.total);
  CHECK(direct.total > 0);
}

TEST_CASE("region volumes") {
  CHECK(region_volume(RegionSpec::P(1, 1, 2, Norm::Euclidean)) == doctest::Approx(2 * std::log(2.0)));
  CHECK(region_volume(RegionSpec::R(1, 1, 1 / std::numbers::e, 123, Norm::Sup, DirectionSet::sign_set(true, false))) ==
        doctest::Approx(1.0));
  const auto A = DirectionSet::cap({1, 0}, 0.9);
  CHECK(region_volume(RegionSpec::P(2, 1, 2, Norm::Euclidean, A)) / region_volume(RegionSpec::P(2, 1, 2, Norm::Euclidean)) ==
        doctest::Approx(A.measure()));
  CHECK(code_of([] { region_volume(RegionSpec::R(1, 1, 0, 2)); }) == ErrorCode::UnboundedRegion);

  // Monte Carlo volume oracle over the bounding box.
  std::mt19937_64 rng(37);
  for (const auto& spec : {RegionSpec::P(1, 1, 2, Norm::Euclidean), RegionSpec::R(2, 1.2, 0.3, 1, Norm::Euclidean)}) {
    const Box box = region_bounding_box(spec);
    double box_vol = 1.0;
    for (std::size_t i = 0; i < box.lo.size(); ++i) box_vol *= box.hi[i] - box.lo[i];
    const int M = 200000;
    int hits = 0;
    std::vector<double> v(box.lo.size());
    for (int k = 0; k < M; ++k) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
      }
      hits += region_contains(spec, v) == Membership::In ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / M;
    const double est = p * box_vol;
    CHECK(std::abs(est - region_volume(spec)) <= 4 * box_vol * std::sqrt(p * (1 - p) / M));
  }
}

TEST_CASE("count_approximates examples") {
  const auto fours = CFNumber::constant(4);
  ApproxOptions opt;
  opt.witnesses = true;
  const auto res = count_approximates(fours, 72, opt);
  std::set<std::pair<long, long>> found;
  const double xd = fours.to_double();
  for (const auto& w : res.witnesses) {
    const auto q = static_cast<long>(w[1]);
    found.insert({std::lround(q * xd - w[0]), q});
  }
  for (long n = 1; n <= 3; ++n) {
    const auto c = fours.convergent(n);
    CHECK(found.count({c.p.get_si(), c.q.get_si()}) == 1);
  }

  CHECK(count_approximates(CFNumber::constant(1), 1).total >= 1);
  ApproxOptions both;
  both.A = DirectionSet::sign_set(true, true);
  const auto all = count_approximates(CFNumber::biased(), 5000, both);
  CHECK(all.in_A == all.total);
  CHECK(all.degenerate == 0);
}

TEST_CASE("exact and floating approximates agree") {
  for (const auto& cf : {CFNumber::constant(1), CFNumber::periodic({2, 5, 1}), CFNumber::biased()}) {
    ApproxOptions opt;
    opt.A = DirectionSet::sign_set(true, false);
    const double x[] = {cf.to_double()};
    const auto exact = count_approximates(cf, 20000, opt);
    const auto flt = count_approximates(std::span<const double>(x), 20000, opt);
    CHECK(exact.total == flt.total);
    CHECK(exact.in_A == flt.in_A);
  }
}

TEST_CASE("approximates and P_T differ by the q = 1 solutions") {
  const auto cf = CFNumber::biased();
  const auto approx = count_approximates(cf, 3000);
  const auto region = count_region(Lattice::from_x({cf.to_double()}), RegionSpec::P(1, 1, 3000));
  // q = 1 admits p = 0 and p = 1 since 0 < x < 1.
  CHECK(approx.total == region.total + 2);

  const double x2[] = {0.4142135623730951, 0.7320508075688772};
  ApproxOptions opt;
  const auto a2 = count_approximates(std::span<const double>(x2), 2000, opt);
  const auto r2 = count_region(Lattice::from_x({x2[0], x2[1]}), RegionSpec::P(2, 1, 2000));
  std::uint64_t q1 = 0;
  for (int p0 = -1; p0 <= 2; ++p0)
    for (int p1 = -1; p1 <= 2; ++p1) q1 += std::max(std::abs(x2[0] - p0), std::abs(x2[1] - p1)) < 1 ? 1 : 0;
  CHECK(a2.total == r2.total + q1);
}

TEST_CASE("degenerate approximates") {
  const double x[] = {0.5};
  ApproxOptions opt;
  CHECK(count_approximates(std::span<const double>(x), 10, opt).degenerate > 0);
  opt.A = DirectionSet::sign_set(true, false);
  CHECK(code_of([&] { count_approximates(std::span<const double>(x), 10, opt); }) == ErrorCode::DegenerateRational);
}
