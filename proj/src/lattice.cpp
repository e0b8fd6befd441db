#include "spiral/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spiral/error.hpp"

namespace spiral {

namespace {

constexpr double kBoundarySlack = 1e-9;

// Admissible heights: lo < v2 (or <=) and v2 <= hi. For R the lower bound is
// the rounded product eps * T, so eps = 0.2, T = 45 gives exactly 9.
struct HeightWindow {
  double lo;
  bool lo_open;
  double hi;
};

HeightWindow window_of(const RegionSpec& spec) {
  if (spec.kind == RegionKind::P) return {1.0, true, spec.T};
  return {spec.eps * spec.T, false, spec.T};
}

// Scalar constraints first, then the direction.
enum class Verdict { Out, InA, NotInA, Degenerate };

Membership to_membership(Verdict v) {
  switch (v) {
    case Verdict::InA: return Membership::In;
    case Verdict::Degenerate: return Membership::Degenerate;
    default: return Membership::Out;
  }
}

struct Shape {
  int d;
  double c;
  Norm norm;
  const std::optional<DirectionSet>* A;
};

bool near(double a, double b) { return std::abs(a - b) <= kBoundarySlack * std::max(1.0, std::abs(b)); }

double norm_of(std::span<const double> v1, Norm norm) {
  double out = 0.0;
  if (norm == Norm::Sup) {
    for (double x : v1) out = std::max(out, std::abs(x));
    return out;
  }
  for (double x : v1) out += x * x;
  return std::sqrt(out);
}

Verdict direction_test(const Shape& s, std::span<const double> v1, bool v1_zero) {
  if (!s.A->has_value()) return Verdict::InA;
  if (v1_zero) return Verdict::Degenerate;
  return (*s.A)->contains(direction(v1)) ? Verdict::InA : Verdict::NotInA;
}

// Exact re-evaluation; doubles are exact dyadic rationals.
Verdict classify_exact(const HeightWindow& w, const Shape& s, const std::vector<Rational>& v) {
  const Rational& v2 = v[static_cast<std::size_t>(s.d)];
  const Rational lo(w.lo);
  if (w.lo_open ? v2 <= lo : v2 < lo) return Verdict::Out;
  if (v2 > Rational(w.hi)) return Verdict::Out;
  if (v2 <= 0) return Verdict::Out;
  const Rational c(s.c);
  bool zero = true;
  if (s.norm == Norm::Sup) {
    Rational m = 0;
    for (int i = 0; i < s.d; ++i) {
      const Rational a = abs(v[static_cast<std::size_t>(i)]);
      if (a > m) m = a;
    }
    zero = m == 0;
    Rational f = v2;
    for (int i = 0; i < s.d; ++i) f *= m;
    if (f > c) return Verdict::Out;
  } else {
    Rational sq = 0;
    for (int i = 0; i < s.d; ++i) sq += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    zero = sq == 0;
    if (s.d % 2 == 0) {
      Rational f = v2;
      for (int i = 0; i < s.d / 2; ++i) f *= sq;
      if (f > c) return Verdict::Out;
    } else {
      Rational f = v2 * v2;
      for (int i = 0; i < s.d; ++i) f *= sq;
      if (f > c * c) return Verdict::Out;
    }
  }
  std::vector<double> v1(static_cast<std::size_t>(s.d));
  for (int i = 0; i < s.d; ++i) v1[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)].get_d();
  return direction_test(s, v1, zero);
}

// Floating evaluation; returns nullopt when too close to a boundary to trust.
std::optional<Verdict> classify_float(const HeightWindow& w, const Shape& s,
                                         std::span<const double> v) {
  const double v2 = v[static_cast<std::size_t>(s.d)];
  const double lo = w.lo;
  if (near(v2, lo) || near(v2, w.hi)) return std::nullopt;
  if (v2 < lo || v2 > w.hi) return Verdict::Out;
  const auto v1 = v.first(static_cast<std::size_t>(s.d));
  const double n = norm_of(v1, s.norm);
  const double f = std::pow(n, s.d) * v2;
  if (near(f, s.c)) return std::nullopt;
  if (f > s.c) return Verdict::Out;
  if (s.A->has_value() && n <= kBoundarySlack) return std::nullopt;
  return direction_test(s, v1, n == 0.0);
}

Verdict classify_point(const HeightWindow& w, const Shape& s, const Eigen::MatrixXd& basis,
                          std::span<const std::int64_t> coeffs, const Eigen::VectorXd& v) {
  if (auto m = classify_float(w, s, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())))) {
    return *m;
  }
  const auto n = static_cast<std::size_t>(basis.rows());
  std::vector<Rational> exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (coeffs[j] == 0) continue;
      exact[i] += Rational(basis(static_cast<long>(i), static_cast<long>(j))) *
                  Rational(BigInt(static_cast<long>(coeffs[j])));
    }
  }
  return classify_exact(w, s, exact);
}

void validate_shape(int d, double c, Norm, const std::optional<DirectionSet>& A) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "region dimension d must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "thinning constant c must be positive");
  if (A && A->dimension() != d) {
    throw Error(ErrorCode::InvalidArgument, "direction set dimension must equal d");
  }
}

Box window_box(const HeightWindow& w, int d, double c) {
  const double lo = w.lo;
  const double r = std::pow(c / lo, 1.0 / d);
  Box box;
  box.lo.assign(static_cast<std::size_t>(d), -r);
  box.hi.assign(static_cast<std::size_t>(d), r);
  box.lo.push_back(lo);
  box.hi.push_back(w.hi);
  return box;
}

void tally(CountResult& out, Verdict m, bool with_A, const Eigen::VectorXd& v, bool keep) {
  if (m == Verdict::Out) return;
  ++out.total;
  if (m == Verdict::Degenerate) {
    ++out.degenerate;
  } else if (with_A && m == Verdict::InA) {
    ++out.in_A;
  }
  if (keep) out.witnesses.emplace_back(v.data(), v.data() + v.size());
}

// Per-q scan for Lambda_x: the points at height q are (q x - p, q).
CountResult count_horospherical(const Lattice& lattice, const HeightWindow& w, const Shape& s,
                                const CountOptions& options) {
  const int d = s.d;
  const auto& x = lattice.x();
  CountResult out;
  const double lo = w.lo;
  auto q = static_cast<std::int64_t>(std::max(1.0, std::floor(lo)));
  const auto q_last = static_cast<std::int64_t>(std::floor(w.hi));
  std::uint64_t visited = 0;
  std::vector<std::int64_t> coeffs(static_cast<std::size_t>(d + 1));
  std::vector<std::int64_t> p_lo(static_cast<std::size_t>(d)), p_hi(static_cast<std::size_t>(d));
  Eigen::VectorXd v(d + 1);
  const bool with_A = s.A->has_value();
  for (; q <= q_last; ++q) {
    const auto qd = static_cast<double>(q);
    const double r = std::pow(s.c / qd, 1.0 / d) * (1.0 + 1e-9) + 1e-12;
    std::uint64_t per_q = 1;
    for (int i = 0; i < d; ++i) {
      const double center = qd * x[static_cast<std::size_t>(i)];
      p_lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil(center - r));
      p_hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(center + r));
      if (p_hi[static_cast<std::size_t>(i)] < p_lo[static_cast<std::size_t>(i)]) per_q = 0;
      else per_q *= static_cast<std::uint64_t>(p_hi[static_cast<std::size_t>(i)] - p_lo[static_cast<std::size_t>(i)] + 1);
    }
    visited += per_q + 1;
    if (visited > options.budget) {
      throw Error(ErrorCode::CandidateBudgetExceeded,
                  "lattice enumeration exceeded the candidate budget of " + std::to_string(options.budget));
    }
    if (per_q == 0) continue;
    std::vector<std::int64_t> p(p_lo);
    while (true) {
      for (int i = 0; i < d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        coeffs[k] = -p[k];
        v(i) = std::fma(qd, x[k], -static_cast<double>(p[k]));
      }
      coeffs[static_cast<std::size_t>(d)] = q;
      v(d) = qd;
      tally(out, classify_point(w, s, lattice.basis(), coeffs, v), with_A, v, options.witnesses);
      int i = 0;
      for (; i < d; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (p[k] < p_hi[k]) {
          ++p[k];
          break;
        }
        p[k] = p_lo[k];
      }
      if (i == d) break;
    }
  }
  return out;
}

CountResult count_window(const Lattice& lattice, const HeightWindow& w, const Shape& s,
                         const CountOptions& options) {
  if (lattice.dimension() != s.d + 1) {
    throw Error(ErrorCode::InvalidArgument, "lattice dimension must be d + 1");
  }
  if (!(w.lo > 0.0)) throw Error(ErrorCode::UnboundedRegion, "region is unbounded (need eps > 0)");
  if (w.hi < w.lo) return {};
  if (lattice.horospherical()) return count_horospherical(lattice, w, s, options);
  CountResult out;
  const bool with_A = s.A->has_value();
  for_each_in_box(lattice, window_box(w, s.d, s.c), options.budget,
                  [&](std::span<const std::int64_t> coeffs, const Eigen::VectorXd& v) {
                    tally(out, classify_point(w, s, lattice.basis(), coeffs, v), with_A, v,
                          options.witnesses);
                  });
  return out;
}

}  // namespace

Lattice Lattice::from_basis(Eigen::MatrixXd basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 2) {
    throw Error(ErrorCode::InvalidArgument, "basis must be a square matrix of size >= 2");
  }
  if (!basis.allFinite()) throw Error(ErrorCode::InvalidArgument, "basis entries must be finite");
  const double det = basis.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "basis is not unimodular (|det| = " + std::to_string(std::abs(det)) + ")");
  }
  return Lattice(std::move(basis), false, {});
}

Lattice Lattice::integer(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "lattice dimension must be >= 2");
  return Lattice(Eigen::MatrixXd::Identity(n, n), false, {});
}

Lattice Lattice::from_x(std::vector<double> x) {
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "x must have at least one coordinate");
  const auto d = static_cast<long>(x.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d + 1, d + 1);
  for (long i = 0; i < d; ++i) {
    if (!std::isfinite(x[static_cast<std::size_t>(i)])) throw Error(ErrorCode::InvalidArgument, "x must be finite");
    h(i, d) = x[static_cast<std::size_t>(i)];
  }
  return Lattice(std::move(h), true, std::move(x));
}

Lattice Lattice::transformed(const Eigen::MatrixXd& m) const {
  if (m.rows() != basis_.rows() || m.cols() != basis_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "transformation size does not match the lattice");
  }
  return from_basis(m * basis_);
}

Eigen::VectorXd Lattice::point(std::span<const std::int64_t> coeffs) const {
  if (static_cast<long>(coeffs.size()) != basis_.cols()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match the lattice");
  }
  Eigen::VectorXd n(basis_.cols());
  for (long j = 0; j < n.size(); ++j) n(j) = static_cast<double>(coeffs[static_cast<std::size_t>(j)]);
  return basis_ * n;
}

std::vector<Rational> Lattice::exact_point(std::span<const std::int64_t> coeffs) const {
  if (static_cast<long>(coeffs.size()) != basis_.cols()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match the lattice");
  }
  const auto n = static_cast<std::size_t>(basis_.rows());
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (coeffs[j] == 0) continue;
      out[i] += Rational(basis_(static_cast<long>(i), static_cast<long>(j))) *
                Rational(BigInt(static_cast<long>(coeffs[j])));
    }
  }
  return out;
}

Eigen::MatrixXd g_flow(double t, int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "g_flow needs d >= 1");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (int i = 0; i < d; ++i) g(i, i) = std::exp(t);
  g(d, d) = std::exp(-d * t);
  return g;
}

RegionSpec RegionSpec::P(int d, double c, double T, Norm norm, std::optional<DirectionSet> A) {
  validate_shape(d, c, norm, A);
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  return {RegionKind::P, d, c, T, 0.0, norm, std::move(A)};
}

RegionSpec RegionSpec::R(int d, double c, double eps, double T, Norm norm, std::optional<DirectionSet> A) {
  validate_shape(d, c, norm, A);
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, 1)");
  return {RegionKind::R, d, c, T, eps, norm, std::move(A)};
}

Membership region_contains(const RegionSpec& spec, std::span<const double> v) {
  if (static_cast<int>(v.size()) != spec.d + 1) {
    throw Error(ErrorCode::InvalidArgument, "vector dimension must be d + 1");
  }
  const HeightWindow w = window_of(spec);
  const double v2 = v[static_cast<std::size_t>(spec.d)];
  if (w.lo_open ? v2 <= w.lo : v2 < w.lo) return Membership::Out;
  if (v2 > w.hi) return Membership::Out;
  if (!in_thinning_region(v, spec.d, spec.c, spec.norm)) return Membership::Out;
  const Shape s{spec.d, spec.c, spec.norm, &spec.A};
  const auto v1 = v.first(static_cast<std::size_t>(spec.d));
  return to_membership(direction_test(s, v1, norm_of(v1, Norm::Sup) == 0.0));
}

bool in_thinning_region(std::span<const double> v, int d, double c, Norm norm) {
  if (static_cast<int>(v.size()) != d + 1) {
    throw Error(ErrorCode::InvalidArgument, "vector dimension must be d + 1");
  }
  const double n = norm_of(v.first(static_cast<std::size_t>(d)), norm);
  return std::pow(n, d) * std::abs(v[static_cast<std::size_t>(d)]) <= c;
}

Membership classify_lattice_point(const RegionSpec& spec, const Lattice& lattice,
                                  std::span<const std::int64_t> coeffs, const Eigen::VectorXd& v) {
  const Shape s{spec.d, spec.c, spec.norm, &spec.A};
  return to_membership(classify_point(window_of(spec), s, lattice.basis(), coeffs, v));
}

CountResult count_region(const Lattice& lattice, const RegionSpec& spec, const CountOptions& options) {
  if (!spec.bounded()) throw Error(ErrorCode::UnboundedRegion, "region R with eps = 0 is unbounded");
  const Shape s{spec.d, spec.c, spec.norm, &spec.A};
  return count_window(lattice, window_of(spec), s, options);
}

CountResult shell_count(const Lattice& lattice, int i, double c, Norm norm,
                        const std::optional<DirectionSet>& A, const CountOptions& options) {
  if (i < 1 || i > 60) throw Error(ErrorCode::InvalidArgument, "shell index must lie in [1, 60]");
  const int d = lattice.dimension() - 1;
  validate_shape(d, c, norm, A);
  const Shape s{d, c, norm, &A};
  const HeightWindow w{std::ldexp(1.0, i - 1), true, std::ldexp(1.0, i)};
  return count_window(lattice, w, s, options);
}

double region_volume(const RegionSpec& spec) {
  const double mu = spec.A ? spec.A->measure() : 1.0;
  const double base = mu * ball_volume(spec.d, 1.0, spec.norm) * spec.c;
  if (spec.kind == RegionKind::P) return spec.T > 1.0 ? base * std::log(spec.T) : 0.0;
  if (!(spec.eps > 0.0)) throw Error(ErrorCode::UnboundedRegion, "region R with eps = 0 has infinite volume");
  return base * std::log(1.0 / spec.eps);
}

Box region_bounding_box(const RegionSpec& spec) {
  if (!spec.bounded()) throw Error(ErrorCode::UnboundedRegion, "region R with eps = 0 is unbounded");
  return window_box(window_of(spec), spec.d, spec.c);
}

}  // namespace spiral
