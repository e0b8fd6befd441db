#pragma once

// Unimodular lattices in R^{d+1}, the thinning regions P_T and R_{eps,T}, the
// diagonal flow g_t, and lattice point counting.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spiral/contfrac.hpp"
#include "spiral/sphere.hpp"

namespace spiral {

/// Default cap on enumeration candidates; SPIRAL_CANDIDATE_BUDGET overrides it.
std::uint64_t default_candidate_budget();
void set_default_candidate_budget(std::uint64_t budget);

class Lattice {
 public:
  /// Columns of `basis` generate the lattice. |det| must be 1 within 1e-9.
  static Lattice from_basis(Eigen::MatrixXd basis);
  /// Z^n.
  static Lattice integer(int n);
  /// Lambda_x = h_x Z^{d+1} with h_x = [[Id_d, x], [0, 1]].
  static Lattice from_x(std::vector<double> x);

  int dimension() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  bool horospherical() const { return horospherical_; }
  /// The x of a horospherical lattice (empty otherwise).
  const std::vector<double>& x() const { return x_; }

  /// The lattice m * Lambda; the result is generic even if m is the identity.
  Lattice transformed(const Eigen::MatrixXd& m) const;
  Eigen::VectorXd point(std::span<const std::int64_t> coeffs) const;
  /// B n in exact rationals, reading the basis entries as exact dyadics.
  std::vector<Rational> exact_point(std::span<const std::int64_t> coeffs) const;

 private:
  Lattice(Eigen::MatrixXd basis, bool horospherical, std::vector<double> x)
      : basis_(std::move(basis)), horospherical_(horospherical), x_(std::move(x)) {}

  Eigen::MatrixXd basis_;
  bool horospherical_ = false;
  std::vector<double> x_;
};

/// diag(e^t Id_d, e^{-dt}).
Eigen::MatrixXd g_flow(double t, int d);

/// Closed axis-aligned box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct LatticePoint {
  std::vector<std::int64_t> coeffs;
  Eigen::VectorXd v;
};

/// Every nonzero lattice point B n inside `box`. The box is widened by a
/// relative margin of 1e-9 so callers can apply exact predicates on the
/// boundary. Throws CandidateBudgetExceeded when the number of visited
/// integer candidates exceeds `budget`.
std::vector<LatticePoint> enumerate_in_box(const Lattice& lattice, const Box& box,
                                           std::uint64_t budget = default_candidate_budget());

/// Same enumeration, streaming each point to `visit`. Returns the number of
/// candidates visited.
std::uint64_t for_each_in_box(
    const Lattice& lattice, const Box& box, std::uint64_t budget,
    const std::function<void(std::span<const std::int64_t>, const Eigen::VectorXd&)>& visit);

enum class RegionKind { P, R };

/// P: |v1|^d v2 <= c and 1 < v2 <= T.
/// R: |v1|^d v2 <= c and eps T <= v2 <= T.
/// With A present, additionally v1 != 0 and v1/|v1| in A.
struct RegionSpec {
  RegionKind kind = RegionKind::P;
  int d = 1;
  double c = 1.0;
  double T = 1.0;
  double eps = 0.0;
  Norm norm = Norm::Sup;
  std::optional<DirectionSet> A;

  static RegionSpec P(int d, double c, double T, Norm norm = Norm::Sup,
                      std::optional<DirectionSet> A = std::nullopt);
  static RegionSpec R(int d, double c, double eps, double T, Norm norm = Norm::Sup,
                      std::optional<DirectionSet> A = std::nullopt);

  bool bounded() const { return kind == RegionKind::P || eps > 0.0; }
};

enum class Membership { In, Out, Degenerate };

/// `degenerate` means v passes the scalar constraints, A is present, and
/// v1 = 0 so no direction exists.
Membership region_contains(const RegionSpec& spec, std::span<const double> v);

/// The unbounded cone |v1|^d |v2| <= c.
bool in_thinning_region(std::span<const double> v, int d, double c, Norm norm);

struct CountResult {
  std::uint64_t total = 0;
  std::uint64_t in_A = 0;
  std::uint64_t degenerate = 0;
  /// Points found, when requested (components of v).
  std::vector<std::vector<double>> witnesses;
};

struct CountOptions {
  std::uint64_t budget = default_candidate_budget();
  bool witnesses = false;
};

/// #(Lambda cap region). Degenerate points count towards `total` only.
CountResult count_region(const Lattice& lattice, const RegionSpec& spec,
                         const CountOptions& options = {});

/// Lambda cap Q_i with Q_i = P_{2^i} \ P_{2^{i-1}}, i >= 1.
CountResult shell_count(const Lattice& lattice, int i, double c, Norm norm,
                        const std::optional<DirectionSet>& A, const CountOptions& options = {});

struct ApproxOptions {
  Norm norm = Norm::Sup;
  double C = 1.0;
  std::optional<DirectionSet> A;
  bool witnesses = false;
};

/// Pairs (p, q), 0 < q <= T, with |q x - p| < C q^{-1/d}. Exact for a
/// continued fraction input (d = 1). Throws DegenerateRational when q x - p = 0
/// occurs while A is present.
CountResult count_approximates(const CFNumber& x, std::uint64_t T, const ApproxOptions& options = {});
CountResult count_approximates(std::span<const double> x, std::uint64_t T,
                               const ApproxOptions& options = {});

/// Lebesgue volume. Kind R: mu(A) vol(B^d) c ln(1/eps), independent of T.
/// Kind P: mu(A) vol(B^d) c ln T. Throws UnboundedRegion for kind R, eps = 0.
double region_volume(const RegionSpec& spec);

/// Bounding box of a bounded region.
Box region_bounding_box(const RegionSpec& spec);

/// Region membership of the lattice point with coefficients `coeffs`,
/// re-evaluated in exact rational arithmetic when the floating evaluation
/// lies within 1e-9 of a constraint boundary.
Membership classify_lattice_point(const RegionSpec& spec, const Lattice& lattice,
                                  std::span<const std::int64_t> coeffs, const Eigen::VectorXd& v);

}  // namespace spiral
