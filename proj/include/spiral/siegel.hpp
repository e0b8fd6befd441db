#pragma once

// Siegel transforms, Haar-random rotations and Monte Carlo spherical averages
// of f^(g_t k Lambda) over k in SO(d+1).

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "spiral/lattice.hpp"

namespace spiral {

/// Indicator-type test function on R^n with a known support box and integral.
class TestFunction {
 public:
  /// Indicator of a closed box.
  static TestFunction box(Box box);
  /// Indicator of a bounded thinning region (kind P, or kind R with eps > 0).
  static TestFunction region(RegionSpec spec);
  /// Indicator of r_min <= |v| <= r_max (Euclidean) in R^n.
  static TestFunction radial(int n, double r_min, double r_max);
  static TestFunction scaled_sum(std::vector<std::pair<double, TestFunction>> terms);

  int dimension() const;
  Box support_box() const;
  /// Exact Lebesgue integral.
  double integral() const;
  double operator()(std::span<const double> v) const;
  /// Value at the lattice point with coefficients `coeffs`; boundary cases
  /// (slack below 1e-9) are settled in exact rational arithmetic.
  double at_lattice_point(const Lattice& lattice, std::span<const std::int64_t> coeffs,
                          const Eigen::VectorXd& v) const;

  nlohmann::json to_json() const;

 private:
  struct Node;
  explicit TestFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Sum of f over the nonzero points of Lambda; with `primitive_only`, over
/// points whose integer coordinates have gcd 1.
double siegel_transform(const TestFunction& f, const Lattice& lattice, bool primitive_only = false,
                        std::uint64_t budget = default_candidate_budget());

/// Haar-distributed element of SO(n).
Eigen::MatrixXd haar_rotation(int n, std::mt19937_64& rng);

/// The generator for sample `index` of a run seeded with `seed`.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

struct MCEstimate {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(M).
  double std_error = 0.0;
  std::uint64_t samples = 0;
  double t = 0.0;
  std::uint64_t seed = 0;
  double integral_reference = 0.0;
  std::vector<double> trace;

  nlohmann::json to_json() const;
};

struct AverageOptions {
  std::uint64_t budget = default_candidate_budget();
  /// Worker threads; results do not depend on this.
  int threads = 1;
  bool trace = false;
  bool primitive_only = false;
};

/// (1/M) sum_i f^(g_t k_i Lambda) with independent Haar k_i.
MCEstimate spherical_average(const TestFunction& f, const Lattice& lattice, double t, std::uint64_t M,
                             std::uint64_t seed, const AverageOptions& options = {});

struct RatioEstimate {
  MCEstimate numerator;
  MCEstimate denominator;
  double ratio = 0.0;
  /// Delta-method error of the ratio of means.
  double std_error = 0.0;
  double reference = 0.0;

  nlohmann::json to_json() const;
};

/// Spherical averages of #(g_t k Lambda in R_{A,eps,1}) and
/// #(g_t k Lambda in R_{eps,1}) from common rotations, and their ratio.
/// Throws DivisionByZero when every sample has an empty denominator.
RatioEstimate thm3_ratio(const Lattice& lattice, const DirectionSet& A, double eps, double t,
                         std::uint64_t M, std::uint64_t seed, double c = 1.0,
                         Norm norm = Norm::Euclidean, const AverageOptions& options = {});

}  // namespace spiral
