#pragma once

// End-to-end experiments: almost-everywhere equidistribution of approximate
// directions, dyadic shelling, spherical averages, the exact census of the
// biased continued fraction, and the non-minimal diagonal example.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spiral/contfrac.hpp"
#include "spiral/lattice.hpp"
#include "spiral/siegel.hpp"
#include "spiral/sphere.hpp"

namespace spiral {

// ---- uniform random x ------------------------------------------------------

struct Thm1Options {
  int d = 1;
  std::uint64_t num_points = 200;
  std::uint64_t T = 100000;
  std::optional<DirectionSet> A;  // defaults to sign:-1 (d = 1) or hemisphere along e_1
  Norm norm = Norm::Sup;
  double C = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct Thm1Sample {
  std::vector<double> x;
  std::uint64_t total = 0;
  std::uint64_t in_A = 0;
  double ratio = 0.0;
  bool skipped = false;  // q x - p = 0 occurred
};

struct Thm1Report {
  std::vector<Thm1Sample> samples;
  double mean_ratio = 0.0;
  double stddev = 0.0;
  double reference = 0.0;  // measure(A)
  std::uint64_t skipped = 0;

  nlohmann::json to_json() const;
};

DirectionSet default_direction_set(int d);
Thm1Report thm1_experiment(const Thm1Options& options);

// ---- dyadic shelling -------------------------------------------------------

struct BirkhoffStep {
  int N = 0;
  std::uint64_t shell = 0;       // #(Lambda in Q_N)
  std::uint64_t shell_in_A = 0;
  std::uint64_t cumulative = 0;  // sum of shells 1..N
  std::uint64_t cumulative_in_A = 0;
  std::uint64_t direct = 0;      // #(Lambda in P_{2^N}) counted directly
  bool equivariant = true;       // #(Lambda in Q_{N}) == #(g_s Lambda in Q_{N-1})
  double average = 0.0;          // cumulative / N
  double average_in_A = 0.0;
};

struct BirkhoffReport {
  std::vector<BirkhoffStep> steps;
  double reference = 0.0;       // vol(P_2)
  double reference_in_A = 0.0;  // vol(P_{A,2})
  bool additive = true;
  bool equivariant = true;

  nlohmann::json to_json() const;
};

BirkhoffReport birkhoff_experiment(const Lattice& lattice, int N_max, double c, Norm norm,
                                   const std::optional<DirectionSet>& A,
                                   std::uint64_t budget = default_candidate_budget());

// ---- exact census of the biased number --------------------------------------

struct CensusRow {
  int n = 0;
  BigInt r;
  std::int64_t m = 0;
  BigInt q;
  BigInt p;
  bool in_R = false;
  int sign = 0;
};

/// Consecutive multipliers m_first..m_last of class r in window n whose
/// points all lie in R with a common sign.
struct CensusRun {
  int n = 0;
  BigInt r;
  std::int64_t m_first = 0;
  std::int64_t m_last = 0;
  int sign = 0;
};

struct CensusWindow {
  int n = 0;
  BigInt q_first;  // q_n
  BigInt q_last;   // q_{n+1} - 1
  std::vector<BigInt> classes;
  BigInt candidates;
  std::uint64_t in_R = 0;
  std::uint64_t negative = 0;
  /// In-R points m q_n, m >= 1, of the class r = 0.
  std::uint64_t L = 0;
  bool rows_complete = false;
};

struct Census {
  int n_max = 0;
  std::vector<CensusWindow> windows;
  std::vector<CensusRun> runs;
  /// Every candidate for windows with at most `kFullRowLimit` candidates,
  /// only in-R candidates otherwise.
  std::vector<CensusRow> rows;

  static constexpr std::uint64_t kFullRowLimit = 100000;

  /// (#negative, #positive) in-R points with lo <= q <= hi.
  std::pair<BigInt, BigInt> count(const BigInt& lo, const BigInt& hi) const;
  nlohmann::json to_json() const;
  std::string rows_csv() const;
};

/// Census of every point of Lambda_x in the sup-norm region |q x - p| q <= 1,
/// 1 <= q < q_{n_max+1}, for the biased x. n_max <= 9.
Census biased_census(int n_max, bool rows = true);

/// Floor of (n+1)^{(n+1)/2}.
BigInt census_lower_bound(int n);

struct RatioThreshold {
  std::string label;  // "convergent" or "cluster"
  int k = 0;
  BigInt T;
};

/// q_k for 1 <= k <= n_max and q_k * floor(sqrt(a_{k+1})) for odd k <= n_max.
std::vector<RatioThreshold> default_thresholds(int n_max);

struct RatioRow {
  RatioThreshold threshold;
  BigInt total;
  BigInt negative;
  BigInt positive;
  BigInt in_A;
  double ratio = 0.0;  // in_A / total
};

struct BiasedRatioReport {
  std::string eps;  // decimal form
  std::vector<RatioRow> rows;

  nlohmann::json to_json() const;
};

/// Exact N(Lambda_x, A, eps, T) / N(Lambda_x, eps, T) from `census`, over
/// points with max(1, eps T) <= q <= T. eps is read as the shortest decimal
/// that rounds to it (0.1 means 1/10). Throws EmptyDenominator on an empty
/// window.
BiasedRatioReport biased_ratio(const Census& census, const std::vector<RatioThreshold>& thresholds,
                               const DirectionSet& A, double eps);

/// Exact rational from the shortest round-trip decimal form of v.
Rational decimal_rational(double v);

// ---- non-minimal diagonal ---------------------------------------------------

struct NonminimalReport {
  int d = 0;
  double alpha = 0.0;  // nearest double to x_base
  std::uint64_t T = 0;
  std::uint64_t q_min = 0;
  std::uint64_t total = 0;
  std::uint64_t late = 0;         // approximates with q >= q_min
  double max_off_diagonal = 0.0;  // max |u_1 - u_2| over late directions
  double max_axis_distance = 0.0; // d = 2: distance to +-(1,1)/sqrt 2
  std::uint64_t late_in_disjoint_cap = 0;

  nlohmann::json to_json() const;
};

/// x = (alpha, ..., alpha) in R^d; the relation x_1 - x_2 = 0 confines late
/// approximate directions to {u_1 = u_2}. The disjoint cap is centred at
/// (1, -1, 0, ..., 0)/sqrt 2 with angle pi/4.
NonminimalReport nonminimal_experiment(int d, const CFNumber& x_base, std::uint64_t T,
                                       std::uint64_t q_min = 100, Norm norm = Norm::Sup, double C = 1.0);

}  // namespace spiral
