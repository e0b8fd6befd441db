// The acceptance suite. Each criterion checks the library against an oracle
// computed along a separate path: explicit matrix products for continued
// fractions, direct per-q tests for the census, closed-form volumes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "spiral/error.hpp"
#include "spiral/experiments.hpp"
#include "spiral/run.hpp"

namespace spiral {

namespace {

// [lo, hi] containing x, from the first `terms` elements multiplied out.
struct Bracket {
  Rational lo, hi;
};

Bracket bracket(const CFNumber& cf, int terms) {
  BigInt p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  for (int n = 1; n <= terms; ++n) {
    const BigInt a = cf.element(static_cast<std::size_t>(n));
    BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  Rational a(p0, q0), b(p1, q1);
  a.canonicalize();
  b.canonicalize();
  return a < b ? Bracket{a, b} : Bracket{b, a};
}

// q x - p over the bracket; the sign of q is positive.
Bracket linear(const Bracket& x, const BigInt& q, const BigInt& p) {
  return {Rational(q) * x.lo - Rational(p), Rational(q) * x.hi - Rational(p)};
}

// Distance from q x to the nearest integer, as an interval.
Bracket distance(const Bracket& x, const BigInt& q) {
  const Rational mid = (x.lo + x.hi) / 2 * Rational(q);
  BigInt p;
  mpz_fdiv_q(p.get_mpz_t(), mid.get_num_mpz_t(), mid.get_den_mpz_t());
  Bracket lo = linear(x, q, p), hi = linear(x, q, p + 1);
  const Bracket a{abs(lo.lo) < abs(lo.hi) ? abs(lo.lo) : abs(lo.hi), abs(lo.lo) < abs(lo.hi) ? abs(lo.hi) : abs(lo.lo)};
  const Bracket b{abs(hi.lo) < abs(hi.hi) ? abs(hi.lo) : abs(hi.hi), abs(hi.lo) < abs(hi.hi) ? abs(hi.hi) : abs(hi.lo)};
  return a.hi < b.lo ? a : b;
}

int sign_of(const Bracket& b) {
  if (b.lo > 0) return 1;
  if (b.hi < 0) return -1;
  return 0;
}

struct Check {
  bool ok = true;
  std::vector<std::string> failures;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (failures.size() < 10) failures.push_back(what);
    }
  }
};

nlohmann::json finish(const Check& c, nlohmann::json detail) {
  if (!c.failures.empty()) detail["failures"] = c.failures;
  return detail;
}

BigInt pow_self(unsigned long n) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), n, n);
  return out;
}

// ---- criterion 1 ----
CriterionResult cf_identities() {
  CriterionResult r{1, "continued-fraction identities", false, {}, 0, 1.0};
  const auto cf = CFNumber::biased();
  const Bracket x = bracket(cf, 30);
  Check c;
  int checked = 0;
  for (long n = 0; n <= 12; ++n) {
    const auto cur = cf.convergent(n), prev = cf.convergent(n - 1), next = cf.convergent(n + 1);
    const auto tag = " at n = " + std::to_string(n);
    if (n >= 1) {
      const auto prev2 = cf.convergent(n - 2);
      const BigInt a = cf.element(static_cast<std::size_t>(n));
      c.expect(cur.p == a * prev.p + prev2.p, "p recurrence" + tag);
      c.expect(cur.q == a * prev.q + prev2.q, "q recurrence" + tag);
    }
    c.expect(cur.q * prev.p - cur.p * prev.q == (n % 2 == 0 ? 1 : -1), "determinant" + tag);
    const Bracket err = linear(x, cur.q, cur.p);
    const int s = sign_of(err);
    c.expect(s == (n % 2 == 0 ? 1 : -1), "sign alternation" + tag);
    c.expect(rotation_value(cf, cur.q).sign == s, "library sign" + tag);
    const Rational lo_mag = s > 0 ? err.lo : -err.hi, hi_mag = s > 0 ? err.hi : -err.lo;
    c.expect(lo_mag > Rational(1, cur.q + next.q), "distance lower bound" + tag);
    c.expect(hi_mag < Rational(1, next.q), "distance upper bound" + tag);
    ++checked;
  }
  r.passed = c.ok;
  r.detail = finish(c, {{"indices", checked}});
  return r;
}

// ---- criterion 2 ----
CriterionResult ratio_corollary() {
  CriterionResult r{2, "error ratio enclosures", false, {}, 0, 1.0};
  const auto cf = CFNumber::biased();
  const Bracket x = bracket(cf, 30);
  Check c;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto e = error_ratio_bounds(cf, n);
    Rational lo, hi;
    if (n % 2 == 0) {
      lo = 2;
      hi = 6;
    } else {
      const BigInt big = pow_self(n + 1);
      lo = Rational(big, 2);
      hi = Rational(big + 2);
    }
    const auto tag = " at n = " + std::to_string(n);
    c.expect(e.lo > lo && e.hi < hi, "enclosure outside the corollary interval" + tag);
    // Independent value of the ratio from the bracket.
    const Bracket num = distance(x, cf.convergent(static_cast<long>(n) - 1).q);
    const Bracket den = distance(x, cf.convergent(static_cast<long>(n)).q);
    const Rational olo = num.lo / den.hi, ohi = num.hi / den.lo;
    c.expect(olo <= e.hi && e.lo <= ohi, "enclosure misses the oracle ratio" + tag);
    rows.push_back({{"n", n}, {"lo", e.lo.get_d()}, {"hi", e.hi.get_d()}});
  }
  r.passed = c.ok;
  r.detail = finish(c, {{"enclosures", rows}});
  return r;
}

// ---- criterion 3 ----
CriterionResult best_approximation() {
  CriterionResult r{3, "best approximation below q_5", false, {}, 0, 10.0};
  Check c;
  nlohmann::json rows = nlohmann::json::array();
  const std::vector<std::pair<std::string, CFNumber>> numbers = {
      {"biased", CFNumber::biased()}, {"golden", CFNumber::constant(1)}, {"silver", CFNumber::constant(2)}};
  for (const auto& [name, cf] : numbers) {
    const Bracket x = bracket(cf, name == "biased" ? 12 : 200);
    const BigInt q5 = cf.convergent(5).q;
    std::uint64_t checked = 0;
    for (long n = 0; n <= 4; ++n) {
      const BigInt qn = cf.convergent(n).q, qn1 = cf.convergent(n + 1).q;
      if (qn == qn1) continue;
      const Bracket best = distance(x, qn);
      for (BigInt q = qn; q < qn1 && q < q5; ++q) {
        if (q == qn) continue;
        const Bracket d = distance(x, q);
        c.expect(d.lo > best.hi, name + ": q = " + to_string(q) + " beats q_" + std::to_string(n));
        ++checked;
      }
    }
    rows.push_back({{"x", name}, {"q_5", to_string(q5)}, {"checked", checked}});
  }
  r.passed = c.ok;
  r.detail = finish(c, {{"numbers", rows}});
  return r;
}

// ---- criterion 4 ----
CriterionResult census_completeness() {
  CriterionResult r{4, "census completeness below q_5", false, {}, 0, 60.0};
  const auto cf = CFNumber::biased();
  const Bracket x = bracket(cf, 12);
  const auto census = biased_census(4);
  using Point = std::tuple<std::string, std::string, int>;
  std::set<Point> brute, listed;
  Check c;
  const BigInt q5 = cf.convergent(5).q;
  for (BigInt q = 1; q < q5; ++q) {
    const Rational mid = (x.lo + x.hi) / 2 * Rational(q);
    BigInt p0;
    mpz_fdiv_q(p0.get_mpz_t(), mid.get_num_mpz_t(), mid.get_den_mpz_t());
    for (BigInt p = p0 - 1; p <= p0 + 2; ++p) {
      const Bracket f = linear(x, q, p);
      const Rational flo = f.lo * Rational(q), fhi = f.hi * Rational(q);
      const bool in_lo = flo >= -1 && flo <= 1, in_hi = fhi >= -1 && fhi <= 1;
      c.expect(in_lo == in_hi, "undecided at q = " + to_string(q));
      if (in_lo) brute.insert({to_string(q), to_string(p), sign_of(f)});
    }
  }
  std::uint64_t outside = 0;
  for (const auto& row : census.rows) {
    if (!row.in_R) continue;
    listed.insert({to_string(row.q), to_string(row.p), row.sign});
  }
  // Residue of each brute-force point modulo q_n of its window.
  for (const auto& pt : brute) {
    const BigInt q(std::get<0>(pt));
    for (const auto& w : census.windows) {
      if (q < w.q_first || q > w.q_last) continue;
      const BigInt r = q % w.q_first;
      if (std::find(w.classes.begin(), w.classes.end(), r) == w.classes.end()) ++outside;
    }
  }
  c.expect(outside == 0, "in-R points outside the candidate classes");
  c.expect(brute == listed, "census and brute force differ");
  r.passed = c.ok;
  r.detail = finish(c, {{"q_5", to_string(q5)}, {"brute_in_R", brute.size()}, {"census_in_R", listed.size()},
                        {"outside_candidates", outside}});
  return r;
}

// ---- criteria 5 and 6 ----
struct CensusChecks {
  CriterionResult bound, bias;
};

// Frozen from the exact census: (k, eps) -> (total, negative) at the cluster
// threshold q_k floor(sqrt(a_{k+1})).
struct Frozen {
  int k;
  double eps;
  long total, negative;
};
const Frozen kFrozen[] = {
    {3, 0.0, 28, 22},       {3, 0.01, 21, 18},         {3, 0.1, 15, 15},
    {5, 0.0, 248, 240},     {5, 0.01, 214, 214},       {5, 0.1, 195, 195},
    {7, 0.0, 4348, 4338},   {7, 0.01, 4056, 4056},     {7, 0.1, 3687, 3687},
    {9, 0.0, 104352, 104340}, {9, 0.01, 99001, 99001}, {9, 0.1, 90001, 90001},
};

CensusChecks biased_checks(bool quick) {
  CensusChecks out{{5, "L_n lower bound", false, {}, 0, 300.0}, {6, "biased direction ratios", false, {}, 0, 300.0}};
  const int n_max = quick ? 7 : 9;
  const auto t0 = std::chrono::steady_clock::now();
  const auto census = biased_census(n_max, false);
  {
    Check c;
    nlohmann::json rows = nlohmann::json::array();
    for (int n = 5; n <= n_max; n += 2) {
      const auto& w = census.windows[static_cast<std::size_t>(n)];
      const BigInt bound = census_lower_bound(n);
      c.expect(BigInt(static_cast<unsigned long>(w.L)) >= bound, "L_" + std::to_string(n) + " below the bound");
      rows.push_back({{"n", n}, {"L", w.L}, {"bound", to_string(bound)}});
    }
    out.bound.passed = c.ok;
    out.bound.detail = finish(c, {{"n_max", n_max}, {"L", rows}});
    out.bound.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const auto t1 = std::chrono::steady_clock::now();
  Check c;
  std::vector<RatioThreshold> cluster;
  for (const auto& th : default_thresholds(n_max)) {
    if (th.label == "cluster") cluster.push_back(th);
  }
  const std::vector<RatioThreshold> last3(cluster.end() - 3, cluster.end());
  const auto minus = DirectionSet::sign_set(true, false), plus = DirectionSet::sign_set(false, true);
  nlohmann::json rows = nlohmann::json::array();
  for (double eps : {0.0, 0.01, 0.1}) {
    const auto a = biased_ratio(census, last3, minus, eps);
    const auto b = biased_ratio(census, last3, plus, eps);
    const auto tag = " at eps = " + a.eps;
    const double gap = a.rows.back().ratio - b.rows.back().ratio;
    c.expect(gap >= 0.5, "ratio gap below 0.5" + tag);
    c.expect(a.rows.back().ratio >= 0.75, "ratio({-1}) below 0.75" + tag);
    c.expect(b.rows.back().ratio <= 0.25, "ratio({+1}) above 0.25" + tag);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      c.expect(a.rows[i].in_A + b.rows[i].in_A == a.rows[i].total, "partition" + tag);
      if (i > 0) {
        // Cross-multiplied: neg_i / tot_i >= neg_{i-1} / tot_{i-1}.
        c.expect(a.rows[i].negative * a.rows[i - 1].total >= a.rows[i - 1].negative * a.rows[i].total,
                 "ratio({-1}) decreases" + tag);
      }
      for (const auto& f : kFrozen) {
        if (f.k == a.rows[i].threshold.k && f.eps == eps) {
          c.expect(a.rows[i].total == f.total && a.rows[i].negative == f.negative,
                   "frozen count changed at k = " + std::to_string(f.k) + tag);
        }
      }
    }
    nlohmann::json trend = nlohmann::json::array();
    for (const auto& row : a.rows) {
      trend.push_back({{"k", row.threshold.k}, {"T", to_string(row.threshold.T)}, {"total", to_string(row.total)},
                       {"negative", to_string(row.negative)}, {"ratio", row.ratio}});
    }
    rows.push_back({{"eps", a.eps}, {"gap", gap}, {"thresholds", trend}});
  }
  out.bias.passed = c.ok;
  out.bias.detail = finish(c, {{"n_max", n_max}, {"ratios", rows}});
  out.bias.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  return out;
}

// ---- criterion 7 ----
CriterionResult thm1_desk(std::uint64_t seed, int threads) {
  CriterionResult r{7, "uniform x desk scale", false, {}, 0, 120.0};
  Thm1Options one;
  one.d = 1;
  one.num_points = 200;
  one.T = 100000;
  one.A = DirectionSet::sign_set(true, false);
  one.seed = seed;
  one.threads = threads;
  Thm1Options two;
  two.d = 2;
  two.num_points = 50;
  two.T = 10000;
  two.A = DirectionSet::hemisphere({1.0, 0.0});
  two.seed = seed;
  two.threads = threads;
  const auto a = thm1_experiment(one);
  const auto b = thm1_experiment(two);
  Check c;
  c.expect(std::abs(a.mean_ratio - 0.5) <= 0.02, "d = 1 mean off by more than 0.02");
  c.expect(std::abs(b.mean_ratio - 0.5) <= 0.05, "d = 2 mean off by more than 0.05");
  r.passed = c.ok;
  r.detail = finish(c, {{"d1_mean", a.mean_ratio}, {"d1_stddev", a.stddev}, {"d1_skipped", a.skipped},
                        {"d2_mean", b.mean_ratio}, {"d2_stddev", b.stddev}, {"d2_skipped", b.skipped}});
  return r;
}

// ---- criterion 8 ----
// #{(p, q) : 2 <= q <= T, |q x - p| q <= 1} by a long double loop.
std::uint64_t direct_count(double x, std::uint64_t T) {
  std::uint64_t n = 0;
  const long double X = x;
  for (std::uint64_t q = 2; q <= T; ++q) {
    const long double Q = static_cast<long double>(q);
    const long double p0 = std::floor(Q * X);
    for (long double p = p0 - 1; p <= p0 + 2; p += 1) {
      if (std::abs(Q * X - p) * Q <= 1.0L) ++n;
    }
  }
  return n;
}

CriterionResult birkhoff_trend(std::uint64_t seed) {
  CriterionResult r{8, "dyadic shelling", false, {}, 0, 30.0};
  const double reference = 2.0 * std::numbers::ln2;
  Check c;
  double mean = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t j = 0; j < 5; ++j) {
    auto rng = sample_stream(seed, 800 + j);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double x = unit(rng);
    const auto rep = birkhoff_experiment(Lattice::from_x({x}), 14, 1.0, Norm::Sup, std::nullopt);
    const auto direct = direct_count(x, 1u << 14);
    const auto& last = rep.steps.back();
    c.expect(rep.additive, "shell sums differ from direct counts");
    c.expect(rep.equivariant, "g_s equivariance fails");
    c.expect(last.cumulative == direct, "shell sum differs from the direct loop");
    c.expect(std::abs(rep.reference - reference) <= 1e-12 * reference, "vol(P_2) differs from 2 ln 2");
    mean += last.average / 5.0;
    rows.push_back({{"x", x},
                    {"count", last.cumulative},
                    {"average", last.average},
                    {"relative_deviation", (last.average - reference) / reference}});
  }
  const double dev = std::abs(mean - reference) / reference;
  c.expect(dev <= 0.15, "mean of N(2^14)/14 over the lattices is more than 15% from 2 ln 2");
  r.passed = c.ok;
  r.detail = finish(c, {{"lattices", rows}, {"mean_average", mean}, {"reference", reference}, {"relative_deviation", dev}});
  return r;
}

// ---- criterion 9 ----
CriterionResult spherical_ratio(std::uint64_t seed, int threads) {
  CriterionResult r{9, "spherical averages and paired ratio", false, {}, 0, 120.0};
  Check c;
  nlohmann::json rows = nlohmann::json::array();
  AverageOptions opts;
  opts.threads = threads;
  for (int d : {1, 2}) {
    std::vector<double> axis(static_cast<std::size_t>(d), 0.0);
    axis[0] = 1.0;
    const auto est = thm3_ratio(Lattice::integer(d + 1), DirectionSet::hemisphere(axis), 0.1, 6.0, 2000, seed, 1.0,
                                Norm::Euclidean, opts);
    const double omega = d == 1 ? 2.0 : std::numbers::pi;
    const double reference = 0.5 * omega * std::log(10.0);
    const auto tag = " at d = " + std::to_string(d);
    c.expect(std::abs(est.ratio - 0.5) <= 3 * est.std_error, "ratio off by more than 3 stderr" + tag);
    c.expect(std::abs(est.numerator.mean - reference) <= 3 * est.numerator.std_error + 0.05 * reference,
             "numerator mean off the volume" + tag);
    rows.push_back({{"d", d}, {"ratio", est.ratio}, {"ratio_stderr", est.std_error},
                    {"numerator", est.numerator.mean}, {"numerator_stderr", est.numerator.std_error},
                    {"reference", reference}});
  }
  // At t = 0 a rotation-invariant function has a constant transform.
  int exact = 0;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const int n2 = a * a + b * b;
      if (n2 > 0 && 4 * n2 >= 1 && 4 * n2 <= 9) ++exact;
    }
  }
  const auto zero = spherical_average(TestFunction::radial(2, 0.5, 1.5), Lattice::integer(2), 0.0, 50, seed);
  c.expect(zero.mean == exact && zero.std_error == 0.0, "t = 0 radial average is not constant");
  r.passed = c.ok;
  r.detail = finish(c, {{"estimates", rows}, {"radial_t0_mean", zero.mean}, {"radial_t0_stderr", zero.std_error},
                        {"radial_exact", exact}});
  return r;
}

// ---- criterion 10 ----
CriterionResult haar_statistics(std::uint64_t seed) {
  CriterionResult r{10, "Haar sampler statistics", false, {}, 0, 30.0};
  Check c;
  const std::uint64_t M = 10000;
  nlohmann::json rows = nlohmann::json::array();
  for (int n : {2, 3, 4}) {
    double worst = 0.0, mean = 0.0;
    for (std::uint64_t i = 0; i < M; ++i) {
      auto rng = sample_stream(seed, 10000 * static_cast<std::uint64_t>(n) + i);
      const Eigen::MatrixXd k = haar_rotation(n, rng);
      worst = std::max(worst, (k.transpose() * k - Eigen::MatrixXd::Identity(n, n)).norm());
      c.expect(std::abs(k.determinant() - 1.0) <= 1e-10, "determinant is not 1");
      mean += k(0, 0);
    }
    mean /= static_cast<double>(M);
    const auto tag = " for n = " + std::to_string(n);
    c.expect(worst <= 1e-10, "orthogonality residual above 1e-10" + tag);
    c.expect(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(M)), "first coordinate mean too far from 0" + tag);
    rows.push_back({{"n", n}, {"max_residual", worst}, {"first_coordinate_mean", mean}});
  }
  r.passed = c.ok;
  r.detail = finish(c, {{"M", M}, {"dimensions", rows}});
  return r;
}

// ---- criterion 11 ----
CriterionResult nonminimal_check() {
  CriterionResult r{11, "non-minimal diagonal", false, {}, 0, 10.0};
  const auto rep = nonminimal_experiment(2, CFNumber::constant(1), 10000, 100);
  Check c;
  c.expect(rep.late > 0, "no approximates with q >= 100");
  c.expect(rep.max_axis_distance <= 1e-9, "a late direction is off +-(1,1)/sqrt 2");
  c.expect(rep.late_in_disjoint_cap == 0, "the disjoint cap caught a late direction");
  r.passed = c.ok;
  r.detail = finish(c, rep.to_json()["summary"]);
  return r;
}

template <class F>
CriterionResult timed(F f) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = f();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_criteria(const VerifyOptions& o) {
  std::vector<CriterionResult> out;
  auto guarded = [&](int id, const char* name, double limit, auto f) {
    try {
      out.push_back(timed(f));
    } catch (const Error& e) {
      out.push_back({id, name, false, {{"error", error_code_name(e.code())}, {"message", e.what()}}, 0, limit});
    }
  };
  guarded(1, "continued-fraction identities", 1.0, cf_identities);
  guarded(2, "error ratio enclosures", 1.0, ratio_corollary);
  guarded(3, "best approximation below q_5", 10.0, best_approximation);
  guarded(4, "census completeness below q_5", 60.0, census_completeness);
  try {
    auto b = biased_checks(o.quick);
    out.push_back(b.bound);
    out.push_back(b.bias);
  } catch (const Error& e) {
    const nlohmann::json err = {{"error", error_code_name(e.code())}, {"message", e.what()}};
    out.push_back({5, "L_n lower bound", false, err, 0, 300.0});
    out.push_back({6, "biased direction ratios", false, err, 0, 300.0});
  }
  guarded(7, "uniform x desk scale", 120.0, [&] { return thm1_desk(o.seed, o.threads); });
  guarded(8, "dyadic shelling", 30.0, [&] { return birkhoff_trend(o.seed); });
  guarded(9, "spherical averages and paired ratio", 120.0, [&] { return spherical_ratio(o.seed, o.threads); });
  guarded(10, "Haar sampler statistics", 30.0, [&] { return haar_statistics(o.seed); });
  guarded(11, "non-minimal diagonal", 10.0, nonminimal_check);
  return out;
}

nlohmann::json criteria_json(const std::vector<CriterionResult>& rs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rs) out.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return out;
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& r : criteria) {
    if (!r.passed) return false;
  }
  return !criteria.empty();
}

nlohmann::json VerifyReport::to_json() const {
  return {{"criteria", criteria_json(criteria)}, {"passed", passed()}};
}

nlohmann::json VerifyReport::timings() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : criteria) out.push_back({{"id", r.id}, {"seconds", r.seconds}, {"limit", r.time_limit}});
  return out;
}

VerifyReport verify(const VerifyOptions& options) {
  VerifyReport report;
  const auto t0 = std::chrono::steady_clock::now();
  report.criteria = run_criteria(options);
  const double first = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto again = run_criteria(options);
  const std::string a = criteria_json(report.criteria).dump(), b = criteria_json(again).dump();
  CriterionResult r{12, "reproducibility", a == b, {}, first, 0.0};
  r.detail = {{"bytes", a.size()}, {"identical", a == b}};
  report.criteria.push_back(r);
  return report;
}

}  // namespace spiral
