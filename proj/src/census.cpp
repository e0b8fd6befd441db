// Exact census of the lattice points of Lambda_x in the sup-norm region
// |q x - p| q <= 1 for the biased x, organised by the division algorithm
// q = m q_n + r inside each window q_n <= q < q_{n+1}.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "spiral/error.hpp"
#include "spiral/experiments.hpp"

namespace spiral {

namespace {

constexpr int kMaxCensusIndex = 9;

// Sign of x - r with a cached tight enclosure.
class Side {
 public:
  explicit Side(const CFNumber& x) : x_(x), tight_(enclose(x, Rational(1, BigInt(1) << 512))) {}

  int operator()(const Rational& r) const {
    if (r < tight_.lo) return 1;
    if (r > tight_.hi) return -1;
    return compare_to(x_, r);
  }
  const Rational& approx() const { return tight_.lo; }

 private:
  CFNumber x_;
  RationalInterval tight_;
};

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

std::int64_t to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) throw Error(ErrorCode::Internal, "census multiplier out of range");
  return v.get_si();
}

// Largest m in [a, b] with pred true, pred true on a prefix; a - 1 if none.
std::int64_t last_true(std::int64_t a, std::int64_t b, const std::function<bool(std::int64_t)>& pred) {
  std::int64_t lo = a - 1, hi = b;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (pred(mid)) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

// Smallest m in [a, b] with pred true, pred true on a suffix; b + 1 if none.
std::int64_t first_true(std::int64_t a, std::int64_t b, const std::function<bool(std::int64_t)>& pred) {
  std::int64_t lo = a, hi = b + 1;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

struct ClassScan {
  BigInt qn, pn, r, pr;
  std::int64_t m_lo = 0, m_hi = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> in_R;  // disjoint, increasing
  std::int64_t sign_break = 0;  // first m whose sign differs from sign(m_lo)
  int first_sign = 0;

  BigInt q(std::int64_t m) const { return big(m) * qn + r; }
  BigInt p(std::int64_t m) const { return big(m) * pn + pr; }
  int sign(std::int64_t m) const { return m < sign_break ? first_sign : -first_sign; }
  bool contains(std::int64_t m) const {
    for (const auto& [a, b] : in_R) {
      if (a <= m && m <= b) return true;
    }
    return false;
  }
};

// |q x - p| q <= 1 as two comparisons of x with rationals.
bool upper_ok(const Side& side, const BigInt& p, const BigInt& q) {
  return side(Rational(p * q + 1, q * q)) < 0;
}
bool lower_ok(const Side& side, const BigInt& p, const BigInt& q) {
  return side(Rational(p * q - 1, q * q)) > 0;
}

void scan_class(const Side& side, ClassScan& c) {
  auto up = [&](std::int64_t m) { return upper_ok(side, c.p(m), c.q(m)); };
  auto low = [&](std::int64_t m) { return lower_ok(side, c.p(m), c.q(m)); };
  auto positive = [&](std::int64_t m) {
    Rational v(c.p(m), c.q(m));
    v.canonicalize();
    return side(v) > 0;
  };

  // p(m) must be the nearest integer to q(m) x. q x - p(m) is linear in m,
  // so checking both ends covers the whole range.
  for (std::int64_t m : {c.m_lo, c.m_hi}) {
    const BigInt q = c.q(m), p = c.p(m);
    Rational lo(2 * p - 1, 2 * q), hi(2 * p + 1, 2 * q);
    lo.canonicalize();
    hi.canonicalize();
    if (!(side(lo) > 0 && side(hi) < 0)) {
      throw Error(ErrorCode::Internal, "census: nearest numerator is not linear over the class");
    }
  }

  Rational dn(c.pn, c.qn);
  dn.canonicalize();
  const int dn_sign = side(dn);  // sign of q_n x - p_n

  // The sign of q x - p changes at most once.
  c.first_sign = positive(c.m_lo) ? 1 : -1;
  const bool rising = dn_sign > 0;
  if (rising == (c.first_sign > 0)) {
    c.sign_break = c.m_hi + 1;
  } else if (rising) {
    c.sign_break = first_true(c.m_lo, c.m_hi, positive);
  } else {
    c.sign_break = last_true(c.m_lo, c.m_hi, positive) + 1;
  }

  // F(m) = (q(m) x - p(m)) q(m) is quadratic in m with leading coefficient
  // (q_n x - p_n) q_n; split at its vertex into monotone pieces.
  const Rational& x = side.approx();
  const Rational delta_n = Rational(c.qn) * x - Rational(c.pn);
  const Rational delta_r = Rational(c.r) * x - Rational(c.pr);
  const Rational vertex = -(delta_n * Rational(c.r) + delta_r * Rational(c.qn)) / (2 * delta_n * Rational(c.qn));

  struct Piece {
    std::int64_t a, b;
    bool increasing;
  };
  std::vector<Piece> pieces;
  const bool convex = dn_sign > 0;
  if (vertex < Rational(big(c.m_lo - 2)) || vertex > Rational(big(c.m_hi + 2))) {
    const bool left_of_vertex = vertex > Rational(big(c.m_hi + 2));
    pieces.push_back({c.m_lo, c.m_hi, left_of_vertex != convex});
  } else {
    const BigInt vf = [&] {
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), vertex.get_num_mpz_t(), vertex.get_den_mpz_t());
      return f;
    }();
    const std::int64_t v = to_i64(vf);
    if (c.m_lo <= v - 2) pieces.push_back({c.m_lo, std::min(v - 2, c.m_hi), !convex});
    for (std::int64_t m = std::max(c.m_lo, v - 1); m <= std::min(c.m_hi, v + 1); ++m) {
      pieces.push_back({m, m, true});
    }
    if (v + 2 <= c.m_hi) pieces.push_back({std::max(v + 2, c.m_lo), c.m_hi, convex});
  }

  for (const auto& piece : pieces) {
    std::int64_t lo, hi;
    if (piece.increasing) {
      hi = last_true(piece.a, piece.b, up);
      lo = first_true(piece.a, piece.b, low);
    } else {
      lo = first_true(piece.a, piece.b, up);
      hi = last_true(piece.a, piece.b, low);
    }
    lo = std::max(lo, piece.a);
    hi = std::min(hi, piece.b);
    if (lo > hi) continue;
    if (!c.in_R.empty() && c.in_R.back().second + 1 == lo) {
      c.in_R.back().second = hi;
    } else {
      c.in_R.emplace_back(lo, hi);
    }
  }
}

BigInt isqrt(const BigInt& v) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

}  // namespace

BigInt census_lower_bound(int n) {
  // floor((n+1)^{(n+1)/2}) = floor(sqrt((n+1)^{n+1})).
  BigInt base(n + 1), power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n + 1));
  return isqrt(power);
}

Census biased_census(int n_max, bool rows) {
  if (n_max < 0 || n_max > kMaxCensusIndex) {
    throw Error(ErrorCode::InvalidArgument, "census index n_max must lie in [0, 9]");
  }
  const CFNumber x = CFNumber::biased();
  const Side side(x);
  const auto conv = convergents(x, static_cast<std::size_t>(n_max) + 1);
  Census census;
  census.n_max = n_max;

  for (int n = 0; n <= n_max; ++n) {
    CensusWindow window;
    window.n = n;
    window.q_first = conv[static_cast<std::size_t>(n)].q;
    window.q_last = conv[static_cast<std::size_t>(n) + 1].q - 1;
    const BigInt& qn = window.q_first;
    const BigInt& pn = conv[static_cast<std::size_t>(n)].p;
    const Convergent prev = x.convergent(n - 1);

    if (n == 0) {
      // q < q_1 = 4: q <= 2 admits several numerators, so test every p.
      window.classes = {BigInt(0)};
      window.candidates = window.q_last;
      for (std::int64_t q = 1; big(q) <= window.q_last; ++q) {
        const BigInt Q = big(q);
        const BigInt centre = (Q * conv[1].p) / conv[1].q;  // close to q x
        for (BigInt P = centre - 2; P <= centre + 2; ++P) {
          const bool in = upper_ok(side, P, Q) && lower_ok(side, P, Q);
          Rational pq(P, Q);
          pq.canonicalize();
          const int sign = side(pq) > 0 ? 1 : -1;
          if (in) {
            ++window.in_R;
            ++window.L;
            if (sign < 0) ++window.negative;
            census.runs.push_back({0, BigInt(0), q, q, sign});
          }
          const bool nearest = side(Rational(2 * P - 1, 2 * Q)) > 0 && side(Rational(2 * P + 1, 2 * Q)) < 0;
          if (rows && (in || nearest)) census.rows.push_back({0, BigInt(0), q, Q, P, in, sign});
        }
      }
      window.rows_complete = rows;
      census.windows.push_back(std::move(window));
      continue;
    }

    std::vector<BigInt> classes = {BigInt(0), prev.q, 2 * prev.q, qn - prev.q};
    for (auto& r : classes) r = r % qn;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    window.classes = classes;

    std::vector<ClassScan> scans;
    for (const auto& r : classes) {
      ClassScan c;
      c.qn = qn;
      c.pn = pn;
      c.r = r;
      c.pr = r == 0 ? BigInt(0) : rotation_value(x, r).nearest;
      c.m_lo = 1;
      c.m_hi = to_i64((window.q_last - r) / qn);
      if (c.m_hi < c.m_lo) continue;
      scan_class(side, c);
      window.candidates += big(c.m_hi - c.m_lo + 1);
      for (const auto& [a, b] : c.in_R) {
        // Split the run where the sign flips.
        std::vector<std::pair<std::int64_t, std::int64_t>> parts;
        if (c.sign_break > a && c.sign_break <= b) {
          parts = {{a, c.sign_break - 1}, {c.sign_break, b}};
        } else {
          parts = {{a, b}};
        }
        for (const auto& [s, e] : parts) {
          const int sign = c.sign(s);
          const auto len = static_cast<std::uint64_t>(e - s + 1);
          window.in_R += len;
          if (sign < 0) window.negative += len;
          if (r == 0) window.L += len;
          census.runs.push_back({n, r, s, e, sign});
        }
      }
      scans.push_back(std::move(c));
    }

    window.rows_complete = rows && window.candidates <= BigInt(static_cast<unsigned long>(Census::kFullRowLimit));
    if (rows) {
      for (const auto& c : scans) {
        if (window.rows_complete) {
          for (std::int64_t m = c.m_lo; m <= c.m_hi; ++m) {
            census.rows.push_back({n, c.r, m, c.q(m), c.p(m), c.contains(m), c.sign(m)});
          }
        } else {
          for (const auto& [a, b] : c.in_R) {
            for (std::int64_t m = a; m <= b; ++m) {
              census.rows.push_back({n, c.r, m, c.q(m), c.p(m), true, c.sign(m)});
            }
          }
        }
      }
    }
    census.windows.push_back(std::move(window));
  }
  return census;
}

std::pair<BigInt, BigInt> Census::count(const BigInt& lo, const BigInt& hi) const {
  BigInt negative = 0, positive = 0;
  for (const auto& run : runs) {
    const BigInt qn = windows[static_cast<std::size_t>(run.n)].q_first;
    BigInt first, last;
    // lo <= m q_n + r <= hi
    const BigInt a = lo - run.r, b = hi - run.r;
    mpz_cdiv_q(first.get_mpz_t(), a.get_mpz_t(), qn.get_mpz_t());
    mpz_fdiv_q(last.get_mpz_t(), b.get_mpz_t(), qn.get_mpz_t());
    first = std::max(first, big(run.m_first));
    last = std::min(last, big(run.m_last));
    if (first > last) continue;
    (run.sign < 0 ? negative : positive) += last - first + 1;
  }
  return {negative, positive};
}

nlohmann::json Census::to_json() const {
  nlohmann::json out;
  out["n_max"] = n_max;
  out["windows"] = nlohmann::json::array();
  std::uint64_t total = 0, negative = 0;
  for (const auto& w : windows) {
    total += w.in_R;
    negative += w.negative;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& r : w.classes) classes.push_back(to_string(r));
    out["windows"].push_back({
        {"n", w.n},
        {"q_first", to_string(w.q_first)},
        {"q_last", to_string(w.q_last)},
        {"classes", classes},
        {"candidates", to_string(w.candidates)},
        {"in_R", w.in_R},
        {"negative", w.negative},
        {"L", w.L},
        {"L_bound", to_string(census_lower_bound(w.n))},
        {"running_negative_ratio", static_cast<double>(negative) / static_cast<double>(total)},
        {"rows_complete", w.rows_complete},
    });
  }
  out["runs"] = runs.size();
  out["rows"] = rows.size();
  return out;
}

std::string Census::rows_csv() const {
  std::ostringstream os;
  os << "n,r,m,q,p,in_R,sign\n";
  for (const auto& row : rows) {
    os << row.n << ',' << to_string(row.r) << ',' << row.m << ',' << to_string(row.q) << ','
       << to_string(row.p) << ',' << (row.in_R ? 1 : 0) << ',' << row.sign << '\n';
  }
  return os.str();
}

std::vector<RatioThreshold> default_thresholds(int n_max) {
  if (n_max < 1 || n_max > kMaxCensusIndex) {
    throw Error(ErrorCode::InvalidArgument, "threshold index must lie in [1, 9]");
  }
  const CFNumber x = CFNumber::biased();
  std::vector<RatioThreshold> out;
  for (int k = 1; k <= n_max; ++k) {
    const BigInt qk = x.convergent(k).q;
    out.push_back({"convergent", k, qk});
    if (k % 2 == 1) out.push_back({"cluster", k, qk * isqrt(x.element(static_cast<std::size_t>(k) + 1))});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.T < b.T; });
  return out;
}

Rational decimal_rational(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "value must be finite");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  const std::string s(buf, res.ptr);
  BigInt digits = 0;
  long exponent = 0;
  bool negative = false, fraction = false;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') {
    negative = true;
    ++i;
  }
  for (; i < s.size() && s[i] != 'e'; ++i) {
    if (s[i] == '.') {
      fraction = true;
      continue;
    }
    digits = digits * 10 + (s[i] - '0');
    if (fraction) --exponent;
  }
  if (i < s.size()) exponent += std::stol(s.substr(i + 1));
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational out = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

BiasedRatioReport biased_ratio(const Census& census, const std::vector<RatioThreshold>& thresholds,
                               const DirectionSet& A, double eps) {
  if (A.dimension() != 1) throw Error(ErrorCode::InvalidArgument, "the biased ratio needs a sign set");
  if (!(eps >= 0.0) || !(eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, 1)");
  const Rational e = decimal_rational(eps);
  const bool minus = A.contains(std::vector<double>{-1.0});
  const bool plus = A.contains(std::vector<double>{1.0});
  const BigInt& covered = census.windows.back().q_last;

  BiasedRatioReport report;
  {
    std::ostringstream os;
    os << eps;
    report.eps = os.str();
  }
  for (const auto& th : thresholds) {
    if (th.T < 1 || th.T > covered) {
      throw Error(ErrorCode::InvalidArgument, "threshold " + to_string(th.T) + " lies outside the census");
    }
    const Rational scaled = e * Rational(th.T);
    BigInt lo;
    mpz_cdiv_q(lo.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    if (lo < 1) lo = 1;
    RatioRow row;
    row.threshold = th;
    std::tie(row.negative, row.positive) = census.count(lo, th.T);
    row.total = row.negative + row.positive;
    if (row.total == 0) {
      throw Error(ErrorCode::EmptyDenominator,
                  "no lattice points with " + to_string(lo) + " <= q <= " + to_string(th.T));
    }
    row.in_A = (minus ? row.negative : BigInt(0)) + (plus ? row.positive : BigInt(0));
    row.ratio = Rational(row.in_A, row.total).get_d();
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::json BiasedRatioReport::to_json() const {
  nlohmann::json out;
  out["eps"] = eps;
  out["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    out["rows"].push_back({
        {"kind", r.threshold.label},
        {"k", r.threshold.k},
        {"T", to_string(r.threshold.T)},
        {"total", to_string(r.total)},
        {"negative", to_string(r.negative)},
        {"positive", to_string(r.positive)},
        {"in_A", to_string(r.in_A)},
        {"ratio", r.ratio},
    });
  }
  return out;
}

}  // namespace spiral
