// N(x, T) and N(x, T, A): pairs (p, q) with 0 < q <= T and |q x - p| < C q^{-1/d}.

#include <cmath>
#include <string>

#include "spiral/error.hpp"
#include "spiral/lattice.hpp"

namespace spiral {

namespace {

void check_A(const ApproxOptions& options, int d) {
  if (!(options.C > 0.0) || !std::isfinite(options.C)) {
    throw Error(ErrorCode::InvalidArgument, "approximation constant C must be positive");
  }
  if (options.A && options.A->dimension() != d) {
    throw Error(ErrorCode::InvalidArgument, "direction set dimension must equal d");
  }
}

[[noreturn]] void degenerate(const std::string& p, std::uint64_t q) {
  throw Error(ErrorCode::DegenerateRational,
              "q x - p = 0 at p = " + p + ", q = " + std::to_string(q) + "; direction undefined");
}

void record(CountResult& out, const ApproxOptions& options, std::span<const double> w, double q) {
  ++out.total;
  if (options.A && options.A->contains(direction(w))) ++out.in_A;
  if (options.witnesses) {
    std::vector<double> row(w.begin(), w.end());
    row.push_back(q);
    out.witnesses.push_back(std::move(row));
  }
}

}  // namespace

CountResult count_approximates(std::span<const double> x, std::uint64_t T, const ApproxOptions& options) {
  const int d = static_cast<int>(x.size());
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "x must have at least one coordinate");
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "T must be >= 1");
  check_A(options, d);
  for (double xi : x) {
    if (!std::isfinite(xi)) throw Error(ErrorCode::InvalidArgument, "x must be finite");
  }
  CountResult out;
  const double cd = std::pow(options.C, d);
  std::vector<std::int64_t> p_lo(static_cast<std::size_t>(d)), p_hi(static_cast<std::size_t>(d)), p;
  std::vector<double> w(static_cast<std::size_t>(d));
  for (std::uint64_t q = 1; q <= T; ++q) {
    const auto qd = static_cast<double>(q);
    const double r = options.C * std::pow(qd, -1.0 / d);
    bool any = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double center = qd * x[i];
      p_lo[i] = static_cast<std::int64_t>(std::floor(center - r));
      p_hi[i] = static_cast<std::int64_t>(std::ceil(center + r));
      any = any && p_lo[i] <= p_hi[i];
    }
    if (!any) continue;
    p = p_lo;
    while (true) {
      // fma keeps the zero test and the sign of q x - p exact.
      bool zero = true;
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::fma(qd, x[i], -static_cast<double>(p[i]));
        zero = zero && w[i] == 0.0;
      }
      double n = 0.0;
      if (options.norm == Norm::Sup) {
        for (double v : w) n = std::max(n, std::abs(v));
      } else {
        for (double v : w) n += v * v;
        n = std::sqrt(n);
      }
      if (std::pow(n, d) * qd < cd) {
        if (zero) {
          if (options.A) degenerate(std::to_string(p[0]), q);
          ++out.total;
          ++out.degenerate;
        } else {
          record(out, options, w, qd);
        }
      }
      std::size_t i = 0;
      for (; i < w.size(); ++i) {
        if (p[i] < p_hi[i]) {
          ++p[i];
          break;
        }
        p[i] = p_lo[i];
      }
      if (i == w.size()) break;
    }
  }
  return out;
}

CountResult count_approximates(const CFNumber& x, std::uint64_t T, const ApproxOptions& options) {
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "T must be >= 1");
  check_A(options, 1);
  // x is irrational, so q x - p never vanishes and |q x - p| never equals
  // C / q for rational C; every decision below is strict.
  const double xd = x.to_double();
  const Rational C(options.C);
  const RationalInterval tight = enclose(x, Rational(1, BigInt(1) << 160));
  // sign of x - r
  auto side = [&](const Rational& r) {
    if (r <= tight.lo) return 1;
    if (r >= tight.hi) return -1;
    return compare_to(x, r);
  };
  CountResult out;
  for (std::uint64_t q = 1; q <= T; ++q) {
    const auto qd = static_cast<double>(q);
    const double r = options.C / qd;
    const auto first = static_cast<std::int64_t>(std::floor(qd * xd - r)) - 1;
    const auto last = static_cast<std::int64_t>(std::ceil(qd * xd + r)) + 1;
    for (std::int64_t pp = first; pp <= last; ++pp) {
      const double approx = std::fma(qd, xd, -static_cast<double>(pp));
      const double gap = std::abs(approx) - r;
      const double err = 1e-12 + qd * 1e-15;
      if (gap > err) continue;
      bool inside = gap < -err;
      int sign = approx > err ? 1 : (approx < -err ? -1 : 0);
      if (!inside || sign == 0) {
        const BigInt P(static_cast<long>(pp));
        const Rational Q{BigInt(static_cast<unsigned long>(q))};
        const Rational cq = C / Q;
        inside = side((Rational(P) + cq) / Q) < 0 && side((Rational(P) - cq) / Q) > 0;
        if (inside) sign = side(Rational(P) / Q);
      }
      if (!inside) continue;
      const double w = sign > 0 ? std::abs(approx) : -std::abs(approx);
      // The magnitude may round to 0 for huge q; the sign is what matters.
      const double wv = w != 0.0 ? w : static_cast<double>(sign) * 1e-300;
      record(out, options, std::span<const double>(&wv, 1), qd);
    }
  }
  return out;
}

}  // namespace spiral
