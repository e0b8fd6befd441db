#include "spiral/contfrac.hpp"

#include <mutex>
#include <string>
#include <utility>

#include "spiral/error.hpp"

namespace spiral {

namespace {

constexpr std::size_t kPrefixCap = 10000;

BigInt round_nearest(const Rational& v) {
  // floor(v + 1/2)
  Rational shifted = v + Rational(1, 2);
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return out;
}

RationalInterval ordered(Rational a, Rational b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

Rational convergent_value(const Convergent& c) {
  Rational r(c.p, c.q);
  r.canonicalize();
  return r;
}

// [c_m, c_{m+1}], which contains x in its interior.
RationalInterval bracket(const CFNumber& cf, long m) {
  return ordered(convergent_value(cf.convergent(m)),
                 convergent_value(cf.convergent(m + 1)));
}

}  // namespace

struct CFNumber::State {
  Rule rule;
  std::mutex mutex;
  std::vector<BigInt> elements;  // elements[i] = a_{i+1}
  // ps[i], qs[i] hold p_{i-1}, q_{i-1}.
  std::vector<BigInt> ps{BigInt(1), BigInt(0)};
  std::vector<BigInt> qs{BigInt(0), BigInt(1)};

  void extend_elements(std::size_t count) {
    while (elements.size() < count) {
      BigInt a = rule(elements.size() + 1);
      if (a < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "continued fraction element a_" +
                        std::to_string(elements.size() + 1) + " must be >= 1");
      }
      elements.push_back(std::move(a));
    }
  }

  void extend_convergents(long n) {
    if (n > 0) extend_elements(static_cast<std::size_t>(n));
    while (static_cast<long>(ps.size()) - 2 < n) {
      const std::size_t k = ps.size() - 1;  // index of the next convergent
      const BigInt& a = elements[k - 1];
      ps.push_back(a * ps[k] + ps[k - 1]);
      qs.push_back(a * qs[k] + qs[k - 1]);
    }
  }
};

CFNumber::CFNumber(Rule rule) : state_(std::make_shared<State>()) {
  state_->rule = std::move(rule);
}

CFNumber CFNumber::constant(const BigInt& a) {
  return CFNumber([a](std::size_t) { return a; });
}

CFNumber CFNumber::periodic(std::vector<BigInt> period) {
  if (period.empty()) {
    throw Error(ErrorCode::InvalidArgument, "periodic expansion needs a non-empty period");
  }
  return CFNumber([period = std::move(period)](std::size_t n) {
    return period[(n - 1) % period.size()];
  });
}

CFNumber CFNumber::biased() { return CFNumber(biased_element); }

BigInt CFNumber::element(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "elements are indexed from 1");
  std::lock_guard lock(state_->mutex);
  state_->extend_elements(n);
  return state_->elements[n - 1];
}

std::vector<BigInt> CFNumber::elements(std::size_t count) const {
  std::lock_guard lock(state_->mutex);
  state_->extend_elements(count);
  return {state_->elements.begin(), state_->elements.begin() + static_cast<long>(count)};
}

Convergent CFNumber::convergent(long n) const {
  if (n < -1) throw Error(ErrorCode::InvalidArgument, "convergent index must be >= -1");
  std::lock_guard lock(state_->mutex);
  state_->extend_convergents(n);
  const auto i = static_cast<std::size_t>(n + 1);
  return {n, state_->ps[i], state_->qs[i]};
}

double CFNumber::to_double() const {
  const RationalInterval box = enclose(*this, Rational(1, BigInt(1) << 80));
  return Rational((box.lo + box.hi) / 2).get_d();
}

BigInt biased_element(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "elements are indexed from 1");
  if (n % 2 == 1) return BigInt(4);
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), n, n);
  return out;
}

CFNumber cf_product(const CFNumber& odd_source, const CFNumber& even_source) {
  return CFNumber([odd_source, even_source](std::size_t n) {
    return n % 2 == 1 ? odd_source.element((n + 1) / 2) : even_source.element(n / 2);
  });
}

std::vector<Convergent> convergents(const CFNumber& cf, std::size_t n_max) {
  std::vector<Convergent> out;
  out.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) out.push_back(cf.convergent(static_cast<long>(n)));
  return out;
}

RationalInterval enclose(const CFNumber& cf, const Rational& width_bound) {
  if (width_bound <= 0) {
    throw Error(ErrorCode::InvalidArgument, "enclosure width bound must be positive");
  }
  for (long m = 0; m < static_cast<long>(kPrefixCap); ++m) {
    const BigInt qq = cf.convergent(m).q * cf.convergent(m + 1).q;
    if (Rational(1, qq) <= width_bound) return bracket(cf, m);
  }
  throw Error(ErrorCode::IterationCapExceeded, "enclosure needs more than 10^4 prefix terms");
}

int compare_to(const CFNumber& cf, const Rational& r) {
  for (long m = 0; m < static_cast<long>(kPrefixCap); ++m) {
    const RationalInterval box = bracket(cf, m);
    // x lies strictly inside the bracket.
    if (r <= box.lo) return 1;
    if (r >= box.hi) return -1;
  }
  throw Error(ErrorCode::IterationCapExceeded,
              "comparison undecided after 10^4 prefix terms (effectively rational input?)");
}

RotationValue rotation_value(const CFNumber& cf, const BigInt& q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "rotation_value needs q >= 1");
  const Rational half(1, 2);
  for (long m = 1; m <= static_cast<long>(kPrefixCap); m *= 2) {
    const RationalInterval box = bracket(cf, m);
    const Rational lo = box.lo * q;
    const Rational hi = box.hi * q;
    const BigInt p = round_nearest(lo);
    if (round_nearest(hi) != p) continue;
    RationalInterval enc{lo - p, hi - p};
    if (enc.lo <= -half || enc.hi >= half) continue;
    if (enc.lo <= 0 && enc.hi >= 0) continue;
    // Sign settled; tighten to a relative width of 2^-64.
    const int sign = enc.lo > 0 ? 1 : -1;
    for (long k = m + 1; k <= static_cast<long>(kPrefixCap); ++k) {
      const Rational scale = sign > 0 ? enc.lo : Rational(-enc.hi);
      if (enc.width() * (BigInt(1) << 64) <= scale) break;
      const RationalInterval next = bracket(cf, k);
      enc = {next.lo * q - p, next.hi * q - p};
    }
    return {sign, p, std::move(enc)};
  }
  throw Error(ErrorCode::IterationCapExceeded,
              "rotation sign undecided after 10^4 prefix terms (effectively rational input?)");
}

RationalInterval error_ratio_bounds(const CFNumber& cf, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "error_ratio_bounds needs n >= 1");
  const Convergent prev = cf.convergent(static_cast<long>(n) - 1);
  const Convergent cur = cf.convergent(static_cast<long>(n));
  auto ratio_at = [&](const Rational& x) {
    Rational num = prev.q * x - prev.p;
    Rational den = cur.q * x - cur.p;
    Rational r = num / den;
    return r < 0 ? Rational(-r) : r;
  };
  // On a bracket with index >= n+1 neither numerator nor denominator
  // vanishes, so the ratio is monotone there and the endpoints bound it.
  // Starting at n+2 keeps both endpoints off the value a_{n+1} itself.
  RationalInterval out;
  for (long m = static_cast<long>(n) + 2; m < static_cast<long>(n) + 200; ++m) {
    const RationalInterval box = bracket(cf, m);
    out = ordered(ratio_at(box.lo), ratio_at(box.hi));
    if (out.width() * 1000000000 <= out.lo) break;
  }
  return out;
}

nlohmann::json elements_to_json(const std::vector<BigInt>& elements) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : elements) out.push_back(a.get_str());
  return out;
}

std::vector<BigInt> elements_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Config, "element sequence must be a JSON array");
  std::vector<BigInt> out;
  for (const auto& item : j) {
    BigInt v;
    const std::string s = item.is_string() ? item.get<std::string>() : item.dump();
    if (v.set_str(s, 10) != 0 || v < 1) {
      throw Error(ErrorCode::Config, "invalid continued fraction element '" + s + "'");
    }
    out.push_back(std::move(v));
  }
  return out;
}

CFNumber cf_from_json(const nlohmann::json& j) {
  if (j.is_string()) return cf_from_json(nlohmann::json{{"kind", j}});
  const std::string kind = j.value("kind", "");
  if (kind == "biased") return CFNumber::biased();
  if (kind == "golden") return CFNumber::constant(1);
  if (kind == "constant") {
    const auto elems = elements_from_json(nlohmann::json::array({j.at("a")}));
    return CFNumber::constant(elems.front());
  }
  if (kind == "periodic") return CFNumber::periodic(elements_from_json(j.at("period")));
  if (kind == "product") return cf_product(cf_from_json(j.at("odd")), cf_from_json(j.at("even")));
  throw Error(ErrorCode::Config, "unknown continued fraction kind '" + kind + "'");
}

std::string to_string(const BigInt& v) { return v.get_str(); }
std::string to_string(const Rational& v) { return v.get_str(); }

}  // namespace spiral
