#include "spiral/siegel.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>
#include <variant>

#include "spiral/error.hpp"
#include "parallel.hpp"

namespace spiral {

namespace {

constexpr double kSlack = 1e-9;

struct BoxData {
  Box box;
};
struct RegionData {
  RegionSpec spec;
};
struct RadialData {
  int n;
  double r_min;
  double r_max;
};
struct SumData {
  std::vector<std::pair<double, TestFunction>> terms;
};

bool near(double a, double b) { return std::abs(a - b) <= kSlack * std::max(1.0, std::abs(b)); }

std::uint64_t gcd_of(std::span<const std::int64_t> coeffs) {
  std::uint64_t g = 0;
  for (auto c : coeffs) g = std::gcd(g, static_cast<std::uint64_t>(c < 0 ? -c : c));
  return g;
}

}  // namespace

struct TestFunction::Node {
  int dimension;
  std::variant<BoxData, RegionData, RadialData, SumData> data;
};

TestFunction TestFunction::box(Box box) {
  if (box.lo.size() != box.hi.size() || box.lo.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "box needs matching bounds in dimension >= 2");
  }
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    if (!(box.lo[i] <= box.hi[i])) throw Error(ErrorCode::InvalidArgument, "box needs lo <= hi");
  }
  const int n = static_cast<int>(box.lo.size());
  return TestFunction(std::make_shared<const Node>(Node{n, BoxData{std::move(box)}}));
}

TestFunction TestFunction::region(RegionSpec spec) {
  if (!spec.bounded()) throw Error(ErrorCode::UnboundedRegion, "region indicator needs a bounded region");
  const int n = spec.d + 1;
  return TestFunction(std::make_shared<const Node>(Node{n, RegionData{std::move(spec)}}));
}

TestFunction TestFunction::radial(int n, double r_min, double r_max) {
  if (n < 2 || !(r_min >= 0.0) || !(r_max >= r_min) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::InvalidArgument, "radial indicator needs n >= 2 and 0 <= r_min <= r_max");
  }
  return TestFunction(std::make_shared<const Node>(Node{n, RadialData{n, r_min, r_max}}));
}

TestFunction TestFunction::scaled_sum(std::vector<std::pair<double, TestFunction>> terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "scaled sum needs at least one term");
  const int n = terms.front().second.dimension();
  for (const auto& [a, f] : terms) {
    if (f.dimension() != n) throw Error(ErrorCode::InvalidArgument, "scaled sum terms must share a dimension");
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "coefficients must be finite");
  }
  return TestFunction(std::make_shared<const Node>(Node{n, SumData{std::move(terms)}}));
}

int TestFunction::dimension() const { return node_->dimension; }

Box TestFunction::support_box() const {
  return std::visit(
      [&](const auto& data) -> Box {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, BoxData>) {
          return data.box;
        } else if constexpr (std::is_same_v<T, RegionData>) {
          return region_bounding_box(data.spec);
        } else if constexpr (std::is_same_v<T, RadialData>) {
          return {std::vector<double>(static_cast<std::size_t>(data.n), -data.r_max),
                  std::vector<double>(static_cast<std::size_t>(data.n), data.r_max)};
        } else {
          Box out = data.terms.front().second.support_box();
          for (const auto& term : data.terms) {
            const Box b = term.second.support_box();
            for (std::size_t i = 0; i < b.lo.size(); ++i) {
              out.lo[i] = std::min(out.lo[i], b.lo[i]);
              out.hi[i] = std::max(out.hi[i], b.hi[i]);
            }
          }
          return out;
        }
      },
      node_->data);
}

double TestFunction::integral() const {
  return std::visit(
      [&](const auto& data) -> double {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, BoxData>) {
          double v = 1.0;
          for (std::size_t i = 0; i < data.box.lo.size(); ++i) v *= data.box.hi[i] - data.box.lo[i];
          return v;
        } else if constexpr (std::is_same_v<T, RegionData>) {
          return region_volume(data.spec);
        } else if constexpr (std::is_same_v<T, RadialData>) {
          return ball_volume(data.n, data.r_max, Norm::Euclidean) - ball_volume(data.n, data.r_min, Norm::Euclidean);
        } else {
          double s = 0.0;
          for (const auto& [a, f] : data.terms) s += a * f.integral();
          return s;
        }
      },
      node_->data);
}

double TestFunction::operator()(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != node_->dimension) {
    throw Error(ErrorCode::InvalidArgument, "test function evaluated in the wrong dimension");
  }
  return std::visit(
      [&](const auto& data) -> double {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, BoxData>) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < data.box.lo[i] || v[i] > data.box.hi[i]) return 0.0;
          }
          return 1.0;
        } else if constexpr (std::is_same_v<T, RegionData>) {
          return region_contains(data.spec, v) == Membership::Out ? 0.0 : 1.0;
        } else if constexpr (std::is_same_v<T, RadialData>) {
          double r2 = 0.0;
          for (double x : v) r2 += x * x;
          return r2 >= data.r_min * data.r_min && r2 <= data.r_max * data.r_max ? 1.0 : 0.0;
        } else {
          double s = 0.0;
          for (const auto& [a, f] : data.terms) s += a * f(v);
          return s;
        }
      },
      node_->data);
}

double TestFunction::at_lattice_point(const Lattice& lattice, std::span<const std::int64_t> coeffs,
                                      const Eigen::VectorXd& v) const {
  return std::visit(
      [&](const auto& data) -> double {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, BoxData>) {
          bool grazing = false;
          for (long i = 0; i < v.size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            grazing = grazing || near(v(i), data.box.lo[k]) || near(v(i), data.box.hi[k]);
          }
          if (!grazing) return (*this)(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
          const auto exact = lattice.exact_point(coeffs);
          for (std::size_t i = 0; i < exact.size(); ++i) {
            if (exact[i] < Rational(data.box.lo[i]) || exact[i] > Rational(data.box.hi[i])) return 0.0;
          }
          return 1.0;
        } else if constexpr (std::is_same_v<T, RegionData>) {
          return classify_lattice_point(data.spec, lattice, coeffs, v) == Membership::Out ? 0.0 : 1.0;
        } else if constexpr (std::is_same_v<T, RadialData>) {
          const double r2 = v.squaredNorm();
          const double lo2 = data.r_min * data.r_min;
          const double hi2 = data.r_max * data.r_max;
          if (!near(r2, lo2) && !near(r2, hi2)) return r2 >= lo2 && r2 <= hi2 ? 1.0 : 0.0;
          Rational s = 0;
          for (const auto& x : lattice.exact_point(coeffs)) s += x * x;
          const Rational a(data.r_min), b(data.r_max);
          return s >= a * a && s <= b * b ? 1.0 : 0.0;
        } else {
          double s = 0.0;
          for (const auto& [a, f] : data.terms) s += a * f.at_lattice_point(lattice, coeffs, v);
          return s;
        }
      },
      node_->data);
}

nlohmann::json TestFunction::to_json() const {
  return std::visit(
      [&](const auto& data) -> nlohmann::json {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, BoxData>) {
          return {{"type", "box"}, {"lo", data.box.lo}, {"hi", data.box.hi}};
        } else if constexpr (std::is_same_v<T, RegionData>) {
          nlohmann::json j{{"type", "region"},
                           {"kind", data.spec.kind == RegionKind::P ? "P" : "R"},
                           {"d", data.spec.d},
                           {"c", data.spec.c},
                           {"T", data.spec.T},
                           {"eps", data.spec.eps},
                           {"norm", to_string(data.spec.norm)}};
          if (data.spec.A) j["A"] = data.spec.A->to_json();
          return j;
        } else if constexpr (std::is_same_v<T, RadialData>) {
          return {{"type", "radial"}, {"n", data.n}, {"r_min", data.r_min}, {"r_max", data.r_max}};
        } else {
          nlohmann::json terms = nlohmann::json::array();
          for (const auto& [a, f] : data.terms) terms.push_back({{"coefficient", a}, {"f", f.to_json()}});
          return {{"type", "sum"}, {"terms", terms}};
        }
      },
      node_->data);
}

double siegel_transform(const TestFunction& f, const Lattice& lattice, bool primitive_only, std::uint64_t budget) {
  if (f.dimension() != lattice.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "test function and lattice dimensions differ");
  }
  double sum = 0.0;
  for_each_in_box(lattice, f.support_box(), budget,
                  [&](std::span<const std::int64_t> coeffs, const Eigen::VectorXd& v) {
                    if (primitive_only && gcd_of(coeffs) != 1) return;
                    sum += f.at_lattice_point(lattice, coeffs, v);
                  });
  return sum;
}

Eigen::MatrixXd haar_rotation(int n, std::mt19937_64& rng) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "rotation dimension must be >= 2");
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Unique factorization with r_ii > 0 makes q Haar on O(n).
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0) q.col(n - 1) = -q.col(n - 1);
  return q;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

Lattice rotated_flowed(const Lattice& lattice, double t, std::uint64_t seed, std::uint64_t index) {
  const int n = lattice.dimension();
  auto rng = sample_stream(seed, index);
  const Eigen::MatrixXd k = haar_rotation(n, rng);
  return lattice.transformed(g_flow(t, n - 1) * k);
}

void summarize(MCEstimate& e, const std::vector<double>& values, bool keep) {
  const auto M = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / M;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  e.std_error = values.size() > 1 ? std::sqrt(ss / (M - 1.0)) / std::sqrt(M) : 0.0;
  e.samples = values.size();
  if (keep) e.trace = values;
}

}  // namespace

MCEstimate spherical_average(const TestFunction& f, const Lattice& lattice, double t, std::uint64_t M,
                             std::uint64_t seed, const AverageOptions& options) {
  if (M < 2) throw Error(ErrorCode::InvalidArgument, "spherical average needs M >= 2");
  if (f.dimension() != lattice.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "test function and lattice dimensions differ");
  }
  std::vector<double> values(M);
  detail::parallel_samples(M, options.threads, [&](std::uint64_t i) {
    values[i] = siegel_transform(f, rotated_flowed(lattice, t, seed, i), options.primitive_only, options.budget);
  });
  MCEstimate out;
  out.t = t;
  out.seed = seed;
  out.integral_reference = f.integral();
  summarize(out, values, options.trace);
  return out;
}

RatioEstimate thm3_ratio(const Lattice& lattice, const DirectionSet& A, double eps, double t, std::uint64_t M,
                         std::uint64_t seed, double c, Norm norm, const AverageOptions& options) {
  if (M < 2) throw Error(ErrorCode::InvalidArgument, "spherical average needs M >= 2");
  if (!(eps > 0.0)) throw Error(ErrorCode::UnboundedRegion, "the paired ratio needs eps > 0");
  const int d = lattice.dimension() - 1;
  const RegionSpec with_A = RegionSpec::R(d, c, eps, 1.0, norm, A);
  const RegionSpec without = RegionSpec::R(d, c, eps, 1.0, norm);
  std::vector<double> num(M), den(M);
  CountOptions count_options;
  count_options.budget = options.budget;
  // One enumeration per sample yields both counts.
  detail::parallel_samples(M, options.threads, [&](std::uint64_t i) {
    const CountResult r = count_region(rotated_flowed(lattice, t, seed, i), with_A, count_options);
    num[i] = static_cast<double>(r.in_A);
    den[i] = static_cast<double>(r.total);
  });
  RatioEstimate out;
  for (auto* e : {&out.numerator, &out.denominator}) {
    e->t = t;
    e->seed = seed;
  }
  out.numerator.integral_reference = region_volume(with_A);
  out.denominator.integral_reference = region_volume(without);
  summarize(out.numerator, num, options.trace);
  summarize(out.denominator, den, options.trace);
  if (out.denominator.mean == 0.0) {
    throw Error(ErrorCode::DivisionByZero,
                "every sampled denominator is empty; increase t or M");
  }
  out.ratio = out.numerator.mean / out.denominator.mean;
  const auto m = static_cast<double>(M);
  double ss = 0.0;
  for (std::uint64_t i = 0; i < M; ++i) {
    const double r = num[i] - out.ratio * den[i];
    ss += r * r;
  }
  out.std_error = std::sqrt(ss / (m - 1.0)) / (std::sqrt(m) * out.denominator.mean);
  out.reference = A.measure();
  return out;
}

nlohmann::json MCEstimate::to_json() const {
  nlohmann::json j{{"mean", mean},     {"stderr", std_error}, {"M", samples},
                   {"t", t},           {"seed", seed},        {"integral_reference", integral_reference}};
  return j;
}

nlohmann::json RatioEstimate::to_json() const {
  return {{"numerator", numerator.to_json()},
          {"denominator", denominator.to_json()},
          {"ratio", ratio},
          {"ratio_stderr", std_error},
          {"reference", reference}};
}

}  // namespace spiral
