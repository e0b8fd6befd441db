#include "spiral/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "spiral/error.hpp"

namespace spiral {

DirectionSet default_direction_set(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  if (d == 1) return DirectionSet::sign_set(true, false);
  std::vector<double> axis(static_cast<std::size_t>(d), 0.0);
  axis[0] = 1.0;
  return DirectionSet::hemisphere(std::move(axis));
}

// ---- uniform random x ------------------------------------------------------

Thm1Report thm1_experiment(const Thm1Options& o) {
  if (o.d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  if (o.T < 10) throw Error(ErrorCode::InvalidArgument, "T must be >= 10");
  if (o.num_points < 1) throw Error(ErrorCode::InvalidArgument, "num_points must be >= 1");
  ApproxOptions ao;
  ao.norm = o.norm;
  ao.C = o.C;
  ao.A = o.A ? *o.A : default_direction_set(o.d);
  if (ao.A->dimension() != o.d) throw Error(ErrorCode::InvalidArgument, "A must live on S^{d-1}");

  Thm1Report report;
  report.reference = ao.A->measure();
  report.samples.resize(o.num_points);
  detail::parallel_samples(o.num_points, o.threads, [&](std::uint64_t i) {
    auto rng = sample_stream(o.seed, i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Thm1Sample& s = report.samples[i];
    for (int k = 0; k < o.d; ++k) {
      double v = 0.0;
      while (v == 0.0) v = unit(rng);
      s.x.push_back(v);
    }
    try {
      const auto r = count_approximates(s.x, o.T, ao);
      s.total = r.total;
      s.in_A = r.in_A;
      s.ratio = r.total > 0 ? static_cast<double>(r.in_A) / static_cast<double>(r.total) : 0.0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRational) throw;
      s.skipped = true;
    }
  });

  double sum = 0.0, n = 0.0;
  for (const auto& s : report.samples) {
    if (s.skipped || s.total == 0) {
      report.skipped += s.skipped ? 1 : 0;
      continue;
    }
    sum += s.ratio;
    n += 1.0;
  }
  if (n == 0.0) throw Error(ErrorCode::EmptyDenominator, "no sample had an approximate");
  report.mean_ratio = sum / n;
  double ss = 0.0;
  for (const auto& s : report.samples) {
    if (!s.skipped && s.total > 0) ss += (s.ratio - report.mean_ratio) * (s.ratio - report.mean_ratio);
  }
  report.stddev = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return report;
}

nlohmann::json Thm1Report::to_json() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& s : samples) {
    records.push_back({{"x", s.x}, {"total", s.total}, {"in_A", s.in_A}, {"ratio", s.ratio}, {"skipped", s.skipped}});
  }
  return {{"records", records},
          {"summary",
           {{"mean_ratio", mean_ratio},
            {"stddev", stddev},
            {"reference", reference},
            {"deviation", mean_ratio - reference},
            {"skipped", skipped}}}};
}

// ---- dyadic shelling -------------------------------------------------------

BirkhoffReport birkhoff_experiment(const Lattice& lattice, int N_max, double c, Norm norm,
                                   const std::optional<DirectionSet>& A, std::uint64_t budget) {
  if (N_max < 2 || N_max > 60) throw Error(ErrorCode::InvalidArgument, "N_max must lie in [2, 60]");
  const int d = lattice.dimension() - 1;
  CountOptions opts;
  opts.budget = budget;
  // g_{-s} Q_i = Q_{i+1} with s = log 2 / d.
  const Lattice shifted = lattice.transformed(g_flow(std::numbers::ln2 / d, d));

  BirkhoffReport report;
  report.reference = region_volume(RegionSpec::P(d, c, 2.0, norm));
  report.reference_in_A = A ? region_volume(RegionSpec::P(d, c, 2.0, norm, A)) : report.reference;

  std::uint64_t cumulative = 0, cumulative_in_A = 0;
  for (int N = 1; N <= N_max; ++N) {
    BirkhoffStep step;
    step.N = N;
    const auto shell = shell_count(lattice, N, c, norm, A, opts);
    step.shell = shell.total;
    step.shell_in_A = A ? shell.in_A : shell.total;
    cumulative += step.shell;
    cumulative_in_A += step.shell_in_A;
    step.cumulative = cumulative;
    step.cumulative_in_A = cumulative_in_A;
    step.direct = count_region(lattice, RegionSpec::P(d, c, std::ldexp(1.0, N), norm), opts).total;
    if (N >= 2) {
      const auto moved = shell_count(shifted, N - 1, c, norm, A, opts);
      step.equivariant = moved.total == shell.total && (!A || moved.in_A == shell.in_A);
    }
    step.average = static_cast<double>(cumulative) / N;
    step.average_in_A = static_cast<double>(cumulative_in_A) / N;
    report.additive = report.additive && step.direct == step.cumulative;
    report.equivariant = report.equivariant && step.equivariant;
    report.steps.push_back(step);
  }
  return report;
}

nlohmann::json BirkhoffReport::to_json() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& s : steps) {
    records.push_back({{"N", s.N},
                       {"shell", s.shell},
                       {"shell_in_A", s.shell_in_A},
                       {"cumulative", s.cumulative},
                       {"cumulative_in_A", s.cumulative_in_A},
                       {"direct", s.direct},
                       {"equivariant", s.equivariant},
                       {"average", s.average},
                       {"average_in_A", s.average_in_A}});
  }
  const auto& last = steps.back();
  return {{"records", records},
          {"summary",
           {{"reference", reference},
            {"reference_in_A", reference_in_A},
            {"final_average", last.average},
            {"final_ratio", last.cumulative > 0 ? last.average_in_A / last.average : 0.0},
            {"relative_deviation", (last.average - reference) / reference},
            {"additive", additive},
            {"equivariant", equivariant}}}};
}

// ---- non-minimal diagonal ---------------------------------------------------

NonminimalReport nonminimal_experiment(int d, const CFNumber& x_base, std::uint64_t T, std::uint64_t q_min,
                                       Norm norm, double C) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "the diagonal example needs d >= 2");
  NonminimalReport report;
  report.d = d;
  report.alpha = x_base.to_double();
  report.T = T;
  report.q_min = q_min;
  const std::vector<double> x(static_cast<std::size_t>(d), report.alpha);

  std::vector<double> centre(static_cast<std::size_t>(d), 0.0);
  centre[0] = 1.0;
  centre[1] = -1.0;
  const auto cap = DirectionSet::cap(centre, std::numbers::pi / 4);

  ApproxOptions ao;
  ao.norm = norm;
  ao.C = C;
  ao.witnesses = true;
  const auto found = count_approximates(x, T, ao);
  report.total = found.total;
  const double s = std::numbers::sqrt2 / 2;
  for (const auto& w : found.witnesses) {
    const double q = w.back();
    if (q < static_cast<double>(q_min)) continue;
    ++report.late;
    const auto u = direction(std::span<const double>(w.data(), static_cast<std::size_t>(d)));
    report.max_off_diagonal = std::max(report.max_off_diagonal, std::abs(u[0] - u[1]));
    if (d == 2) {
      const double plus = std::hypot(u[0] - s, u[1] - s);
      const double minus = std::hypot(u[0] + s, u[1] + s);
      report.max_axis_distance = std::max(report.max_axis_distance, std::min(plus, minus));
    }
    if (cap.contains(u)) ++report.late_in_disjoint_cap;
  }
  return report;
}

nlohmann::json NonminimalReport::to_json() const {
  return {{"summary",
           {{"d", d},
            {"alpha", alpha},
            {"T", T},
            {"q_min", q_min},
            {"total", total},
            {"late", late},
            {"max_off_diagonal", max_off_diagonal},
            {"max_axis_distance", max_axis_distance},
            {"late_in_disjoint_cap", late_in_disjoint_cap}}}};
}

}  // namespace spiral
