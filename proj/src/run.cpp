#include "spiral/run.hpp"

#include <cmath>
#include <random>

#include "spiral/error.hpp"
#include "spiral/experiments.hpp"

namespace spiral {

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
  try {
    field = j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config field '") + key + "': " + e.what());
  }
}

Norm norm_or(const RunConfig& cfg, Norm fallback) {
  return cfg.norm.empty() ? fallback : norm_from_string(cfg.norm);
}

DirectionSet direction_set_or_default(const RunConfig& cfg) {
  if (cfg.A.empty()) return default_direction_set(cfg.d);
  auto A = DirectionSet::parse(cfg.A);
  if (A.dimension() != cfg.d) throw Error(ErrorCode::Config, "A must live on S^{d-1} with d = " + std::to_string(cfg.d));
  return A;
}

std::uint64_t budget_of(const RunConfig& cfg) {
  return cfg.budget > 0 ? cfg.budget : default_candidate_budget();
}

nlohmann::json run_thm1(const RunConfig& cfg) {
  Thm1Options o;
  o.d = cfg.d;
  o.num_points = cfg.n;
  o.T = cfg.T;
  o.A = direction_set_or_default(cfg);
  o.norm = norm_or(cfg, Norm::Sup);
  o.C = cfg.C;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  return thm1_experiment(o).to_json();
}

nlohmann::json run_birkhoff(const RunConfig& cfg) {
  std::vector<double> x = cfg.x;
  if (x.empty()) {
    auto rng = sample_stream(cfg.seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < cfg.d; ++i) x.push_back(unit(rng));
  }
  if (static_cast<int>(x.size()) != cfg.d) throw Error(ErrorCode::Config, "x must have d coordinates");
  std::optional<DirectionSet> A;
  if (!cfg.A.empty()) A = direction_set_or_default(cfg);
  auto out = birkhoff_experiment(Lattice::from_x(x), cfg.N_max, cfg.c, norm_or(cfg, Norm::Sup), A, budget_of(cfg))
                 .to_json();
  out["summary"]["x"] = x;
  return out;
}

nlohmann::json run_thm3(const RunConfig& cfg) {
  if (cfg.t.empty()) throw Error(ErrorCode::Config, "thm3 needs at least one t");
  const auto A = cfg.A.empty() ? DirectionSet::hemisphere([&] {
    std::vector<double> axis(static_cast<std::size_t>(cfg.d), 0.0);
    axis[0] = 1.0;
    return axis;
  }())
                               : direction_set_or_default(cfg);
  AverageOptions opts;
  opts.budget = budget_of(cfg);
  opts.threads = cfg.threads;
  const auto L = Lattice::integer(cfg.d + 1);
  nlohmann::json records = nlohmann::json::array();
  for (double t : cfg.t) {
    const auto r = thm3_ratio(L, A, cfg.eps, t, cfg.M, cfg.seed, cfg.c, norm_or(cfg, Norm::Euclidean), opts);
    auto rec = r.to_json();
    rec["t"] = t;
    records.push_back(rec);
  }
  return {{"records", records}, {"summary", {{"reference_ratio", A.measure()}}}};
}

Census census_for(const RunConfig& cfg) {
  if (cfg.nmax < 1 || cfg.nmax > 9) throw Error(ErrorCode::Config, "nmax must lie in [1, 9]");
  return biased_census(cfg.nmax, true);
}

nlohmann::json census_summary(const Census& census) {
  nlohmann::json L = nlohmann::json::array();
  for (const auto& w : census.windows) {
    L.push_back({{"n", w.n}, {"L", w.L}, {"bound", to_string(census_lower_bound(w.n))}});
  }
  return L;
}

RunOutput run_census(const RunConfig& cfg) {
  const auto census = census_for(cfg);
  RunOutput out;
  out.report = {{"records", census.to_json()["windows"]}, {"summary", {{"L", census_summary(census)}}}};
  out.csv = census.rows_csv();
  return out;
}

nlohmann::json run_biased_ratio(const RunConfig& cfg) {
  if (cfg.d != 1) throw Error(ErrorCode::Config, "biased-ratio needs d = 1");
  const auto census = census_for(cfg);
  const auto A = direction_set_or_default(cfg);
  const auto report = biased_ratio(census, default_thresholds(cfg.nmax), A, cfg.eps);
  auto j = report.to_json();
  const auto& last = report.rows.back();
  return {{"records", j["rows"]},
          {"summary",
           {{"eps", j["eps"]},
            {"final_T", to_string(last.threshold.T)},
            {"final_ratio", last.ratio},
            {"reference", A.measure()},
            {"L", census_summary(census)}}}};
}

nlohmann::json run_nonminimal(const RunConfig& cfg) {
  if (cfg.d < 2) throw Error(ErrorCode::Config, "nonminimal needs d >= 2 (set \"d\" or --d)");
  return nonminimal_experiment(cfg.d, cf_from_json(cfg.x_base), cfg.T, cfg.q_min, norm_or(cfg, Norm::Sup), cfg.C)
      .to_json();
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  return {{"experiment", experiment}, {"d", d},         {"c", c},           {"C", C},
          {"eps", eps},               {"T", T},         {"t", t},           {"A", A},
          {"norm", norm},             {"M", M},         {"n", n},           {"seed", seed},
          {"nmax", nmax},             {"N_max", N_max}, {"q_min", q_min},   {"x", x},
          {"x_base", x_base},         {"budget", budget}, {"threads", threads}, {"out", out},
          {"csv", csv}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "experiment") read(value, k, cfg.experiment);
    else if (key == "d") read(value, k, cfg.d);
    else if (key == "c") read(value, k, cfg.c);
    else if (key == "C") read(value, k, cfg.C);
    else if (key == "eps") read(value, k, cfg.eps);
    else if (key == "T") read(value, k, cfg.T);
    else if (key == "t") {
      if (value.is_number()) cfg.t = {value.get<double>()};
      else read(value, k, cfg.t);
    } else if (key == "A") read(value, k, cfg.A);
    else if (key == "norm") read(value, k, cfg.norm);
    else if (key == "M") read(value, k, cfg.M);
    else if (key == "n") read(value, k, cfg.n);
    else if (key == "seed") read(value, k, cfg.seed);
    else if (key == "nmax") read(value, k, cfg.nmax);
    else if (key == "N_max") read(value, k, cfg.N_max);
    else if (key == "q_min") read(value, k, cfg.q_min);
    else if (key == "x") read(value, k, cfg.x);
    else if (key == "x_base") cfg.x_base = value;
    else if (key == "budget") read(value, k, cfg.budget);
    else if (key == "threads") read(value, k, cfg.threads);
    else if (key == "out") read(value, k, cfg.out);
    else if (key == "csv") read(value, k, cfg.csv);
    else throw Error(ErrorCode::Config, "unknown config field '" + key + "'");
  }
  return cfg;
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"thm1", "birkhoff", "thm3", "biased-census", "biased-ratio",
                                               "nonminimal"};
  return ids;
}

RunOutput run(const RunConfig& cfg) {
  if (cfg.d < 1 || cfg.d > 8) throw Error(ErrorCode::Config, "d must lie in [1, 8]");
  if (cfg.threads < 1) throw Error(ErrorCode::Config, "threads must be >= 1");
  if (!cfg.norm.empty()) norm_from_string(cfg.norm);
  RunOutput out;
  const std::string& id = cfg.experiment;
  if (id == "thm1") out.report = run_thm1(cfg);
  else if (id == "birkhoff") out.report = run_birkhoff(cfg);
  else if (id == "thm3") out.report = run_thm3(cfg);
  else if (id == "biased-census") out = run_census(cfg);
  else if (id == "biased-ratio") out.report = run_biased_ratio(cfg);
  else if (id == "nonminimal") out.report = run_nonminimal(cfg);
  else throw Error(ErrorCode::Config, "unknown experiment '" + id + "'");

  nlohmann::json params = cfg.to_json();
  params.erase("out");
  params.erase("csv");
  params.erase("threads");
  nlohmann::json report = {{"experiment", id}, {"parameters", params}, {"seed", cfg.seed}};
  report["records"] = out.report.value("records", nlohmann::json::array());
  report["summary"] = out.report.value("summary", nlohmann::json::object());
  out.report = std::move(report);
  return out;
}

}  // namespace spiral
