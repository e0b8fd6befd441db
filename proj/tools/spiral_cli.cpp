// Command-line front end. Talks to the library only through spiral.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spiral/spiral.h"

namespace {

int exit_code(spiral_status s) {
  switch (s) {
    case SPIRAL_OK: return 0;
    case SPIRAL_CONFIG:
    case SPIRAL_INVALID_ARGUMENT:
    case SPIRAL_UNBOUNDED_REGION:
    case SPIRAL_EMPTY_DENOMINATOR: return 2;
    case SPIRAL_BUDGET_EXCEEDED: return 3;
    case SPIRAL_ACCEPTANCE_FAILURE: return 4;
    default: return 1;
  }
}

int report_error(spiral_status s, const std::string& message) {
  const nlohmann::json err = {
      {"error", {{"status", spiral_status_name(s)}, {"code", static_cast<int>(s)}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return exit_code(s);
}

int report_error(spiral_status s) { return report_error(s, spiral_last_error()); }

std::string take(char* s) {
  std::string out(s ? s : "");
  spiral_string_free(s);
  return out;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return {};
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Flags given on the command line, as JSON values keyed by config field.
struct Overrides {
  std::vector<std::pair<std::string, nlohmann::json>> values;
  template <class T>
  void add(const std::string& key, const std::optional<T>& v) {
    if (v) values.emplace_back(key, nlohmann::json(*v));
  }
};

void print_census_table(const nlohmann::json& report) {
  const auto& L = report["summary"]["L"];
  std::fprintf(stderr, "%4s %10s %10s\n", "n", "L_n", "bound");
  for (const auto& row : L) {
    std::fprintf(stderr, "%4d %10llu %10s\n", row["n"].get<int>(),
                 static_cast<unsigned long long>(row["L"].get<std::uint64_t>()), row["bound"].get<std::string>().c_str());
  }
}

int run_command(const std::string& experiment, const std::string& config_path, const Overrides& overrides,
                bool print_only) {
  std::string text = "{}";
  if (!config_path.empty()) {
    text = read_file(config_path);
    if (text.empty()) return report_error(SPIRAL_CONFIG, "cannot read config file '" + config_path + "'");
  }
  spiral_config* cfg = nullptr;
  spiral_status s = spiral_config_from_json(text.c_str(), &cfg);
  if (s != SPIRAL_OK) return report_error(s);
  auto set = [&](const std::string& key, const nlohmann::json& value) {
    return spiral_config_set(cfg, key.c_str(), value.dump().c_str());
  };
  if (!experiment.empty()) s = set("experiment", experiment);
  for (const auto& [key, value] : overrides.values) {
    if (s == SPIRAL_OK) s = set(key, value);
  }
  if (s != SPIRAL_OK) {
    const int code = report_error(s);
    spiral_config_free(cfg);
    return code;
  }
  char* cfg_text = nullptr;
  spiral_config_to_json(cfg, &cfg_text);
  const auto cfg_json = nlohmann::json::parse(take(cfg_text));
  if (print_only) {
    std::cout << cfg_json.dump(2) << '\n';
    spiral_config_free(cfg);
    return 0;
  }

  spiral_report* rep = nullptr;
  s = spiral_run(cfg, &rep);
  spiral_config_free(cfg);
  if (s != SPIRAL_OK) return report_error(s);
  char* json = nullptr;
  char* csv = nullptr;
  spiral_report_json(rep, &json);
  spiral_report_csv(rep, &csv);
  spiral_report_free(rep);
  const std::string report = take(json) + "\n", trace = take(csv);

  const std::string out = cfg_json.value("out", ""), csv_path = cfg_json.value("csv", "");
  if (out.empty()) {
    std::cout << report;
  } else if (!write_file(out, report)) {
    return report_error(SPIRAL_CONFIG, "cannot write '" + out + "'");
  }
  if (!trace.empty()) {
    const std::string path = csv_path.empty() ? cfg_json["experiment"].get<std::string>() + ".csv" : csv_path;
    if (!write_file(path, trace)) return report_error(SPIRAL_CONFIG, "cannot write '" + path + "'");
    std::cerr << "trace written to " << path << '\n';
  }
  const auto parsed = nlohmann::json::parse(report);
  if (parsed["experiment"] == "biased-census") print_census_table(parsed);
  return 0;
}

int verify_command(bool quick, std::uint64_t seed, int threads, const std::string& out) {
  spiral_report* rep = nullptr;
  const spiral_status s = spiral_verify(quick ? 1 : 0, seed, threads, &rep);
  if (!rep) return report_error(s);
  char* json = nullptr;
  char* timings = nullptr;
  spiral_report_json(rep, &json);
  spiral_report_timings(rep, &timings);
  spiral_report_free(rep);
  const std::string report = take(json) + "\n";
  const auto parsed = nlohmann::json::parse(report);
  const auto times = nlohmann::json::parse(take(timings));
  for (std::size_t i = 0; i < parsed["criteria"].size(); ++i) {
    const auto& c = parsed["criteria"][i];
    const double secs = times[i]["seconds"].get<double>(), limit = times[i]["limit"].get<double>();
    char line[256];
    std::snprintf(line, sizeof line, "criterion %2d  %s  %-40s %8.2f s", c["id"].get<int>(),
                  c["passed"].get<bool>() ? "PASS" : "FAIL", c["name"].get<std::string>().c_str(), secs);
    std::cout << line;
    if (limit > 0) std::cout << "  (limit " << limit << " s)";
    std::cout << '\n';
  }
  std::cout << (s == SPIRAL_OK ? "all criteria passed" : "some criteria FAILED") << '\n';
  if (!out.empty() && !write_file(out, report)) return report_error(SPIRAL_CONFIG, "cannot write '" + out + "'");
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-point spirals: experiments and acceptance checks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment");
  std::string experiment, config_path;
  bool print_config = false;
  std::optional<int> d, nmax, N_max, threads;
  std::optional<double> c, C, eps;
  std::optional<std::uint64_t> T, M, n, seed, q_min, budget;
  std::optional<std::string> A, norm, out, csv, x_base;
  std::vector<double> t, x;
  run->add_option("experiment", experiment, "thm1 | birkhoff | thm3 | biased-census | biased-ratio | nonminimal");
  run->add_option("--config", config_path, "JSON config file; flags override its fields");
  run->add_flag("--print-config", print_config, "print the effective config and exit");
  run->add_option("--d", d, "dimension of x");
  run->add_option("--c", c, "thinning constant c");
  run->add_option("--C", C, "approximation constant C");
  run->add_option("--eps", eps, "lower height fraction");
  run->add_option("--T", T, "height bound");
  run->add_option("--t", t, "flow times (repeatable)");
  run->add_option("--A", A, "direction set: sign:-1, hemisphere:1,0, cap:1,0:0.5, complement:<spec>");
  run->add_option("--norm", norm, "euclidean | sup");
  run->add_option("--M", M, "Monte Carlo samples");
  run->add_option("--n", n, "number of random x");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--nmax", nmax, "last census window (<= 9)");
  run->add_option("--N-max", N_max, "number of dyadic shells");
  run->add_option("--q-min", q_min, "smallest q checked by nonminimal");
  run->add_option("--x", x, "coordinates of x for birkhoff");
  run->add_option("--x-base", x_base, "continued fraction JSON for nonminimal");
  run->add_option("--budget", budget, "enumeration candidate budget");
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--out", out, "report JSON path (default stdout)");
  run->add_option("--csv", csv, "CSV trace path");

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  bool quick = false;
  std::uint64_t vseed = 0;
  int vthreads = 1;
  std::string vout;
  ver->add_flag("--quick", quick, "stop the biased census at n = 7");
  ver->add_option("--seed", vseed, "random seed");
  ver->add_option("--threads", vthreads, "worker threads");
  ver->add_option("--out", vout, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) {
    Overrides o;
    o.add("d", d);
    o.add("c", c);
    o.add("C", C);
    o.add("eps", eps);
    o.add("T", T);
    if (!t.empty()) o.values.emplace_back("t", t);
    o.add("A", A);
    o.add("norm", norm);
    o.add("M", M);
    o.add("n", n);
    o.add("seed", seed);
    o.add("nmax", nmax);
    o.add("N_max", N_max);
    o.add("q_min", q_min);
    if (!x.empty()) o.values.emplace_back("x", x);
    if (x_base) {
      try {
        o.values.emplace_back("x_base", nlohmann::json::parse(*x_base));
      } catch (const nlohmann::json::exception& e) {
        return report_error(SPIRAL_CONFIG, std::string("--x-base: ") + e.what());
      }
    }
    o.add("budget", budget);
    o.add("threads", threads);
    o.add("out", out);
    o.add("csv", csv);
    return run_command(experiment, config_path, o, print_config);
  }
  return verify_command(quick, vseed, vthreads, vout);
}
