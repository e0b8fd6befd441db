#include "spiral/spiral.h"

#include <cstring>
#include <new>
#include <string>

#include "spiral/error.hpp"
#include "spiral/lattice.hpp"
#include "spiral/run.hpp"

struct spiral_config {
  spiral::RunConfig config;
};

struct spiral_report {
  nlohmann::json report;
  std::string csv;
  nlohmann::json timings = nlohmann::json::array();
};

namespace {

thread_local std::string last_error;

spiral_status fail(spiral_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
spiral_status guard(F f) {
  try {
    last_error.clear();
    return f();
  } catch (const spiral::Error& e) {
    return fail(static_cast<spiral_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SPIRAL_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPIRAL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPIRAL_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* spiral_version(void) { return "1.0.0"; }

const char* spiral_status_name(spiral_status status) {
  if (status == SPIRAL_OK) return "Ok";
  return spiral::error_code_name(static_cast<spiral::ErrorCode>(status));
}

const char* spiral_last_error(void) { return last_error.c_str(); }

void spiral_string_free(char* s) { delete[] s; }

spiral_status spiral_set_candidate_budget(uint64_t budget) {
  return guard([&] {
    spiral::set_default_candidate_budget(budget);
    return SPIRAL_OK;
  });
}

uint64_t spiral_candidate_budget(void) { return spiral::default_candidate_budget(); }

spiral_status spiral_config_new(spiral_config** out) {
  if (!out) return fail(SPIRAL_INVALID_ARGUMENT, "null output pointer");
  return guard([&] {
    *out = new spiral_config{};
    return SPIRAL_OK;
  });
}

spiral_status spiral_config_from_json(const char* json, spiral_config** out) {
  if (!json || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const auto j = nlohmann::json::parse(json);
    *out = new spiral_config{spiral::RunConfig::from_json(j)};
    return SPIRAL_OK;
  });
}

spiral_status spiral_config_set(spiral_config* config, const char* key, const char* json_value) {
  if (!config || !key || !json_value) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto j = config->config.to_json();
    j[key] = nlohmann::json::parse(json_value);
    config->config = spiral::RunConfig::from_json(j);
    return SPIRAL_OK;
  });
}

spiral_status spiral_config_to_json(const spiral_config* config, char** out) {
  if (!config || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = copy_string(config->config.to_json().dump(2));
    return SPIRAL_OK;
  });
}

void spiral_config_free(spiral_config* config) { delete config; }

spiral_status spiral_run(const spiral_config* config, spiral_report** out) {
  if (!config || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto result = spiral::run(config->config);
    *out = new spiral_report{std::move(result.report), std::move(result.csv)};
    return SPIRAL_OK;
  });
}

spiral_status spiral_verify(int quick, uint64_t seed, int threads, spiral_report** out) {
  if (!out) return fail(SPIRAL_INVALID_ARGUMENT, "null output pointer");
  return guard([&] {
    spiral::VerifyOptions o;
    o.quick = quick != 0;
    o.seed = seed;
    o.threads = threads < 1 ? 1 : threads;
    const auto r = spiral::verify(o);
    *out = new spiral_report{r.to_json(), std::string(), r.timings()};
    if (!r.passed()) return fail(SPIRAL_ACCEPTANCE_FAILURE, "one or more acceptance criteria failed");
    return SPIRAL_OK;
  });
}

spiral_status spiral_report_json(const spiral_report* report, char** out) {
  if (!report || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = copy_string(report->report.dump(2));
    return SPIRAL_OK;
  });
}

spiral_status spiral_report_csv(const spiral_report* report, char** out) {
  if (!report || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = copy_string(report->csv);
    return SPIRAL_OK;
  });
}

spiral_status spiral_report_timings(const spiral_report* report, char** out) {
  if (!report || !out) return fail(SPIRAL_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = copy_string(report->timings.dump());
    return SPIRAL_OK;
  });
}

void spiral_report_free(spiral_report* report) { delete report; }

}  // extern "C"
