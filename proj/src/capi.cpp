#include "phlab/phlab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "phlab/commands.hpp"
#include "phlab/config.hpp"
#include "phlab/error.hpp"
#include "phlab/parallel.hpp"

struct phlab_system {
  phlab::SystemSpec spec;
};

struct phlab_result {
  phlab::RunResult run;
};

namespace {

thread_local std::string last_error;

phlab_status record(phlab::ErrorCode code, const std::string& message) {
  last_error = message;
  return static_cast<phlab_status>(code);
}

// Runs body and converts exceptions into status codes. Nothing crosses the C boundary.
template <class F>
phlab_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return PHLAB_OK;
  } catch (const phlab::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(phlab::ErrorCode::Internal, "out of memory");
  } catch (const std::exception& e) {
    return record(phlab::ErrorCode::Internal, e.what());
  } catch (...) {
    return record(phlab::ErrorCode::Internal, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (!p) phlab::fail(phlab::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* phlab_version(void) { return "0.1.0"; }

const char* phlab_status_name(phlab_status status) {
  if (status < PHLAB_OK || status > PHLAB_INTERNAL) return "Unknown";
  return phlab::error_name(static_cast<phlab::ErrorCode>(status));
}

const char* phlab_last_error(void) { return last_error.c_str(); }

void phlab_string_free(char* s) { std::free(s); }

phlab_status phlab_set_threads(int threads) {
  return guarded([&] {
    if (threads < 0) phlab::fail(phlab::ErrorCode::InvalidArgument, "threads must be >= 0");
    phlab::set_thread_cap(threads);
  });
}

phlab_status phlab_system_load(const char* path, phlab_system** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new phlab_system{phlab::load_system(path)};
  });
}

phlab_status phlab_system_from_text(const char* config_text, phlab_system** out) {
  return guarded([&] {
    require(config_text, "config_text");
    require(out, "out");
    *out = nullptr;
    *out = new phlab_system{phlab::system_from_config(config_text)};
  });
}

void phlab_system_free(phlab_system* sys) { delete sys; }

int phlab_system_dimension(const phlab_system* sys) { return sys ? sys->spec.dim() : 0; }

int phlab_system_has_center(const phlab_system* sys) { return sys && sys->spec.has_center() ? 1 : 0; }

long long phlab_system_degree(const phlab_system* sys) { return sys ? sys->spec.degree() : 0; }

phlab_status phlab_system_eigenvalues(const phlab_system* sys, double* out) {
  return guarded([&] {
    require(sys, "sys");
    require(out, "out");
    const auto& eig = sys->spec.eigendata();
    for (std::size_t i = 0; i < eig.size(); ++i) out[i] = eig[i].value;
  });
}

phlab_status phlab_system_apply(const phlab_system* sys, const double* x, double* y) {
  return guarded([&] {
    require(sys, "sys");
    require(x, "x");
    require(y, "y");
    const int d = sys->spec.dim();
    phlab::Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = x[i];
    const phlab::TorusPoint fx = sys->spec.apply(phlab::TorusPoint(v));
    for (int i = 0; i < d; ++i) y[i] = fx[i];
  });
}

phlab_status phlab_system_to_config(const phlab_system* sys, char** out) {
  return guarded([&] {
    require(sys, "sys");
    require(out, "out");
    *out = copy_string(phlab::system_to_config(sys->spec));
  });
}

size_t phlab_command_count(void) { return phlab::command_names().size(); }

const char* phlab_command_name(size_t index) {
  const auto& names = phlab::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

phlab_status phlab_run_json(const char* request_json, phlab_result** out) {
  phlab::ErrorCode run_code = phlab::ErrorCode::Ok;
  std::string run_message;
  const phlab_status st = guarded([&] {
    require(request_json, "request_json");
    require(out, "out");
    *out = nullptr;
    const phlab::RunConfig cfg = phlab::run_config_from_json(request_json);
    auto* res = new phlab_result{phlab::run_command(cfg)};
    *out = res;
    if (res->run.exit_code != 0) {
      run_code = res->run.exit_code == 2 ? phlab::ErrorCode::ConfigError : phlab::ErrorCode::Internal;
      for (int c = 0; c <= static_cast<int>(phlab::ErrorCode::Internal); ++c)
        if (res->run.error_code == phlab::error_name(static_cast<phlab::ErrorCode>(c)))
          run_code = static_cast<phlab::ErrorCode>(c);
      run_message = res->run.error_message;
    }
  });
  if (st != PHLAB_OK) return st;
  if (run_code != phlab::ErrorCode::Ok) return record(run_code, run_message);
  return PHLAB_OK;
}

void phlab_result_free(phlab_result* res) { delete res; }

int phlab_result_exit_code(const phlab_result* res) { return res ? res->run.exit_code : -1; }

const char* phlab_result_json(const phlab_result* res) { return res ? res->run.json.c_str() : nullptr; }

size_t phlab_result_warning_count(const phlab_result* res) { return res ? res->run.warnings.size() : 0; }

const char* phlab_result_warning(const phlab_result* res, size_t index) {
  if (!res || index >= res->run.warnings.size()) return nullptr;
  return res->run.warnings[index].c_str();
}

size_t phlab_result_artifact_count(const phlab_result* res) { return res ? res->run.artifacts.size() : 0; }

const char* phlab_result_artifact_name(const phlab_result* res, size_t index) {
  if (!res || index >= res->run.artifacts.size()) return nullptr;
  return res->run.artifacts[index].name.c_str();
}

const char* phlab_result_artifact_content(const phlab_result* res, size_t index) {
  if (!res || index >= res->run.artifacts.size()) return nullptr;
  return res->run.artifacts[index].content.c_str();
}

phlab_status phlab_result_write(const phlab_result* res, const char* directory) {
  return guarded([&] {
    require(res, "res");
    require(directory, "directory");
    phlab::write_artifacts(res->run, directory);
  });
}

}  // extern "C"
