#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phlab/phlab.h"

namespace {

std::string cfg(const char* name) { return std::string(PHLAB_CONFIG_DIR) + "/" + name + ".cfg"; }

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strlen(phlab_version()) > 0);
  CHECK(std::string(phlab_status_name(PHLAB_OK)) == "Ok");
  CHECK(std::string(phlab_status_name(PHLAB_NO_GOOD_SEGMENTS)) == "NoGoodSegments");
  CHECK(std::string(phlab_status_name(PHLAB_INTERNAL)) == "Internal");
  CHECK(phlab_command_count() == 11);
  CHECK(std::string(phlab_command_name(0)) == "entropy");
  CHECK(phlab_command_name(99) == nullptr);
}

TEST_CASE("system handles") {
  phlab_system* sys = nullptr;
  REQUIRE(phlab_system_load(cfg("cat").c_str(), &sys) == PHLAB_OK);
  CHECK(phlab_system_dimension(sys) == 2);
  CHECK(phlab_system_has_center(sys) == 0);
  CHECK(phlab_system_degree(sys) == 1);
  double ev[2];
  REQUIRE(phlab_system_eigenvalues(sys, ev) == PHLAB_OK);
  CHECK(ev[0] == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0));
  CHECK(ev[1] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0));
  const double x[2] = {0.5, 0.5};
  double y[2];
  REQUIRE(phlab_system_apply(sys, x, y) == PHLAB_OK);
  CHECK(y[0] == doctest::Approx(0.5));
  CHECK(y[1] == doctest::Approx(0.0));

  char* text = nullptr;
  REQUIRE(phlab_system_to_config(sys, &text) == PHLAB_OK);
  phlab_system* again = nullptr;
  REQUIRE(phlab_system_from_text(text, &again) == PHLAB_OK);
  CHECK(phlab_system_degree(again) == 1);
  phlab_string_free(text);
  phlab_system_free(again);
  phlab_system_free(sys);
  phlab_system_free(nullptr);

  phlab_system* s5 = nullptr;
  REQUIRE(phlab_system_load(cfg("ph_linear").c_str(), &s5) == PHLAB_OK);
  CHECK(phlab_system_has_center(s5) == 1);
  CHECK(phlab_system_degree(s5) == 3);
  phlab_system_free(s5);
}

TEST_CASE("argument errors set the last error") {
  phlab_system* sys = nullptr;
  CHECK(phlab_system_load(nullptr, &sys) == PHLAB_INVALID_ARGUMENT);
  CHECK(std::strlen(phlab_last_error()) > 0);
  CHECK(phlab_system_load(cfg("cat").c_str(), nullptr) == PHLAB_INVALID_ARGUMENT);
  CHECK(phlab_system_load("/nonexistent.cfg", &sys) == PHLAB_CONFIG_ERROR);
  CHECK(sys == nullptr);
  CHECK(phlab_system_from_text("kind = linear\nmatrix = 1 1\n", &sys) == PHLAB_CONFIG_ERROR);
  CHECK(phlab_system_eigenvalues(nullptr, nullptr) == PHLAB_INVALID_ARGUMENT);
  CHECK(phlab_system_dimension(nullptr) == 0);
  phlab_result* res = nullptr;
  CHECK(phlab_run_json("{not json", &res) == PHLAB_CONFIG_ERROR);
  CHECK(res == nullptr);
  CHECK(phlab_set_threads(-1) == PHLAB_INVALID_ARGUMENT);
  CHECK(phlab_set_threads(0) == PHLAB_OK);
}

TEST_CASE("run a command and read its artifacts") {
  const std::string req =
      R"({"command":"entropy","config_path":")" + cfg("doubling") + R"(","seed":3,"delta":0.05,"n_min":2,"n_max":4})";
  phlab_result* res = nullptr;
  REQUIRE(phlab_run_json(req.c_str(), &res) == PHLAB_OK);
  CHECK(phlab_result_exit_code(res) == 0);
  REQUIRE(phlab_result_artifact_count(res) == 2);
  CHECK(std::string(phlab_result_artifact_name(res, 0)) == "entropy.json");
  CHECK(std::string(phlab_result_artifact_content(res, 0)) == phlab_result_json(res));
  CHECK(phlab_result_artifact_name(res, 5) == nullptr);
  CHECK(phlab_result_warning_count(res) == 0);

  char tmpl[] = "/tmp/phlab_capi_XXXXXX";
  REQUIRE(mkdtemp(tmpl) != nullptr);
  REQUIRE(phlab_result_write(res, tmpl) == PHLAB_OK);
  std::ifstream in(std::string(tmpl) + "/entropy_per_n.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == phlab_result_artifact_content(res, 1));
  std::filesystem::remove_all(tmpl);
  phlab_result_free(res);
}

TEST_CASE("failed runs still produce a result") {
  const std::string req = R"({"command":"glue","config_path":")" + cfg("product") + R"(","seed":1})";
  phlab_result* res = nullptr;
  CHECK(phlab_run_json(req.c_str(), &res) == PHLAB_NO_GOOD_SEGMENTS);
  REQUIRE(res != nullptr);
  CHECK(phlab_result_exit_code(res) == 3);
  CHECK(std::string(phlab_result_json(res)).find("\"NoGoodSegments\"") != std::string::npos);
  phlab_result_free(res);

  const std::string missing_seed = R"({"command":"entropy","config_path":")" + cfg("doubling") + R"("})";
  CHECK(phlab_run_json(missing_seed.c_str(), &res) == PHLAB_CONFIG_ERROR);
  REQUIRE(res != nullptr);
  CHECK(phlab_result_exit_code(res) == 2);
  phlab_result_free(res);
}
