#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "hsgate/hsgate.h"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hsgate_capi_" + name)).string();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  hsgate_string_free(s);
  return out;
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("version and error channel") {
  CHECK(std::strlen(hsgate_version()) > 0);
  hsgate_config* cfg = nullptr;
  CHECK(hsgate_config_load("/no/such/config.json", &cfg) == HSGATE_ERR_IO);
  CHECK(cfg == nullptr);
  CHECK(std::string(hsgate_last_error()).find("/no/such/config.json") != std::string::npos);
  CHECK(hsgate_config_load(nullptr, &cfg) == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_config_parse("{not json", &cfg) == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_config_renewal(0, 600, 1, 0, &cfg) == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_config_orgate("", 600, &cfg) == HSGATE_ERR_VALIDATION);
}

TEST_CASE("renewal simulation through the C interface") {
  hsgate_config* cfg = nullptr;
  REQUIRE(hsgate_config_renewal(3, 600, 1, 0, &cfg) == HSGATE_OK);
  CHECK(hsgate_config_set_rates(cfg, NAN, 1.3e6, NAN) == HSGATE_OK);
  CHECK(hsgate_config_set_tolerances(cfg, 1e-8, 1e-15) == HSGATE_OK);
  CHECK(hsgate_config_set_tolerances(cfg, -1, 1e-15) == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_config_set_normalization(cfg, "fixed:150") == HSGATE_OK);
  CHECK(hsgate_config_set_normalization(cfg, "fixed:0") == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_config_set_seed(cfg, 42) == HSGATE_OK);
  std::uint64_t seed = 0;
  CHECK(hsgate_config_get_seed(cfg, &seed) == HSGATE_OK);
  CHECK(seed == 42);
  CHECK(hsgate_config_set_output_dt(cfg, 5) == HSGATE_OK);

  char* dump = nullptr;
  REQUIRE(hsgate_config_network_dump(cfg, &dump) == HSGATE_OK);
  CHECK(lines(take(dump)) == 11);
  char* json = nullptr;
  REQUIRE(hsgate_config_to_json(cfg, &json) == HSGATE_OK);
  CHECK(take(json).find("\"events\"") != std::string::npos);

  hsgate_trace* tr = nullptr;
  REQUIRE(hsgate_simulate(cfg, &tr) == HSGATE_OK);
  CHECK(hsgate_trace_length(tr) > 700);
  CHECK(hsgate_trace_event_count(tr) == 6);
  double t = 0;
  CHECK(hsgate_trace_event_time(tr, 0, &t) == HSGATE_OK);
  CHECK(t == 600);
  CHECK(hsgate_trace_event_time(tr, 6, &t) == HSGATE_ERR_VALIDATION);
  CHECK(std::string(hsgate_trace_species_name(tr, 0)) == "G");
  CHECK(hsgate_trace_species_name(tr, 999) == nullptr);
  double g0 = 0, sig = -1;
  CHECK(hsgate_trace_conc_nM(tr, 0, 0, &g0) == HSGATE_OK);
  CHECK(g0 == doctest::Approx(100.0));
  CHECK(hsgate_trace_signal(tr, 0, &sig) == HSGATE_OK);
  CHECK(sig == 0.0);
  CHECK(hsgate_trace_signal(tr, hsgate_trace_length(tr), &sig) == HSGATE_ERR_VALIDATION);

  const auto csv = temp_path("trace.csv"), svg = temp_path("trace.svg");
  CHECK(hsgate_trace_write_csv(tr, csv.c_str()) == HSGATE_OK);
  CHECK(hsgate_trace_write_svg(tr, svg.c_str(), "renewal") == HSGATE_OK);
  CHECK(std::filesystem::file_size(csv) > 1000);
  CHECK(hsgate_trace_write_csv(tr, "/no/such/dir/x.csv") == HSGATE_ERR_IO);

  const auto data = temp_path("data.csv");
  CHECK(hsgate_trace_write_noisy(tr, data.c_str(), 0.0, 1) == HSGATE_OK);
  hsgate_fit* fit = nullptr;
  REQUIRE(hsgate_fit_run(cfg, data.c_str(), NAN, NAN, &fit) == HSGATE_OK);
  double k = 0;
  CHECK(hsgate_fit_k_hat(fit, &k) == HSGATE_OK);
  CHECK(k == doctest::Approx(2.743e6).epsilon(0.01));
  char* report = nullptr;
  REQUIRE(hsgate_fit_report_json(fit, &report) == HSGATE_OK);
  CHECK(take(report).find("k_hat") != std::string::npos);
  hsgate_fit_free(fit);
  CHECK(hsgate_fit_run(cfg, "/no/such/data.csv", NAN, NAN, &fit) == HSGATE_ERR_IO);

  hsgate_trace_free(tr);
  hsgate_config_free(cfg);
  for (const auto& p : {csv, svg, data}) std::remove(p.c_str());
}

TEST_CASE("OR gate configuration") {
  hsgate_config* cfg = nullptr;
  REQUIRE(hsgate_config_orgate("00,01,10,11", 1200, &cfg) == HSGATE_OK);
  char* dump = nullptr;
  REQUIRE(hsgate_config_network_dump(cfg, &dump) == HSGATE_OK);
  CHECK(lines(take(dump)) == 21);
  hsgate_config_free(cfg);
  CHECK(hsgate_config_orgate("02", 1200, &cfg) == HSGATE_ERR_VALIDATION);
}

TEST_CASE("enumeration") {
  char* dump = nullptr;
  int n = 0;
  REQUIRE(hsgate_enumerate_motif(40, 1, NAN, NAN, 100, &dump, &n) == HSGATE_OK);
  CHECK(lines(take(dump)) == 12);
  CHECK(n > 6);
  CHECK(hsgate_enumerate_motif(3, 1, NAN, NAN, 0, &dump, &n) == HSGATE_ERR_VALIDATION);
  CHECK(std::string(hsgate_last_error()).find("frontier") != std::string::npos);
}

TEST_CASE("design") {
  hsgate_design* d = nullptr;
  REQUIRE(hsgate_design_run(nullptr, 3, 4, 6, 200000, &d) == HSGATE_OK);
  int score = 99, ok = 0;
  CHECK(hsgate_design_crosstalk(d, &score) == HSGATE_OK);
  CHECK(score <= 5);
  char* report = nullptr;
  CHECK(hsgate_design_validate(d, &ok, &report) == HSGATE_OK);
  CHECK(ok == 1);
  CHECK(lines(take(report)) == 7);
  char* table = nullptr;
  CHECK(hsgate_design_table(d, &table) == HSGATE_OK);
  CHECK(take(table).rfind("T1\t", 0) == 0);
  hsgate_design_free(d);
  CHECK(hsgate_design_run(nullptr, 3, 0, 6, 1000, &d) == HSGATE_ERR_VALIDATION);
  CHECK(hsgate_design_run("/no/such/catalog", 3, 4, 6, 1000, &d) == HSGATE_ERR_IO);
}
