// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsgate/hsgate.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// Carries a library status out of a command.
struct Failure {
  hsgate_status code;
  std::string message;
};

void check(hsgate_status st) {
  if (st != HSGATE_OK) throw Failure{st, hsgate_last_error()};
}

int exit_code(hsgate_status st) { return st == HSGATE_ERR_NUMERICAL ? 2 : 1; }

/// Owns a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  hsgate_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};
using Config = Handle<hsgate_config, hsgate_config_free>;
using TraceH = Handle<hsgate_trace, hsgate_trace_free>;
using FitH = Handle<hsgate_fit, hsgate_fit_free>;
using DesignH = Handle<hsgate_design, hsgate_design_free>;

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{HSGATE_ERR_IO, "cannot write " + path};
}

std::string normalize_name(std::string s) {
  if (s.size() > 5 && s.substr(s.size() - 5) == ".json") s.resize(s.size() - 5);
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// A path, or the name of a shipped config (`motif3cycles` finds configs/motif_3cycles.json).
std::string resolve_config(const std::string& name) {
  if (fs::exists(name)) return name;
  std::vector<fs::path> dirs = {"configs"};
#ifdef HSGATE_CONFIG_DIR
  dirs.emplace_back(HSGATE_CONFIG_DIR);
#endif
  const auto wanted = normalize_name(fs::path(name).filename().string());
  for (const auto& dir : dirs) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir, ec)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      if (f.extension() == ".json" && normalize_name(f.filename().string()) == wanted) return f.string();
  }
  return name;
}

json config_json(const hsgate_config* cfg) {
  char* s = nullptr;
  check(hsgate_config_to_json(cfg, &s));
  return json::parse(take(s));
}

struct Overrides {
  double kt = kUnset, krep = kUnset, kleak = kUnset;
  double rtol = kUnset, atol = kUnset;
  std::string normalization;
  std::int64_t seed = -1;
  std::vector<double> efficiency;
  double output_dt = kUnset;

  void add_to(CLI::App* app, bool with_output_dt) {
    app->add_option("--kt", kt, "universal seesaw rate constant (/M/s)");
    app->add_option("--krep", krep, "reporter rate constant (/M/s)");
    app->add_option("--kleak", kleak, "fuel leak rate constant (/M/s)");
    app->add_option("--seed", seed, "RNG seed recorded in the manifest");
    app->add_option("--rtol", rtol, "relative integrator tolerance");
    app->add_option("--atol", atol, "absolute integrator tolerance (M)");
    app->add_option("--normalization", normalization, "none | minmax | fixed:<nM>");
    app->add_option("--efficiency", efficiency, "per-cycle efficiency multipliers");
    if (with_output_dt) app->add_option("--output-dt", output_dt, "snapshot spacing (s)");
  }

  void apply(hsgate_config* cfg) const {
    check(hsgate_config_set_rates(cfg, kt, krep, kleak));
    if (!std::isnan(rtol) || !std::isnan(atol)) {
      const auto j = config_json(cfg);
      check(hsgate_config_set_tolerances(cfg, std::isnan(rtol) ? j["rtol"].get<double>() : rtol,
                                         std::isnan(atol) ? j["atol"].get<double>() : atol));
    }
    if (!normalization.empty()) check(hsgate_config_set_normalization(cfg, normalization.c_str()));
    if (seed >= 0) check(hsgate_config_set_seed(cfg, static_cast<uint64_t>(seed)));
    if (!efficiency.empty()) check(hsgate_config_set_efficiency(cfg, efficiency.data(), efficiency.size()));
    if (!std::isnan(output_dt)) check(hsgate_config_set_output_dt(cfg, output_dt));
  }
};

void write_manifest(const std::string& out_path, const std::string& command, const std::vector<std::string>& argv,
                    const std::vector<std::string>& inputs, const json& parameters, const json& extra = {}) {
  json m;
  m["tool"] = "hsgate";
  m["version"] = hsgate_version();
  m["command"] = command;
  m["argv"] = argv;
  m["inputs"] = json::array();
  for (const auto& p : inputs) m["inputs"].push_back({{"path", p}, {"fnv1a64", fnv1a(read_bytes(p))}});
  m["parameters"] = parameters;
  if (parameters.contains("seed")) m["seed"] = parameters["seed"];
  m["outputs"] = {out_path};
  if (!extra.is_null()) m["results"] = extra;
  write_text(out_path + ".manifest.json", m.dump(2) + "\n");
}

void load_config(const std::string& name, Config& cfg, std::string& resolved) {
  resolved = resolve_config(name);
  check(hsgate_config_load(resolved.c_str(), cfg.out()));
}

/// Signal at the last snapshot at or before t.
double signal_at(const hsgate_trace* tr, double t) {
  const size_t n = hsgate_trace_length(tr);
  double value = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double ti = 0.0;
    check(hsgate_trace_time(tr, i, &ti));
    if (ti > t) break;
    check(hsgate_trace_signal(tr, i, &value));
  }
  return value;
}

/// End-of-phase signal for every labelled phase; the phase ends just before the next begins.
json phase_summary(const hsgate_trace* tr, const json& cfg) {
  json out = json::array();
  const auto& phases = cfg["phases"];
  for (size_t k = 0; k < phases.size(); ++k) {
    const double start = phases[k]["time_s"].get<double>();
    const double end = k + 1 < phases.size() ? phases[k + 1]["time_s"].get<double>() : cfg["t_end_s"].get<double>();
    // Stop one snapshot short of the next phase so its injection is not counted.
    const double probe = std::nextafter(end, start);
    out.push_back({{"label", phases[k]["label"]}, {"start_s", start}, {"end_s", end},
                   {"final_signal", signal_at(tr, probe)}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hairpin seesaw gate toolkit: simulate, fit, enumerate and design"};
  app.require_subcommand(1);
  std::vector<std::string> args(argv, argv + argc);

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate a config and write the trace CSV");
  std::string sim_config, sim_out, sim_plot, sim_data_out;
  double sim_noise = 0.02;
  Overrides sim_ov;
  sim->add_option("--config", sim_config, "config path or shipped config name")->required();
  sim->add_option("--out", sim_out, "trace CSV path")->required();
  sim->add_option("--plot", sim_plot, "also write an SVG plot");
  sim->add_option("--data-out", sim_data_out, "also write a noisy time_s,signal data CSV");
  sim->add_option("--noise", sim_noise, "noise as a fraction of the peak signal (with --data-out)");
  sim_ov.add_to(sim, true);

  // fit
  auto* fitc = app.add_subcommand("fit", "estimate k_t from a data CSV");
  std::string fit_config, fit_model = "motif", fit_data, fit_out;
  double fit_kmin = kUnset, fit_kmax = kUnset;
  Overrides fit_ov;
  fitc->add_option("--config", fit_config, "config supplying model and schedule");
  fitc->add_option("--model", fit_model, "motif | orgate, with the shipped default schedule");
  fitc->add_option("--data", fit_data, "CSV with time_s and signal (or fluorescence_norm)")->required();
  fitc->add_option("--out", fit_out, "fit report JSON path (stdout if absent)");
  fitc->add_option("--kmin", fit_kmin, "lower bound on k_t (/M/s)");
  fitc->add_option("--kmax", fit_kmax, "upper bound on k_t (/M/s)");
  fit_ov.add_to(fitc, false);

  // enumerate
  auto* en = app.add_subcommand("enumerate", "derive the motif reaction network from domain structures");
  int en_max = 64;
  bool en_expanded = false;
  std::string en_out;
  double en_kt = kUnset, en_krep = kUnset, en_kleak = kUnset;
  en->add_option("--max-species", en_max, "capacity bound");
  en->add_flag("--expanded", en_expanded, "keep the reporter-bound gate as its own species");
  en->add_option("--out", en_out, "reaction list path (stdout if absent)");
  en->add_option("--kt", en_kt, "seesaw rate constant (/M/s)");
  en->add_option("--krep", en_krep, "reporter rate constant (/M/s)");
  en->add_option("--kleak", en_kleak, "leak rate constant (/M/s)");

  // design
  auto* des = app.add_subcommand("design", "assign 3-letter sequences to a domain catalog");
  std::string des_catalog, des_out;
  std::uint64_t des_seed = 1;
  int des_run = 4, des_cross = 6;
  long des_attempts = 200000;
  des->add_option("--catalog", des_catalog, "catalog file (built-in motif catalog if absent)");
  des->add_option("--seed", des_seed, "RNG seed");
  des->add_option("--max-run", des_run, "longest allowed homopolymer run");
  des->add_option("--crosstalk-limit", des_cross, "unintended complementary runs must be shorter");
  des->add_option("--max-attempts", des_attempts, "rejection-sampling budget");
  des->add_option("--out", des_out, "domain<TAB>sequence table (stdout if absent)");

  // orgate
  auto* org = app.add_subcommand("orgate", "simulate OR-gate input cases and report each case's signal");
  std::string org_cases = "00,01,10,11", org_out, org_plot;
  double org_phase = 1200;
  Overrides org_ov;
  org->add_option("--cases", org_cases, "comma-separated input cases, e.g. 00,01,10,11");
  org->add_option("--phase", org_phase, "seconds per case");
  org->add_option("--out", org_out, "trace CSV path")->required();
  org->add_option("--plot", org_plot, "also write an SVG plot");
  org_ov.add_to(org, true);

  // schedule
  auto* sch = app.add_subcommand("schedule", "write a protocol config");
  std::string sch_kind = "renewal", sch_cases = "00,01,10,11", sch_out;
  int sch_cycles = 3;
  double sch_phase = 600;
  bool sch_no_doubling = false, sch_keep_ratio = false;
  Overrides sch_ov;
  sch->add_option("--kind", sch_kind, "renewal | orgate")->check(CLI::IsMember({"renewal", "orgate"}));
  sch->add_option("--cycles", sch_cycles, "renewal cycles");
  sch->add_option("--phase", sch_phase, "seconds per phase");
  sch->add_flag("--no-doubling", sch_no_doubling, "keep 1x inserts in every cycle");
  sch->add_flag("--keep-fuel-ratio", sch_keep_ratio, "fuel stays at twice the input when doubling");
  sch->add_option("--cases", sch_cases, "OR cases for --kind orgate");
  sch->add_option("--out", sch_out, "config path (stdout if absent)");
  sch_ov.add_to(sch, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*sim) {
      Config cfg;
      std::string path;
      load_config(sim_config, cfg, path);
      sim_ov.apply(cfg.get());
      TraceH tr;
      check(hsgate_simulate(cfg.get(), tr.out()));
      check(hsgate_trace_write_csv(tr.get(), sim_out.c_str()));
      const auto params = config_json(cfg.get());
      write_manifest(sim_out, "simulate", args, {path}, params);
      if (!sim_plot.empty()) check(hsgate_trace_write_svg(tr.get(), sim_plot.c_str(), fs::path(path).stem().c_str()));
      if (!sim_data_out.empty()) {
        uint64_t seed = 0;
        check(hsgate_config_get_seed(cfg.get(), &seed));
        check(hsgate_trace_write_noisy(tr.get(), sim_data_out.c_str(), sim_noise, seed));
        write_manifest(sim_data_out, "simulate", args, {path}, params, {{"noise_fraction", sim_noise}});
      }
      std::cout << "wrote " << sim_out << " (" << hsgate_trace_length(tr.get()) << " snapshots, "
                << hsgate_trace_event_count(tr.get()) << " injection times)\n";
    } else if (*fitc) {
      Config cfg;
      std::string path;
      std::vector<std::string> inputs;
      if (!fit_config.empty()) {
        load_config(fit_config, cfg, path);
        inputs.push_back(path);
      } else if (fit_model == "motif") {
        check(hsgate_config_renewal(3, 600, 1, 0, cfg.out()));
      } else if (fit_model == "orgate") {
        check(hsgate_config_orgate("00,01,10,11", 1200, cfg.out()));
      } else {
        throw Failure{HSGATE_ERR_VALIDATION, "unknown model: " + fit_model};
      }
      fit_ov.apply(cfg.get());
      if (!fs::exists(fit_data)) throw Failure{HSGATE_ERR_IO, "data file not found: " + fit_data};
      inputs.push_back(fit_data);
      FitH f;
      check(hsgate_fit_run(cfg.get(), fit_data.c_str(), fit_kmin, fit_kmax, f.out()));
      char* rep = nullptr;
      check(hsgate_fit_report_json(f.get(), &rep));
      const std::string report = take(rep);
      double k_hat = 0.0;
      check(hsgate_fit_k_hat(f.get(), &k_hat));
      if (fit_out.empty()) {
        std::cout << report;
      } else {
        write_text(fit_out, report);
        write_manifest(fit_out, "fit", args, inputs, config_json(cfg.get()), json::parse(report));
        std::cout << "k_hat = " << k_hat << " /M/s\n";
      }
    } else if (*en) {
      char* dump = nullptr;
      int count = 0;
      check(hsgate_enumerate_motif(en_max, en_expanded ? 0 : 1, en_kt, en_krep, en_kleak, &dump, &count));
      const std::string text = take(dump);
      if (en_out.empty()) {
        std::cout << text;
      } else {
        write_text(en_out, text);
        write_manifest(en_out, "enumerate", args, {},
                       {{"max_species", en_max}, {"expanded", en_expanded}, {"species", count}});
        std::cout << "wrote " << en_out << " (" << count << " species)\n";
      }
    } else if (*des) {
      DesignH d;
      check(hsgate_design_run(des_catalog.empty() ? nullptr : des_catalog.c_str(), des_seed, des_run, des_cross,
                              des_attempts, d.out()));
      char* table = nullptr;
      check(hsgate_design_table(d.get(), &table));
      const std::string text = take(table);
      int ok = 0, score = 0;
      char* report = nullptr;
      check(hsgate_design_validate(d.get(), &ok, &report));
      const std::string rep = take(report);
      check(hsgate_design_crosstalk(d.get(), &score));
      if (des_out.empty()) {
        std::cout << text;
      } else {
        write_text(des_out, text);
        std::vector<std::string> inputs;
        if (!des_catalog.empty()) inputs.push_back(des_catalog);
        write_manifest(des_out, "design", args, inputs,
                       {{"seed", des_seed}, {"max_run", des_run}, {"crosstalk_limit", des_cross}},
                       {{"crosstalk_score", score}, {"valid", ok == 1}});
      }
      std::cerr << rep << "crosstalk score " << score << "\n";
      if (!ok) throw Failure{HSGATE_ERR_VALIDATION, "design failed validation"};
    } else if (*org) {
      Config cfg;
      check(hsgate_config_orgate(org_cases.c_str(), org_phase, cfg.out()));
      org_ov.apply(cfg.get());
      TraceH tr;
      check(hsgate_simulate(cfg.get(), tr.out()));
      check(hsgate_trace_write_csv(tr.get(), org_out.c_str()));
      const auto params = config_json(cfg.get());
      const auto summary = phase_summary(tr.get(), params);
      write_manifest(org_out, "orgate", args, {}, params, summary);
      if (!org_plot.empty()) check(hsgate_trace_write_svg(tr.get(), org_plot.c_str(), ("OR gate: " + org_cases).c_str()));
      for (const auto& ph : summary)
        std::printf("%-10s %8.0f-%-8.0f final signal %.4f\n", ph["label"].get<std::string>().c_str(),
                    ph["start_s"].get<double>(), ph["end_s"].get<double>(), ph["final_signal"].get<double>());
    } else if (*sch) {
      Config cfg;
      if (sch_kind == "renewal")
        check(hsgate_config_renewal(sch_cycles, sch_phase, sch_no_doubling ? 0 : 1, sch_keep_ratio ? 1 : 0, cfg.out()));
      else
        check(hsgate_config_orgate(sch_cases.c_str(), sch_phase, cfg.out()));
      sch_ov.apply(cfg.get());
      char* text = nullptr;
      check(hsgate_config_to_json(cfg.get(), &text));
      const std::string out = take(text);
      if (sch_out.empty()) std::cout << out;
      else write_text(sch_out, out);
    }
  } catch (const Failure& f) {
    std::cerr << "hsgate: error: " << f.message << "\n";
    return exit_code(f.code);
  } catch (const std::exception& e) {
    std::cerr << "hsgate: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
