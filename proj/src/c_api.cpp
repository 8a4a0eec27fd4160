#include "hsgate/hsgate.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <random>
#include <sstream>

#include "hsgate/design.hpp"
#include "hsgate/enumerator.hpp"
#include "hsgate/error.hpp"
#include "hsgate/fit.hpp"
#include "hsgate/io.hpp"
#include "hsgate/plot.hpp"

struct hsgate_config {
  hsgate::SimConfig cfg;
};

struct hsgate_trace {
  hsgate::ReactionNetwork network;
  hsgate::InjectionSchedule schedule;
  hsgate::Trace trace;
  std::vector<double> signal;
  std::vector<double> event_times;
  hsgate::Normalization normalization;
};

struct hsgate_fit {
  hsgate::FitResult result;
  hsgate::ResidualReport residuals;
};

struct hsgate_design {
  hsgate::SequenceAssignment assignment;
  hsgate::DesignConstraints constraints;
};

namespace {

thread_local std::string g_last_error;

hsgate_status fail(hsgate_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

/// Runs `body`, mapping exceptions onto status codes.
template <class F>
hsgate_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return HSGATE_OK;
  } catch (const hsgate::CapacityError& e) {
    std::string msg = e.what();
    msg += "; frontier:";
    for (const auto& s : e.frontier()) msg += " " + s;
    return fail(HSGATE_ERR_VALIDATION, msg);
  } catch (const hsgate::NumericalError& e) {
    return fail(HSGATE_ERR_NUMERICAL, e.what());
  } catch (const hsgate::IoError& e) {
    return fail(HSGATE_ERR_IO, e.what());
  } catch (const hsgate::ValidationError& e) {
    return fail(HSGATE_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HSGATE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HSGATE_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define HSGATE_REQUIRE(ptr) \
  if (!(ptr)) return fail(HSGATE_ERR_VALIDATION, std::string("null argument: ") + #ptr)

hsgate::SimConfig default_config(const std::string& model, const hsgate::InjectionSchedule& schedule) {
  hsgate::SimConfig c;
  c.model = model;
  c.schedule = schedule;
  c.t_end_s = schedule.end_time_s;
  c.output_dt_s = 1.0;
  return c;
}

}  // namespace

extern "C" {

const char* hsgate_version(void) { return "0.1.0"; }

const char* hsgate_last_error(void) { return g_last_error.c_str(); }

void hsgate_string_free(char* s) { std::free(s); }

// ---- configuration ---------------------------------------------------------

hsgate_status hsgate_config_load(const char* path, hsgate_config** out) {
  HSGATE_REQUIRE(path);
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new hsgate_config{hsgate::load_sim_config(path)}; });
}

hsgate_status hsgate_config_parse(const char* json_text, hsgate_config** out) {
  HSGATE_REQUIRE(json_text);
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new hsgate_config{hsgate::parse_sim_config(json_text)}; });
}

hsgate_status hsgate_config_renewal(int n_cycles, double phase_s, int doubling, int keep_fuel_ratio,
                                    hsgate_config** out) {
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto rule = keep_fuel_ratio ? hsgate::DoublingRule::keep_fuel_ratio : hsgate::DoublingRule::equalize;
    auto s = hsgate::build_renewal_schedule(n_cycles, phase_s, doubling != 0, rule);
    *out = new hsgate_config{default_config("motif", s)};
  });
}

hsgate_status hsgate_config_orgate(const char* cases, double phase_s, hsgate_config** out) {
  HSGATE_REQUIRE(cases);
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::vector<std::pair<bool, bool>> list;
    std::stringstream ss(cases);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.size() != 2 || item.find_first_not_of("01") != std::string::npos)
        throw hsgate::ValidationError("OR case must be two binary digits, got '" + item + "'");
      list.push_back({item[0] == '1', item[1] == '1'});
    }
    *out = new hsgate_config{default_config("orgate", hsgate::build_or_case_schedule(list, phase_s))};
  });
}

void hsgate_config_free(hsgate_config* cfg) { delete cfg; }

hsgate_status hsgate_config_set_rates(hsgate_config* cfg, double k_t, double k_rep, double k_leak) {
  HSGATE_REQUIRE(cfg);
  return guarded([&] {
    auto p = cfg->cfg.params;
    if (!std::isnan(k_t)) p.k_t = k_t;
    if (!std::isnan(k_rep)) p.k_rep = k_rep;
    if (!std::isnan(k_leak)) p.k_leak = k_leak;
    p.validate();
    cfg->cfg.params = p;
  });
}

hsgate_status hsgate_config_set_tolerances(hsgate_config* cfg, double rtol, double atol) {
  HSGATE_REQUIRE(cfg);
  if (!(rtol > 0) || !(atol > 0)) return fail(HSGATE_ERR_VALIDATION, "tolerances must be positive");
  cfg->cfg.integrator.rtol = rtol;
  cfg->cfg.integrator.atol = atol;
  return HSGATE_OK;
}

hsgate_status hsgate_config_set_normalization(hsgate_config* cfg, const char* mode) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(mode);
  return guarded([&] { cfg->cfg.normalization = hsgate::Normalization::parse(mode); });
}

hsgate_status hsgate_config_set_seed(hsgate_config* cfg, uint64_t seed) {
  HSGATE_REQUIRE(cfg);
  cfg->cfg.seed = seed;
  return HSGATE_OK;
}

hsgate_status hsgate_config_set_efficiency(hsgate_config* cfg, const double* values, size_t n) {
  HSGATE_REQUIRE(cfg);
  if (n && !values) return fail(HSGATE_ERR_VALIDATION, "null efficiency array");
  return guarded([&] {
    auto s = cfg->cfg.schedule;
    s.per_cycle_efficiency.assign(values, values + n);
    s.validate();
    cfg->cfg.schedule = s;
  });
}

hsgate_status hsgate_config_set_output_dt(hsgate_config* cfg, double dt_s) {
  HSGATE_REQUIRE(cfg);
  if (!(dt_s > 0)) return fail(HSGATE_ERR_VALIDATION, "output_dt must be positive");
  cfg->cfg.output_dt_s = dt_s;
  return HSGATE_OK;
}

hsgate_status hsgate_config_get_seed(const hsgate_config* cfg, uint64_t* seed) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(seed);
  *seed = cfg->cfg.seed;
  return HSGATE_OK;
}

hsgate_status hsgate_config_to_json(const hsgate_config* cfg, char** out) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(out);
  return guarded([&] { *out = dup_string(hsgate::sim_config_to_json(cfg->cfg)); });
}

hsgate_status hsgate_config_network_dump(const hsgate_config* cfg, char** out) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(out);
  return guarded([&] { *out = dup_string(cfg->cfg.network().dump()); });
}

// ---- simulation --------------------------------------------------------------

hsgate_status hsgate_simulate(const hsgate_config* cfg, hsgate_trace** out) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto& c = cfg->cfg;
    auto tr = std::make_unique<hsgate_trace>();
    tr->network = c.network();
    tr->schedule = c.schedule;
    tr->normalization = c.normalization;
    tr->trace = hsgate::integrate(tr->network, c.schedule, c.t_end_s, c.output_dt_s, c.integrator);
    tr->signal = hsgate::fluorescence(tr->trace, tr->network, c.normalization);
    tr->event_times = c.schedule.event_times();
    *out = tr.release();
  });
}

void hsgate_trace_free(hsgate_trace* tr) { delete tr; }

size_t hsgate_trace_length(const hsgate_trace* tr) { return tr ? tr->trace.size() : 0; }

size_t hsgate_trace_species_count(const hsgate_trace* tr) { return tr ? tr->trace.species.size() : 0; }

const char* hsgate_trace_species_name(const hsgate_trace* tr, size_t j) {
  if (!tr || j >= tr->trace.species.size()) return nullptr;
  return tr->trace.species[j].c_str();
}

hsgate_status hsgate_trace_time(const hsgate_trace* tr, size_t i, double* t_s) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(t_s);
  if (i >= tr->trace.size()) return fail(HSGATE_ERR_VALIDATION, "snapshot index out of range");
  *t_s = tr->trace.times[i];
  return HSGATE_OK;
}

hsgate_status hsgate_trace_signal(const hsgate_trace* tr, size_t i, double* value) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(value);
  if (i >= tr->signal.size()) return fail(HSGATE_ERR_VALIDATION, "snapshot index out of range");
  *value = tr->signal[i];
  return HSGATE_OK;
}

hsgate_status hsgate_trace_conc_nM(const hsgate_trace* tr, size_t i, size_t j, double* nM) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(nM);
  if (i >= tr->trace.size() || j >= tr->trace.species.size())
    return fail(HSGATE_ERR_VALIDATION, "trace index out of range");
  *nM = tr->trace.conc[i][j] * 1e9;
  return HSGATE_OK;
}

size_t hsgate_trace_event_count(const hsgate_trace* tr) { return tr ? tr->event_times.size() : 0; }

hsgate_status hsgate_trace_event_time(const hsgate_trace* tr, size_t k, double* t_s) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(t_s);
  if (k >= tr->event_times.size()) return fail(HSGATE_ERR_VALIDATION, "event index out of range");
  *t_s = tr->event_times[k];
  return HSGATE_OK;
}

hsgate_status hsgate_trace_write_csv(const hsgate_trace* tr, const char* path) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(path);
  return guarded([&] {
    std::ostringstream os;
    hsgate::write_trace_csv(os, tr->trace, tr->signal);
    hsgate::write_file(path, os.str());
  });
}

hsgate_status hsgate_trace_write_svg(const hsgate_trace* tr, const char* path, const char* title) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(path);
  return guarded([&] {
    hsgate::PlotSpec spec;
    spec.title = title ? title : "";
    if (tr->normalization.mode == hsgate::Normalization::Mode::none) spec.y_label = "unquenched reporter (nM)";
    spec.series.push_back({"fluorescence", tr->trace.times, tr->signal});
    spec.event_times = tr->event_times;
    for (const auto& ph : tr->schedule.phases)
      if (ph.first > 0) spec.phases.push_back(ph);
    hsgate::write_file(path, hsgate::render_svg(spec));
  });
}

hsgate_status hsgate_trace_write_noisy(const hsgate_trace* tr, const char* path, double noise_frac, uint64_t seed) {
  HSGATE_REQUIRE(tr);
  HSGATE_REQUIRE(path);
  if (!(noise_frac >= 0)) return fail(HSGATE_ERR_VALIDATION, "noise fraction must be non-negative");
  return guarded([&] {
    double peak = 0.0;
    for (double v : tr->signal) peak = std::max(peak, std::abs(v));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_frac * peak);
    std::ostringstream os;
    os.precision(12);
    os << "time_s,signal\n";
    for (size_t i = 0; i < tr->signal.size(); ++i) {
      const double v = tr->signal[i] + (noise_frac > 0 ? noise(rng) : 0.0);
      os << tr->trace.times[i] << ',' << v << '\n';
    }
    hsgate::write_file(path, os.str());
  });
}

// ---- fitting -----------------------------------------------------------------

hsgate_status hsgate_fit_run(const hsgate_config* cfg, const char* data_path, double k_min, double k_max,
                             hsgate_fit** out) {
  HSGATE_REQUIRE(cfg);
  HSGATE_REQUIRE(data_path);
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto c = cfg->cfg;
    const auto data = hsgate::load_data_csv(data_path);
    hsgate::FitProblem p;
    p.model = [c](double k) { return c.network_at(k); };
    p.schedule = c.schedule;
    p.normalization = c.normalization;
    p.times = data.times;
    p.data = data.values;
    p.k_min = std::isnan(k_min) ? c.k_min : k_min;
    p.k_max = std::isnan(k_max) ? c.k_max : k_max;
    p.fit_amplitude = c.fit_amplitude;
    p.fit_offset = c.fit_offset;
    p.fit_efficiency = c.fit_efficiency;
    p.grid_points = c.grid_points;
    p.integrator = c.integrator;
    auto f = std::make_unique<hsgate_fit>();
    f->result = hsgate::fit(p);
    f->residuals = hsgate::residual_diagnostics(f->result, p);
    *out = f.release();
  });
}

hsgate_status hsgate_fit_k_hat(const hsgate_fit* fit, double* k_hat) {
  HSGATE_REQUIRE(fit);
  HSGATE_REQUIRE(k_hat);
  *k_hat = fit->result.k_hat;
  return HSGATE_OK;
}

hsgate_status hsgate_fit_report_json(const hsgate_fit* fit, char** out) {
  HSGATE_REQUIRE(fit);
  HSGATE_REQUIRE(out);
  return guarded([&] { *out = dup_string(hsgate::fit_report_json(fit->result, fit->residuals)); });
}

void hsgate_fit_free(hsgate_fit* fit) { delete fit; }

// ---- enumeration -------------------------------------------------------------

hsgate_status hsgate_enumerate_motif(int max_species, int collapse_reclosure, double k_t, double k_rep,
                                     double k_leak, char** dump, int* species_count) {
  HSGATE_REQUIRE(dump);
  return guarded([&] {
    const auto ms = hsgate::motif_structures();
    hsgate::EnumeratorOptions o;
    o.names = ms.names;
    o.collapse_reclosure = collapse_reclosure != 0;
    if (!std::isnan(k_t)) o.k_t = k_t;
    if (!std::isnan(k_rep)) o.k_rep = k_rep;
    if (!std::isnan(k_leak)) o.k_leak = k_leak;
    std::vector<hsgate::Complex> seeds;
    for (const char* n : {"G", "I", "F", "R", "Iex", "Fex"}) seeds.push_back(ms.species.at(n));
    const auto en = hsgate::enumerate_network(seeds, max_species, ms.catalog, o);
    *dump = dup_string(en.network.dump());
    if (species_count) *species_count = static_cast<int>(en.species.size());
  });
}

// ---- design ------------------------------------------------------------------

hsgate_status hsgate_design_run(const char* catalog_path, uint64_t seed, int max_homopolymer, int crosstalk_limit,
                                long max_attempts, hsgate_design** out) {
  HSGATE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto catalog =
        catalog_path ? hsgate::DomainCatalog::load(catalog_path) : hsgate::motif_structures().catalog;
    auto d = std::make_unique<hsgate_design>();
    d->constraints.max_homopolymer = max_homopolymer;
    d->constraints.crosstalk_limit = crosstalk_limit;
    d->constraints.max_attempts = max_attempts;
    d->assignment = hsgate::assign_sequences(catalog, d->constraints, seed);
    *out = d.release();
  });
}

hsgate_status hsgate_design_table(const hsgate_design* d, char** out) {
  HSGATE_REQUIRE(d);
  HSGATE_REQUIRE(out);
  return guarded([&] { *out = dup_string(d->assignment.to_table()); });
}

hsgate_status hsgate_design_crosstalk(const hsgate_design* d, int* score) {
  HSGATE_REQUIRE(d);
  HSGATE_REQUIRE(score);
  return guarded([&] { *score = hsgate::crosstalk_score(d->assignment); });
}

hsgate_status hsgate_design_validate(const hsgate_design* d, int* ok, char** report) {
  HSGATE_REQUIRE(d);
  HSGATE_REQUIRE(ok);
  return guarded([&] {
    const auto rep = hsgate::validate(d->assignment, d->constraints);
    *ok = rep.ok() ? 1 : 0;
    if (report) {
      std::string text;
      for (const auto& c : rep.checks) text += c.name + "\t" + (c.passed ? "PASS" : "FAIL") + "\t" + c.detail + "\n";
      *report = dup_string(text);
    }
  });
}

void hsgate_design_free(hsgate_design* d) { delete d; }

}  // extern "C"
