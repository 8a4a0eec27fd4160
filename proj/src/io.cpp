#include "hsgate/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hsgate/error.hpp"

namespace hsgate {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

}  // namespace

ReactionNetwork SimConfig::network() const { return network_at(params.k_t); }

ReactionNetwork SimConfig::network_at(double k_t) const {
  MotifParams p = params;
  p.k_t = k_t;
  if (model == "motif") return build_hairpin_motif(p);
  if (model == "orgate") return build_or_gate(p);
  if (model == "custom") return custom;
  throw ValidationError("unknown model: " + model);
}

SimConfig parse_sim_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  SimConfig c;
  c.model = get_or<std::string>(j, "model", "motif");
  if (j.contains("params")) {
    const auto& p = j.at("params");
    c.params.k_t = get_or(p, "k_t", c.params.k_t);
    c.params.k_rep = get_or(p, "k_rep", c.params.k_rep);
    c.params.k_leak = get_or(p, "k_leak", c.params.k_leak);
    c.params.collapse_reclosure = get_or(p, "collapse_reclosure", c.params.collapse_reclosure);
    c.params.k_close = get_or(p, "k_close", c.params.k_close);
    c.params.tether_conc_M = get_or(p, "tether_conc_M", c.params.tether_conc_M);
    c.params.validate();
  }

  if (c.model == "custom") {
    for (const auto& s : require<json>(j, "species", "custom model")) {
      Census census;
      if (s.contains("census"))
        for (const auto& [strand, n] : s.at("census").items()) census[strand] = n.get<int>();
      else
        census[require<std::string>(s, "name", "species")] = 1;
      c.custom.add_species(require<std::string>(s, "name", "species"), census);
    }
    int idx = 0;
    for (const auto& r : require<json>(j, "reactions", "custom model")) {
      const auto where = "reaction " + std::to_string(idx++);
      Reaction rx;
      rx.reactants = require<std::vector<std::string>>(r, "reactants", where);
      rx.products = require<std::vector<std::string>>(r, "products", where);
      rx.k_forward = require<double>(r, "k_forward", where);
      if (r.contains("k_backward") && !r.at("k_backward").is_null()) rx.k_backward = r.at("k_backward").get<double>();
      rx.tag = get_or<std::string>(r, "tag", "");
      c.custom.add_reaction(rx);
    }
  } else if (c.model != "motif" && c.model != "orgate") {
    throw ValidationError("unknown model: " + c.model);
  }

  c.schedule.initial_volume_uL = require<double>(j, "volume_uL", "config");
  if (j.contains("species")) {
    for (const auto& s : j.at("species")) {
      const auto name = require<std::string>(s, "name", "species entry");
      c.schedule.initial_nM[name] = get_or(s, "initial_nM", 0.0);
    }
  }
  if (j.contains("events")) {
    int idx = 0;
    for (const auto& e : j.at("events")) {
      const auto where = "event " + std::to_string(idx++);
      InjectionEvent ev;
      ev.time_s = require<double>(e, "time_s", where);
      ev.species = require<std::string>(e, "species", where);
      ev.stock_conc_nM = require<double>(e, "stock_conc_nM", where);
      ev.volume_uL = require<double>(e, "volume_uL", where);
      ev.cycle = get_or(e, "cycle", 0);
      c.schedule.events.push_back(ev);
    }
  }
  c.schedule.per_cycle_efficiency = get_or(j, "per_cycle_efficiency", std::vector<double>{});
  if (j.contains("phases"))
    for (const auto& p : j.at("phases"))
      c.schedule.phases.push_back({require<double>(p, "time_s", "phase"), get_or<std::string>(p, "label", "")});
  c.schedule.validate();

  c.t_end_s = require<double>(j, "t_end_s", "config");
  c.schedule.end_time_s = c.t_end_s;
  c.output_dt_s = get_or(j, "output_dt_s", 1.0);
  if (!(c.output_dt_s > 0)) throw ValidationError("output_dt_s must be positive");
  if (c.t_end_s < c.schedule.last_event_time()) throw ValidationError("t_end_s precedes the last event");
  c.normalization = Normalization::parse(get_or<std::string>(j, "normalization", "fixed:150"));
  c.integrator.rtol = get_or(j, "rtol", c.integrator.rtol);
  c.integrator.atol = get_or(j, "atol", c.integrator.atol);
  c.seed = get_or<std::uint64_t>(j, "seed", 0);

  if (j.contains("fit")) {
    const auto& f = j.at("fit");
    c.k_min = get_or(f, "k_min", c.k_min);
    c.k_max = get_or(f, "k_max", c.k_max);
    c.fit_amplitude = get_or(f, "fit_amplitude", c.fit_amplitude);
    c.fit_offset = get_or(f, "fit_offset", c.fit_offset);
    c.fit_efficiency = get_or(f, "fit_efficiency", c.fit_efficiency);
    c.grid_points = get_or(f, "grid_points", c.grid_points);
  }
  // Unknown species in the schedule are allowed (inert); the network itself must build.
  (void)c.network();
  return c;
}

SimConfig load_sim_config(const std::string& path) { return parse_sim_config(read_file(path)); }

std::string sim_config_to_json(const SimConfig& c) {
  json j;
  j["model"] = c.model;
  j["params"] = {{"k_t", c.params.k_t},
                 {"k_rep", c.params.k_rep},
                 {"k_leak", c.params.k_leak},
                 {"collapse_reclosure", c.params.collapse_reclosure},
                 {"k_close", c.params.k_close},
                 {"tether_conc_M", c.params.tether_conc_M}};
  if (c.model == "custom") {
    j["reactions"] = json::array();
    for (const auto& r : c.custom.reactions()) {
      json rj = {{"reactants", r.reactants}, {"products", r.products}, {"k_forward", r.k_forward}, {"tag", r.tag}};
      if (r.k_backward) rj["k_backward"] = *r.k_backward;
      j["reactions"].push_back(rj);
    }
  }
  j["volume_uL"] = c.schedule.initial_volume_uL;
  j["species"] = json::array();
  if (c.model == "custom") {
    for (const auto& s : c.custom.species()) {
      auto it = c.schedule.initial_nM.find(s.name);
      j["species"].push_back(
          {{"name", s.name}, {"initial_nM", it == c.schedule.initial_nM.end() ? 0.0 : it->second}, {"census", s.census}});
    }
  } else {
    for (const auto& [name, nM] : c.schedule.initial_nM) j["species"].push_back({{"name", name}, {"initial_nM", nM}});
  }
  j["events"] = json::array();
  for (const auto& e : c.schedule.events)
    j["events"].push_back({{"time_s", e.time_s},
                           {"species", e.species},
                           {"stock_conc_nM", e.stock_conc_nM},
                           {"volume_uL", e.volume_uL},
                           {"cycle", e.cycle}});
  j["per_cycle_efficiency"] = c.schedule.per_cycle_efficiency;
  j["phases"] = json::array();
  for (const auto& [t, label] : c.schedule.phases) j["phases"].push_back({{"time_s", t}, {"label", label}});
  j["t_end_s"] = c.t_end_s;
  j["output_dt_s"] = c.output_dt_s;
  j["normalization"] = c.normalization.to_string();
  j["rtol"] = c.integrator.rtol;
  j["atol"] = c.integrator.atol;
  j["seed"] = c.seed;
  j["fit"] = {{"k_min", c.k_min},
              {"k_max", c.k_max},
              {"fit_amplitude", c.fit_amplitude},
              {"fit_offset", c.fit_offset},
              {"fit_efficiency", c.fit_efficiency},
              {"grid_points", c.grid_points}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

void write_trace_csv(std::ostream& os, const Trace& trace, const std::vector<double>& signal) {
  if (signal.size() != trace.size()) throw ValidationError("signal and trace lengths differ");
  os << "time_s";
  for (const auto& s : trace.species) os << ',' << s;
  os << ",fluorescence_norm\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    os << g12(trace.times[i]);
    for (double c : trace.conc[i]) os << ',' << g12(c * 1e9);
    os << ',' << g12(signal[i]) << '\n';
  }
}

DataSeries parse_data_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int row = 0;
  int tcol = -1, vcol = -1;
  DataSeries out;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (tcol < 0) {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "time_s") tcol = static_cast<int>(i);
        if (cells[i] == "signal" || (vcol < 0 && cells[i] == "fluorescence_norm")) vcol = static_cast<int>(i);
      }
      if (tcol < 0 || vcol < 0)
        throw ValidationError("data CSV header needs time_s and signal (or fluorescence_norm) columns");
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max(tcol, vcol))
      throw ValidationError("data CSV row " + std::to_string(row) + " has too few columns");
    try {
      size_t used = 0;
      const double t = std::stod(cells[tcol], &used);
      if (used != cells[tcol].size()) throw std::invalid_argument("t");
      const double v = std::stod(cells[vcol], &used);
      if (used != cells[vcol].size()) throw std::invalid_argument("v");
      out.times.push_back(t);
      out.values.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("data CSV row " + std::to_string(row) + " is not numeric");
    }
  }
  if (tcol < 0) throw ValidationError("data CSV is empty");
  return out;
}

DataSeries load_data_csv(const std::string& path) { return parse_data_csv(read_file(path)); }

std::string fit_report_json(const FitResult& r, const ResidualReport& res) {
  json j;
  j["k_hat"] = r.k_hat;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["nll"] = r.nll;
  j["rms"] = r.rms;
  j["converged"] = r.converged;
  j["at_boundary"] = r.at_boundary;
  j["degenerate"] = r.degenerate;
  j["evaluations"] = r.evaluations;
  j["efficiencies"] = r.efficiencies;
  j["grid"] = json::array();
  for (const auto& [k, nll] : r.grid) j["grid"].push_back({{"k", k}, {"nll", std::isfinite(nll) ? json(nll) : json()}});
  j["residuals"] = {{"rms", res.rms}, {"max_abs", res.max_abs}, {"phase_rms", res.phase_rms},
                    {"phase_points", res.phase_points}};
  return j.dump(2) + "\n";
}

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hsgate
