#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hsgate/fit.hpp"
#include "hsgate/kinetics.hpp"
#include "hsgate/motif.hpp"

namespace hsgate {

/// Everything a simulation run needs, as read from a JSON config.
///
/// `model` is `motif`, `orgate` or `custom`; a custom model lists its own
/// species (with strand census) and reactions.
struct SimConfig {
  std::string model = "motif";
  MotifParams params;
  ReactionNetwork custom;
  InjectionSchedule schedule;
  double t_end_s = 0.0;
  double output_dt_s = 1.0;
  Normalization normalization = Normalization::parse("fixed:150");
  IntegratorOptions integrator;
  std::uint64_t seed = 0;

  // Optional fit settings.
  double k_min = 1e5;
  double k_max = 1e7;
  bool fit_amplitude = false;
  bool fit_offset = false;
  bool fit_efficiency = false;
  int grid_points = 25;

  ReactionNetwork network() const;
  /// Network at a different k_t, for fitting.
  ReactionNetwork network_at(double k_t) const;
};

SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::string& path);
std::string sim_config_to_json(const SimConfig& cfg);

/// `time_s,<species>,fluorescence_norm`; concentrations in nM, 12 significant digits.
void write_trace_csv(std::ostream& os, const Trace& trace, const std::vector<double>& signal);

struct DataSeries {
  std::vector<double> times;
  std::vector<double> values;
};

/// Two columns `time_s,signal`, or a trace CSV (uses `fluorescence_norm`).
DataSeries parse_data_csv(const std::string& text);
DataSeries load_data_csv(const std::string& path);

std::string fit_report_json(const FitResult& result, const ResidualReport& residuals);

/// FNV-1a, for provenance stamps.
std::uint64_t content_hash(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hsgate
