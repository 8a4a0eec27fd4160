#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsgate/motif.hpp"
#include "hsgate/network.hpp"

namespace hsgate {

inline constexpr double kAvogadro = 6.02214076e23;

/// Concentrations are molar; volume in microlitres.
struct SimState {
  double time_s = 0.0;
  double volume_uL = 0.0;
  std::map<std::string, double> conc;
};

/// Mass-action rates (M/s) for every network species. Throws ValidationError
/// when a network species is missing from the state.
std::map<std::string, double> derivatives(const SimState& s, const ReactionNetwork& net);

/// Adds `event.volume_uL` of stock, diluting everything already present.
/// The stock concentration is scaled by `efficiency`.
SimState apply_injection(const SimState& s, const InjectionEvent& event, double efficiency = 1.0);

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-15;  ///< M
  long max_steps_per_segment = 5'000'000;
};

struct EventRecord {
  size_t event_index = 0;
  double time_s = 0.0;
  SimState before;
  SimState after;
};

/// Snapshots at multiples of the output step plus every event time. At an
/// event time the stored snapshot is the post-event state; `events` keeps both.
struct Trace {
  std::vector<std::string> species;  ///< network order, then injected species unknown to the network
  std::vector<double> times;
  std::vector<double> volumes_uL;
  std::vector<std::vector<double>> conc;  ///< [snapshot][species], M
  std::vector<EventRecord> events;

  size_t size() const { return times.size(); }
  int column(const std::string& species) const;  ///< -1 if absent
  SimState state(size_t i) const;
};

/// Starts from the schedule's initial concentrations and volume.
SimState initial_state(const ReactionNetwork& net, const InjectionSchedule& schedule);

/// Dormand-Prince 5(4) with adaptive steps, restarted at every event.
Trace integrate(const ReactionNetwork& net, const InjectionSchedule& schedule, double t_end_s,
                double output_dt_s, const IntegratorOptions& opts = {});

/// Same, with snapshots at the given strictly increasing times (plus event
/// times). Runs to the later of the last output time and the last event.
Trace integrate_at(const ReactionNetwork& net, const InjectionSchedule& schedule,
                   const std::vector<double>& output_times, const IntegratorOptions& opts = {});

struct Normalization {
  enum class Mode { none, minmax, fixed };
  Mode mode = Mode::none;
  double max_nM = 150.0;

  /// Accepts `none`, `minmax`, `fixed:<nM>` and `fixed(<nM>)`.
  static Normalization parse(const std::string& text);
  std::string to_string() const;
};

/// Species whose census holds the dye strand but not the quencher strand.
std::vector<std::string> dye_species(const ReactionNetwork& net);

/// Unquenched dye concentration in nM at every snapshot.
std::vector<double> raw_signal(const Trace& trace, const ReactionNetwork& net);

std::vector<double> fluorescence(const Trace& trace, const ReactionNetwork& net, const Normalization& norm);

struct SsaTrajectory {
  std::vector<std::string> species;
  std::vector<double> times;             ///< firing times, starting with 0
  std::vector<std::vector<long>> counts;  ///< counts after each firing

  /// Counts in effect at time t (last firing at or before t).
  const std::vector<long>& at(double t) const;
};

/// Gillespie direct method. Bimolecular propensity k/(N_A V) nA nB, or
/// k/(N_A V) n(n-1) for a homodimer channel.
SsaTrajectory ssa_simulate(const ReactionNetwork& net, const std::map<std::string, long>& initial_counts,
                           double volume_L, double t_end_s, std::uint64_t seed);

}  // namespace hsgate
