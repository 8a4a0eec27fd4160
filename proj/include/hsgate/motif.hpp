#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hsgate/domain.hpp"
#include "hsgate/network.hpp"

namespace hsgate {

/// 1x in the renewal protocols.
inline constexpr double kUnitConc_nM = 100.0;

struct MotifParams {
  double k_t = 2.743e6;    ///< /M/s, every seesaw and extraction step
  double k_rep = 1.3e6;    ///< /M/s, reporter displacement
  double k_leak = 0.0;     ///< /M/s, fuel opening a closed gate
  bool collapse_reclosure = true;
  double k_close = 1.0;    ///< /s, reporter-bound gate reclosure when not collapsed
  /// Effective concentration (M) of the gate's own tethered stem arm. The
  /// reverse of gate opening is unimolecular at k_t * tether_conc_M.
  double tether_conc_M = 1e-7;

  void validate() const;
  double k_reopen() const { return k_t * tether_conc_M; }
};

struct InjectionEvent {
  double time_s = 0.0;
  std::string species;
  double stock_conc_nM = 0.0;
  double volume_uL = 0.0;
  int cycle = 0;  ///< index into per_cycle_efficiency
};

struct InjectionSchedule {
  double initial_volume_uL = 80.0;
  std::map<std::string, double> initial_nM;
  std::vector<InjectionEvent> events;
  std::vector<double> per_cycle_efficiency;
  /// Labelled phase start times (s) and the natural end of the protocol; used
  /// for plotting and per-phase summaries, not by the integrator.
  std::vector<std::pair<double, std::string>> phases;
  double end_time_s = 0.0;

  /// Multiplier for a cycle; cycles past the end of the list use 1.0.
  double efficiency(int cycle) const;
  /// Event times non-decreasing, volumes and stocks positive, efficiencies in (0, 1].
  void validate() const;
  /// Distinct event timestamps in order.
  std::vector<double> event_times() const;
  double last_event_time() const { return events.empty() ? 0.0 : events.back().time_s; }
};

enum class DoublingRule {
  equalize,         ///< after cycle 1, I and F both at 2x the preceding extractors
  keep_fuel_ratio,  ///< F stays at twice I in every forward phase
};

/// Curated network: G + I <-> G.I, fuel exchange, reporting, extraction, restoration,
/// and the optional fuel leak.
ReactionNetwork build_hairpin_motif(const MotifParams& p);

/// Two motif instances (suffix 1 and 2) sharing one reporter.
ReactionNetwork build_or_gate(const MotifParams& p);

/// Motif network with every species and strand name suffixed; reporter species shared.
ReactionNetwork build_gate_instance(const MotifParams& p, const std::string& suffix);

/// Stock used for every insert; volumes scale with the multiplier.
inline constexpr double kStock_nM = 10000.0;
inline constexpr double kInsertVolumePerUnit_uL = 0.8;

InjectionSchedule build_renewal_schedule(int n_cycles, double phase_duration_s, bool doubling,
                                         DoublingRule rule = DoublingRule::equalize);

/// Per-event multipliers of 1x that build_renewal_schedule realizes.
struct PhaseMultipliers {
  double input = 0.0;
  double fuel = 0.0;
  bool forward = true;
};
std::vector<PhaseMultipliers> renewal_multipliers(int n_cycles, bool doubling, DoublingRule rule);

InjectionSchedule build_or_case_schedule(const std::vector<std::pair<bool, bool>>& cases,
                                         double phase_duration_s);

/// Names used by the curated networks.
namespace species {
inline const std::string G = "G", I = "I", F = "F", R = "R", GI = "G.I", GF = "G.F", GIRb = "G.I.Rb",
                         GFRb = "G.F.Rb", Q = "Q", Rb = "Rb", Iex = "Iex", Fex = "Fex", Wi = "Wi", Wf = "Wf",
                         GRb = "G.Rb";
}

/// Strand that carries the dye.
inline const std::string kDyeStrand = "reporter_bottom";
inline const std::string kQuencherStrand = "reporter_top";

/// Domain-level structures of one motif instance. `names` maps canonical
/// forms to the curated species names.
struct MotifStructures {
  DomainCatalog catalog;
  std::map<std::string, Complex> species;
  std::map<std::string, std::string> names;
};

MotifStructures motif_structures(int branch_length = kDefaultBranchLength);

}  // namespace hsgate
