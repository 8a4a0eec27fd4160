#include "hsgate/motif.hpp"

#include <algorithm>

#include "hsgate/error.hpp"

namespace hsgate {

void MotifParams::validate() const {
  if (k_t < 0 || k_rep < 0 || k_leak < 0 || k_close < 0 || tether_conc_M < 0)
    throw ValidationError("motif rate constants must be non-negative");
}

double InjectionSchedule::efficiency(int cycle) const {
  if (cycle < 0 || cycle >= static_cast<int>(per_cycle_efficiency.size())) return 1.0;
  return per_cycle_efficiency[cycle];
}

void InjectionSchedule::validate() const {
  if (!(initial_volume_uL > 0)) throw ValidationError("initial volume must be positive");
  for (const auto& [name, c] : initial_nM)
    if (c < 0) throw ValidationError("initial concentration of " + name + " is negative");
  for (size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!(e.volume_uL > 0)) throw ValidationError("event " + std::to_string(i) + ": volume must be positive");
    if (e.stock_conc_nM < 0) throw ValidationError("event " + std::to_string(i) + ": negative stock");
    if (e.time_s < 0) throw ValidationError("event " + std::to_string(i) + ": negative time");
    if (i && e.time_s < events[i - 1].time_s)
      throw ValidationError("event times must be non-decreasing (event " + std::to_string(i) + ")");
  }
  for (double m : per_cycle_efficiency)
    if (!(m > 0 && m <= 1)) throw ValidationError("per-cycle efficiency must lie in (0, 1]");
}

std::vector<double> InjectionSchedule::event_times() const {
  std::vector<double> t;
  for (const auto& e : events)
    if (t.empty() || e.time_s != t.back()) t.push_back(e.time_s);
  return t;
}

// ---------------------------------------------------------------------------

namespace {

Census census_of(std::initializer_list<std::string> strands) {
  Census c;
  for (const auto& s : strands) ++c[s];
  return c;
}

}  // namespace

ReactionNetwork build_gate_instance(const MotifParams& p, const std::string& sfx) {
  p.validate();
  using namespace species;
  const auto n = [&](const std::string& base) {
    // G.I -> G1.I1, Rb and Q stay shared
    std::string out;
    size_t start = 0;
    while (start <= base.size()) {
      auto dot = base.find('.', start);
      auto part = base.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!out.empty()) out += '.';
      out += (part == "Rb" || part == "Q" || part == "R") ? part : part + sfx;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return out;
  };
  const std::string gate = "gate" + sfx, input = "input" + sfx, fuel = "fuel" + sfx,
                    iex = "input_extractor" + sfx, fex = "fuel_extractor" + sfx;

  ReactionNetwork net;
  net.add_species(n(G), census_of({gate}));
  net.add_species(n(I), census_of({input}));
  net.add_species(n(F), census_of({fuel}));
  net.add_species(R, census_of({kQuencherStrand, kDyeStrand}));
  net.add_species(n(GI), census_of({gate, input}));
  net.add_species(n(GF), census_of({gate, fuel}));
  net.add_species(n(GIRb), census_of({gate, input, kDyeStrand}));
  net.add_species(n(GFRb), census_of({gate, fuel, kDyeStrand}));
  net.add_species(Q, census_of({kQuencherStrand}));
  net.add_species(Rb, census_of({kDyeStrand}));
  net.add_species(n(Iex), census_of({iex}));
  net.add_species(n(Fex), census_of({fex}));
  net.add_species(n(Wi), census_of({input, iex}));
  net.add_species(n(Wf), census_of({fuel, fex}));

  const double kt = p.k_t;
  net.add_reaction({{n(G), n(I)}, {n(GI)}, kt, p.k_reopen(), "R1"});
  net.add_reaction({{n(GI), n(F)}, {n(GF), n(I)}, kt, kt, "R2"});
  net.add_reaction({{n(GI), R}, {n(GIRb), Q}, p.k_rep, std::nullopt, "R3"});
  net.add_reaction({{n(GF), R}, {n(GFRb), Q}, p.k_rep, std::nullopt, "R4"});
  net.add_reaction({{n(Iex), n(I)}, {n(Wi)}, kt, std::nullopt, "R5"});
  net.add_reaction({{n(Fex), n(F)}, {n(Wf)}, kt, std::nullopt, "R6"});
  net.add_reaction({{n(Iex), n(GI)}, {n(G), n(Wi)}, kt, std::nullopt, "R7"});
  net.add_reaction({{n(Fex), n(GF)}, {n(G), n(Wf)}, kt, std::nullopt, "R8"});
  if (p.collapse_reclosure) {
    net.add_reaction({{n(Iex), n(GIRb)}, {n(G), Rb, n(Wi)}, kt, std::nullopt, "R9"});
    net.add_reaction({{n(Fex), n(GFRb)}, {n(G), Rb, n(Wf)}, kt, std::nullopt, "R10"});
  } else {
    net.add_species(n(GRb), census_of({gate, kDyeStrand}));
    net.add_reaction({{n(Iex), n(GIRb)}, {n(GRb), n(Wi)}, kt, std::nullopt, "R9"});
    net.add_reaction({{n(Fex), n(GFRb)}, {n(GRb), n(Wf)}, kt, std::nullopt, "R10"});
    net.add_reaction({{n(GRb)}, {n(G), Rb}, p.k_close, std::nullopt, "C1"});
  }
  net.add_reaction({{Rb, Q}, {R}, kt, std::nullopt, "R11"});
  if (p.k_leak > 0) net.add_reaction({{n(G), n(F)}, {n(GF)}, p.k_leak, std::nullopt, "L1"});
  return net;
}

ReactionNetwork build_hairpin_motif(const MotifParams& p) { return build_gate_instance(p, ""); }

ReactionNetwork build_or_gate(const MotifParams& p) {
  auto net = build_gate_instance(p, "1");
  net.merge(build_gate_instance(p, "2"));
  return net;
}

// ---------------------------------------------------------------------------

std::vector<PhaseMultipliers> renewal_multipliers(int n_cycles, bool doubling, DoublingRule rule) {
  if (n_cycles < 1) throw ValidationError("renewal schedule needs at least one cycle");
  std::vector<PhaseMultipliers> out;
  double input = 1.0, fuel = 2.0;
  for (int c = 0; c < n_cycles; ++c) {
    if (c > 0 && doubling) {
      const double ex = out.back().input;
      input = 2.0 * ex;
      fuel = rule == DoublingRule::equalize ? 2.0 * ex : 2.0 * input;
    }
    out.push_back({input, fuel, true});
    const double ex = 2.0 * input;
    out.push_back({ex, rule == DoublingRule::equalize || !doubling ? ex : fuel, false});
  }
  return out;
}

InjectionSchedule build_renewal_schedule(int n_cycles, double phase_duration_s, bool doubling,
                                         DoublingRule rule) {
  if (!(phase_duration_s > 0)) throw ValidationError("phase duration must be positive");
  using namespace species;
  InjectionSchedule s;
  s.initial_volume_uL = 80.0;
  s.initial_nM = {{G, 1.0 * kUnitConc_nM}, {R, 1.5 * kUnitConc_nM}};
  const auto phases = renewal_multipliers(n_cycles, doubling, rule);
  s.phases.push_back({0.0, "baseline"});
  for (size_t k = 0; k < phases.size(); ++k) {
    const double t = phase_duration_s * static_cast<double>(k + 1);
    const int cycle = static_cast<int>(k / 2);
    const auto& ph = phases[k];
    s.phases.push_back({t, (ph.forward ? "forward " : "reverse ") + std::to_string(cycle + 1)});
    s.events.push_back({t, ph.forward ? I : Iex, kStock_nM, kInsertVolumePerUnit_uL * ph.input, cycle});
    s.events.push_back({t, ph.forward ? F : Fex, kStock_nM, kInsertVolumePerUnit_uL * ph.fuel, cycle});
  }
  s.per_cycle_efficiency.assign(n_cycles, 1.0);
  s.end_time_s = phase_duration_s * static_cast<double>(phases.size() + 1);
  return s;
}

InjectionSchedule build_or_case_schedule(const std::vector<std::pair<bool, bool>>& cases,
                                         double phase_duration_s) {
  if (cases.empty()) throw ValidationError("OR case list is empty");
  if (!(phase_duration_s > 0)) throw ValidationError("phase duration must be positive");
  InjectionSchedule s;
  s.initial_volume_uL = 80.0;
  s.initial_nM = {{"G1", kUnitConc_nM}, {"G2", kUnitConc_nM}, {species::R, 1.5 * kUnitConc_nM}};
  s.phases.push_back({0.0, "baseline"});

  // Net free input/fuel per gate in units of 1x; negative means extractor excess.
  double free_input[2] = {0, 0}, free_fuel[2] = {0, 0};
  double t = phase_duration_s;
  auto add = [&](const std::string& sp, double mult, int cycle) {
    if (mult > 0) s.events.push_back({t, sp, kStock_nM, kInsertVolumePerUnit_uL * mult, cycle});
  };
  for (size_t c = 0; c < cases.size(); ++c) {
    const int cycle = static_cast<int>(c);
    if (c > 0) {
      bool any = false;
      for (int g = 0; g < 2; ++g) {
        const auto sfx = std::to_string(g + 1);
        if (free_input[g] > 0) {
          add("Iex" + sfx, 2.0 * free_input[g], cycle - 1);
          free_input[g] -= 2.0 * free_input[g];
          any = true;
        }
        if (free_fuel[g] > 0) {
          add("Fex" + sfx, 2.0 * free_fuel[g], cycle - 1);
          free_fuel[g] -= 2.0 * free_fuel[g];
          any = true;
        }
      }
      if (any) {
        s.phases.push_back({t, "restore"});
        t += phase_duration_s;
      }
    }
    const bool on[2] = {cases[c].first, cases[c].second};
    s.phases.push_back({t, std::string("case ") + (on[0] ? '1' : '0') + (on[1] ? '1' : '0')});
    for (int g = 0; g < 2; ++g) {
      if (!on[g]) continue;
      const auto sfx = std::to_string(g + 1);
      const double in = 1.0 + std::max(0.0, -free_input[g]);
      const double fu = 2.0 + std::max(0.0, -free_fuel[g]);
      add("I" + sfx, in, cycle);
      add("F" + sfx, fu, cycle);
      free_input[g] += in;
      free_fuel[g] += fu;
    }
    // An all-off case still occupies one phase so that its baseline is observed.
    t += phase_duration_s;
  }
  s.end_time_s = t;
  s.per_cycle_efficiency.assign(cases.size(), 1.0);
  return s;
}

}  // namespace hsgate
