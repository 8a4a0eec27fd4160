#include <cmath>

#include "doctest.h"
#include "hsgate/error.hpp"
#include "hsgate/kinetics.hpp"
#include "oracles.hpp"

using namespace hsgate;

namespace {

SimState state_of(std::map<std::string, double> conc, double volume_uL = 80.0) {
  SimState s;
  s.volume_uL = volume_uL;
  s.conc = std::move(conc);
  return s;
}

InjectionSchedule toy_schedule(double a_nM, double b_nM) {
  InjectionSchedule s;
  s.initial_volume_uL = 80;
  s.initial_nM = {{"A", a_nM}, {"B", b_nM}};
  return s;
}

}  // namespace

TEST_CASE("mass-action derivatives") {
  const auto net = oracle::bimolecular_toy(1e6);
  const auto d = derivatives(state_of({{"A", 1e-7}, {"B", 1e-7}, {"C", 0}}), net);
  CHECK(d.at("C") == doctest::Approx(1e-8));
  CHECK(d.at("A") == doctest::Approx(-1e-8));
  for (const auto& [name, v] : derivatives(state_of({{"A", 0}, {"B", 0}, {"C", 0}}), net)) CHECK(v == 0.0);
  CHECK_THROWS_AS(derivatives(state_of({{"A", 1e-7}}), net), ValidationError);

  ReactionNetwork rev;
  rev.add_species("X", {{"x", 1}});
  rev.add_species("Y", {{"x", 1}});
  rev.add_reaction({{"X"}, {"Y"}, 2.0, 0.5, "iso"});
  const auto eq = derivatives(state_of({{"X", 1e-8}, {"Y", 4e-8}}), rev);
  CHECK(std::abs(eq.at("X")) < 1e-22);
}

TEST_CASE("injection dilutes and adds") {
  const auto blank = apply_injection(state_of({{"X", 100e-9}}), {0, "buffer", 0.0, 20.0, 0});
  CHECK(blank.conc.at("X") == doctest::Approx(80e-9));
  CHECK(blank.volume_uL == doctest::Approx(100.0));

  const auto s = apply_injection(state_of({{"G", 100e-9}, {"I", 0}}), {0, "I", 10000, 0.8, 0});
  CHECK(s.conc.at("I") * 1e9 == doctest::Approx(10000 * 0.8 / 80.8));
  CHECK(s.conc.at("I") * 1e9 == doctest::Approx(99.0).epsilon(1e-3));
  CHECK(s.conc.at("G") == doctest::Approx(100e-9 * 80 / 80.8));

  const auto inert = apply_injection(state_of({{"G", 1e-7}}), {0, "Z", 500, 20, 0});
  CHECK(inert.conc.at("Z") * 1e9 == doctest::Approx(100.0));

  const auto half = apply_injection(state_of({{"G", 0}}), {0, "I", 1000, 20, 0}, 0.5);
  CHECK(half.conc.at("I") * 1e9 == doctest::Approx(100.0));

  CHECK_THROWS_AS(apply_injection(state_of({}), {0, "I", 1, 0.0, 0}), ValidationError);
}

TEST_CASE("second-order reaction matches the closed form") {
  const auto net = oracle::bimolecular_toy(1e6);
  const auto tr = integrate(net, toy_schedule(100, 100), 10.0, 0.5);
  const int c = tr.column("C");
  for (size_t i = 0; i < tr.size(); ++i)
    CHECK(tr.conc[i][c] == doctest::Approx(oracle::second_order_product(1e6, 1e-7, tr.times[i])).epsilon(1e-6));
  CHECK(tr.times.back() == 10.0);
  CHECK(tr.conc.back()[c] * 1e9 == doctest::Approx(50.0).epsilon(1e-3));
}

TEST_CASE("empty network keeps concentrations") {
  InjectionSchedule s;
  s.initial_nM = {{"X", 42}};
  const auto tr = integrate(ReactionNetwork{}, s, 5, 1);
  CHECK(tr.size() == 6);
  for (size_t i = 0; i < tr.size(); ++i) CHECK(tr.conc[i][0] == doctest::Approx(42e-9));
}

TEST_CASE("events: post-event snapshot and records") {
  const auto net = oracle::bimolecular_toy(1e6);
  auto s = toy_schedule(100, 0);
  s.events.push_back({2.5, "B", 10000, 0.8, 0});
  s.events.push_back({2.5, "Z", 1000, 0.8, 0});
  const auto tr = integrate(net, s, 5, 1);
  std::vector<double> expect{0, 1, 2, 2.5, 3, 4, 5};
  CHECK(tr.times == expect);
  REQUIRE(tr.events.size() == 2);
  CHECK(tr.events[0].before.volume_uL == 80);
  CHECK(tr.events[1].after.volume_uL == doctest::Approx(81.6));
  CHECK(tr.volumes_uL[3] == doctest::Approx(81.6));
  CHECK(tr.conc[3][tr.column("B")] * 1e9 == doctest::Approx(8000 / 81.6));
  CHECK(tr.column("Z") >= 0);
  CHECK(tr.column("nothing") == -1);
  const auto rep = oracle::check_conservation(net, s, tr);
  CHECK(rep.worst_within < 1e-9);
  CHECK(rep.worst_across < 1e-12);

  s.events[1].time_s = 1.0;
  CHECK_THROWS_AS(integrate(net, s, 5, 1), ValidationError);
  CHECK_THROWS_AS(integrate(net, toy_schedule(1, 1), 5, 0), ValidationError);
}

TEST_CASE("integration limits surface as numerical errors") {
  const auto net = oracle::bimolecular_toy(1e6);
  IntegratorOptions o;
  o.max_steps_per_segment = 3;
  CHECK_THROWS_AS(integrate(net, toy_schedule(100, 100), 1000, 1000, o), NumericalError);
}

TEST_CASE("reversible exchange reaches detailed balance") {
  ReactionNetwork net;
  net.add_species("G", {{"gate", 1}});
  net.add_species("I", {{"input", 1}});
  net.add_species("G.I", {{"gate", 1}, {"input", 1}});
  net.add_reaction({{"G", "I"}, {"G.I"}, 1e6, 1e6 * 1e-7, "R1"});
  InjectionSchedule s;
  s.initial_nM = {{"G", 100}, {"I", 100}};
  const auto tr = integrate(net, s, 3e5, 1e4);
  const auto end = tr.state(tr.size() - 1);
  for (const auto& [name, v] : derivatives(end, net)) CHECK(std::abs(v) < 1e-12);
  // k [G][I] = k_b [G.I] with [G] = [I] = c0 - x
  const double x = end.conc.at("G.I"), g = end.conc.at("G");
  CHECK(1e6 * g * g == doctest::Approx(0.1 * x).epsilon(1e-4));
}

TEST_CASE("motif renewal: conservation, shape and convergence") {
  const auto net = build_hairpin_motif({});
  const auto sched = build_renewal_schedule(3, 600, true);
  const auto tr = integrate(net, sched, sched.end_time_s, 5);
  const auto rep = oracle::check_conservation(net, sched, tr);
  CHECK(rep.worst_within < 1e-6);
  CHECK(rep.worst_across < 1e-12);
  for (const auto& row : tr.conc)
    for (double c : row) CHECK(c >= -1e-15);

  const auto f = fluorescence(tr, net, Normalization::parse("fixed:150"));
  for (double v : f) CHECK((v >= -1e-9 && v <= 1.0 + 1e-9));
  const auto times = sched.event_times();
  for (size_t k = 0; k < times.size(); ++k) {
    const double t0 = times[k], t1 = k + 1 < times.size() ? times[k + 1] : sched.end_time_s;
    const double start = oracle::value_at(tr, f, t0), end = oracle::value_at(tr, f, t1 - 1e-9);
    CAPTURE(k);
    if (k % 2 == 0)
      CHECK(end > start + 0.1);
    else
      CHECK(end < start - 0.1);
  }

  IntegratorOptions tight;
  tight.rtol = 1e-9;
  tight.atol = 1e-16;
  const auto fine = integrate(net, sched, sched.end_time_s, 2.5, tight);
  for (size_t j = 0; j < tr.species.size(); ++j) {
    const double a = tr.conc.back()[j], b = fine.conc.back()[fine.column(tr.species[j])];
    // Species near zero are only resolved to the absolute tolerance.
    CHECK(std::abs(a - b) <= 1e-4 * std::abs(b) + 10 * IntegratorOptions{}.atol);
  }
}

TEST_CASE("fluorescence observable") {
  const auto net = build_hairpin_motif({});
  CHECK(dye_species(net) == std::vector<std::string>{"G.I.Rb", "G.F.Rb", "Rb"});

  Trace tr;
  tr.species = {"R", "G.I.Rb", "G.F.Rb", "Rb"};
  tr.times = {0, 1, 2};
  tr.volumes_uL = {80, 80, 80};
  tr.conc = {{150e-9, 0, 0, 0}, {0, 50e-9, 40e-9, 60e-9}, {60e-9, 20e-9, 30e-9, 40e-9}};
  const auto f = fluorescence(tr, net, Normalization::parse("fixed:150"));
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(1.0));
  CHECK(f[2] == doctest::Approx(90.0 / 150.0));
  const auto raw = fluorescence(tr, net, Normalization::parse("none"));
  CHECK(raw[2] == doctest::Approx(90.0));
  const auto mm = fluorescence(tr, net, Normalization::parse("minmax"));
  CHECK(mm[0] == 0.0);
  CHECK(mm[1] == doctest::Approx(1.0));

  CHECK(Normalization::parse("fixed(120)").max_nM == 120);
  CHECK(Normalization::parse("fixed:120").to_string() == "fixed:120");
  CHECK_THROWS_AS(Normalization::parse("fixed:0"), ValidationError);
  CHECK_THROWS_AS(Normalization::parse("fixed:-3"), ValidationError);
  CHECK_THROWS_AS(Normalization::parse("loud"), ValidationError);
}

TEST_CASE("SSA basics") {
  const auto net = oracle::bimolecular_toy(1e6);
  const auto flat = ssa_simulate(net, {{"A", 0}, {"B", 0}}, 1e-15, 100, 1);
  CHECK(flat.times.size() == 1);
  CHECK(flat.at(50)[0] == 0);

  const auto a = ssa_simulate(net, {{"A", 500}, {"B", 500}}, 1e-15, 50, 9);
  const auto b = ssa_simulate(net, {{"A", 500}, {"B", 500}}, 1e-15, 50, 9);
  CHECK(a.times == b.times);
  CHECK(a.counts == b.counts);
  const auto c = ssa_simulate(net, {{"A", 500}, {"B", 500}}, 1e-15, 50, 10);
  CHECK(c.times != a.times);
  for (const auto& row : a.counts) CHECK(row[0] + row[2] == 500);

  CHECK_THROWS_AS(ssa_simulate(net, {{"Nope", 1}}, 1e-15, 1, 1), ValidationError);
}

TEST_CASE("SSA mean tracks the ODE at half completion") {
  const double k = 1e6, n0 = 1e4, V = 1e-15;
  const double c0 = n0 / (kAvogadro * V);
  const double t_half = 1.0 / (k * c0);
  const auto net = oracle::bimolecular_toy(k);
  double sum = 0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    const auto tr = ssa_simulate(net, {{"A", 10000}, {"B", 10000}}, V, t_half, 1000 + r);
    sum += static_cast<double>(tr.at(t_half)[2]);
  }
  const double ode = oracle::second_order_product(k, c0, t_half) * kAvogadro * V;
  CHECK(sum / runs == doctest::Approx(ode).epsilon(0.03));
}
