#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hsgate/enumerator.hpp"
#include "hsgate/motif.hpp"

using namespace hsgate;

namespace {

std::vector<Complex> motif_seeds(const MotifStructures& m) {
  std::vector<Complex> seeds;
  for (const char* n : {"G", "I", "F", "R", "Iex", "Fex"}) seeds.push_back(m.species.at(n));
  return seeds;
}

EnumeratorOptions options(const MotifStructures& m, bool collapse, double k_leak) {
  EnumeratorOptions o;
  o.names = m.names;
  o.collapse_reclosure = collapse;
  o.k_leak = k_leak;
  return o;
}

// Dump lines, optionally without hindered channels.
std::set<std::string> lines(const ReactionNetwork& net, bool drop_hindered) {
  ReactionNetwork kept;
  for (const auto& s : net.species()) kept.add_species(s.name, s.census);
  for (const auto& r : net.reactions())
    if (!(drop_hindered && r.tag == "hindered")) kept.add_reaction(r);
  std::set<std::string> out;
  std::istringstream in(kept.dump());
  for (std::string line; std::getline(in, line);) out.insert(line);
  return out;
}

std::set<std::string> curated(bool collapse, double k_leak) {
  MotifParams p;
  p.collapse_reclosure = collapse;
  p.k_leak = k_leak;
  return lines(build_hairpin_motif(p), false);
}

}  // namespace

TEST_CASE("exposed toeholds of the closed gate") {
  const auto m = motif_structures();
  const auto ex = exposed_toeholds(m.species.at("G"), m.catalog);
  std::map<std::string, int> seen;
  for (const auto& e : ex) seen[e.domain] = e.sequestered_bases;
  CHECK(seen == std::map<std::string, int>{{"T1", 0}, {"T1*", 2}, {"T2", 2}});
}

TEST_CASE("exposed toeholds of the reporter") {
  const auto m = motif_structures();
  const auto ex = exposed_toeholds(m.species.at("R"), m.catalog);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].domain == "T2*");
  CHECK(ex[0].sequestered_bases == 0);
  CHECK(m.species.at("R").strands()[ex[0].site.strand].name == "reporter_bottom");
}

TEST_CASE("fully paired duplex exposes nothing") {
  DomainCatalog cat;
  cat.add_pair("A", 5, DomainKind::toehold, "A*");
  cat.add_pair("B", 12, DomainKind::branch, "B*");
  const Strand x{"x", {"A", "B"}}, y{"y", {"B*", "A*"}};
  const auto duplex = canonicalize(Complex({x, y}, {{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}}), cat);
  CHECK(exposed_toeholds(duplex, cat).empty());
}

TEST_CASE("input opens the gate by toehold exchange") {
  const auto m = motif_structures();
  const auto o = options(m, true, 0);
  const auto rs = enumerate_bimolecular(m.species.at("I"), m.species.at("G"), m.catalog, o);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == ReactionKind::exchange);
  CHECK_FALSE(rs[0].hindered);
  REQUIRE(rs[0].products.size() == 1);
  CHECK(rs[0].products[0].label() == "G.I");
  CHECK(rs[0].k_forward == doctest::Approx(o.k_t));
  REQUIRE(rs[0].k_backward);
}

TEST_CASE("fuel on the closed gate is the hindered leak") {
  const auto m = motif_structures();
  const auto rs = enumerate_bimolecular(m.species.at("F"), m.species.at("G"), m.catalog, options(m, true, 42));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].hindered);
  CHECK(rs[0].k_forward == 42);
  CHECK(rs[0].products[0].label() == "G.F");
}

TEST_CASE("reporter does not react with itself") {
  const auto m = motif_structures();
  CHECK(enumerate_bimolecular(m.species.at("R"), m.species.at("R"), m.catalog, options(m, true, 0)).empty());
}

TEST_CASE("reporter displacement runs at the reporter rate") {
  const auto m = motif_structures();
  const auto o = options(m, true, 0);
  const auto rs = enumerate_bimolecular(m.species.at("G.I"), m.species.at("R"), m.catalog, o);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].k_forward == doctest::Approx(o.k_rep));
  CHECK_FALSE(rs[0].k_backward);
}

TEST_CASE("closure reproduces the curated network") {
  const auto m = motif_structures();
  for (bool collapse : {true, false}) {
    CAPTURE(collapse);
    const auto en0 = enumerate_network(motif_seeds(m), 40, m.catalog, options(m, collapse, 0));
    CHECK(lines(en0.network, true) == curated(collapse, 0));
    const auto en1 = enumerate_network(motif_seeds(m), 40, m.catalog, options(m, collapse, 500));
    CHECK(lines(en1.network, false) == curated(collapse, 500));
  }
}

TEST_CASE("enumerated channels are census balanced") {
  const auto m = motif_structures();
  const auto en = enumerate_network(motif_seeds(m), 40, m.catalog, options(m, false, 1));
  for (const auto& r : en.network.reactions()) CHECK(census_balanced(en.network, r));
  for (const auto& er : en.reactions) {
    std::map<std::string, int> lhs, rhs;
    for (const auto& c : er.reactants)
      for (const auto& [s, n] : strand_census(c)) lhs[s] += n;
    for (const auto& c : er.products)
      for (const auto& [s, n] : strand_census(c)) rhs[s] += n;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("closure does not depend on seed order") {
  const auto m = motif_structures();
  const auto o = options(m, true, 3);
  auto seeds = motif_seeds(m);
  const auto ref = enumerate_network(seeds, 40, m.catalog, o).network.dump();
  std::mt19937 rng(11);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(seeds.begin(), seeds.end(), rng);
    CHECK(enumerate_network(seeds, 40, m.catalog, o).network.dump() == ref);
  }
}

TEST_CASE("inert seeds and capacity") {
  const auto m = motif_structures();
  const auto o = options(m, true, 0);
  const auto lone = enumerate_network({m.species.at("R")}, 5, m.catalog, o);
  CHECK(lone.network.reactions().empty());
  CHECK(lone.species.size() == 1);

  CHECK_THROWS_AS(enumerate_network({m.species.at("G"), m.species.at("I")}, 1, m.catalog, o), CapacityError);
  try {
    enumerate_network({m.species.at("G"), m.species.at("I")}, 2, m.catalog, o);
    FAIL("expected capacity error");
  } catch (const CapacityError& e) {
    CHECK_FALSE(e.frontier().empty());
  }
}
