#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hsgate/domain.hpp"
#include "hsgate/error.hpp"
#include "hsgate/motif.hpp"

using namespace hsgate;

namespace {

// Rebuilds `c` with its strands listed in `order`.
Complex permuted(const Complex& c, const std::vector<int>& order) {
  std::vector<int> where(order.size());
  for (size_t i = 0; i < order.size(); ++i) where[order[i]] = static_cast<int>(i);
  std::vector<Strand> strands;
  for (int s : order) strands.push_back(c.strands()[s]);
  std::vector<Pairing> pairs;
  for (const auto& p : c.pairings())
    pairs.push_back({{where[p.a.strand], p.a.domain}, {where[p.b.strand], p.b.domain}});
  return Complex(strands, pairs);
}

}  // namespace

TEST_CASE("complement is a declared involution") {
  const auto m = motif_structures();
  CHECK(m.catalog.complement("T1").name == "T1*");
  CHECK(m.catalog.complement("T1*").name == "T1");
  for (const auto& d : m.catalog.names())
    CHECK(m.catalog.complement(m.catalog.complement(d).name).name == d);
  CHECK_THROWS_AS(m.catalog.complement("Zq"), ValidationError);
}

TEST_CASE("toeholds are 5 nt and branches at least 10") {
  const auto m = motif_structures();
  for (const auto& d : m.catalog.names()) {
    const auto& spec = m.catalog.at(d);
    if (spec.kind == DomainKind::toehold)
      CHECK(spec.length_nt == 5);
    else
      CHECK(spec.length_nt >= 10);
  }
  DomainCatalog c;
  CHECK_THROWS_AS(c.add_pair("B", 4, DomainKind::branch, "B*"), ValidationError);
}

TEST_CASE("canonical label ignores strand order") {
  const auto m = motif_structures();
  const auto& gi = m.species.at("G.I");
  const auto swapped = canonicalize(permuted(gi, {1, 0}), m.catalog, &m.names);
  CHECK(swapped.label() == "G.I");
  CHECK(swapped.canonical_form() == gi.canonical_form());
}

TEST_CASE("hairpin gate canonicalizes to G") {
  const auto m = motif_structures();
  const Complex raw({m.catalog.strand("gate")}, {{{0, 2}, {0, 5}}, {{0, 1}, {0, 6}}});
  CHECK(canonicalize(raw, m.catalog, &m.names).label() == "G");
}

TEST_CASE("non-complementary pairing is rejected") {
  const auto m = motif_structures();
  // T1 (gate index 0) against T2 (gate index 4).
  const Complex bad({m.catalog.strand("gate")}, {{{0, 0}, {0, 4}}});
  CHECK_THROWS_AS(canonicalize(bad, m.catalog), ValidationError);
}

TEST_CASE("disconnected complexes are rejected") {
  const auto m = motif_structures();
  const Complex two({m.catalog.strand("input"), m.catalog.strand("fuel")}, {});
  CHECK_THROWS_AS(canonicalize(two, m.catalog), ValidationError);
}

TEST_CASE("strand census") {
  const auto m = motif_structures();
  CHECK(strand_census(m.species.at("G.I")) == std::map<std::string, int>{{"gate", 1}, {"input", 1}});
  CHECK(strand_census(m.species.at("R")) ==
        std::map<std::string, int>{{"reporter_bottom", 1}, {"reporter_top", 1}});
  CHECK(strand_census(m.species.at("I")) == std::map<std::string, int>{{"input", 1}});
}

TEST_CASE("canonicalize is idempotent and permutation invariant") {
  const auto m = motif_structures();
  std::mt19937 rng(7);
  for (const auto& [name, c] : m.species) {
    const auto once = canonicalize(c, m.catalog, &m.names);
    CHECK(canonicalize(once, m.catalog, &m.names).canonical_form() == once.canonical_form());
    std::vector<int> order(c.strands().size());
    std::iota(order.begin(), order.end(), 0);
    for (int trial = 0; trial < 6; ++trial) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto p = canonicalize(permuted(c, order), m.catalog, &m.names);
      CHECK(p.canonical_form() == once.canonical_form());
      CHECK(p.label() == name);
    }
  }
}

TEST_CASE("catalog text round trip") {
  const auto m = motif_structures();
  const auto text = m.catalog.serialize();
  const auto back = DomainCatalog::parse(text);
  CHECK(back.names() == m.catalog.names());
  CHECK(back.partial_bases("T1*", "T2") == 2);
  CHECK(back.strand("gate") == m.catalog.strand("gate"));
  CHECK(back.serialize() == text);
}

TEST_CASE("catalog parse errors") {
  CHECK_THROWS_AS(DomainCatalog::parse("name = A\nlength_nt = 5\nkind = toehold\ncomplement_of = B\n"),
                  ValidationError);
  CHECK_THROWS_AS(DomainCatalog::parse("name = A\nlength_nt = x\nkind = toehold\n"), ValidationError);
  CHECK_THROWS_AS(DomainCatalog::load("/nonexistent/catalog.txt"), IoError);
}
