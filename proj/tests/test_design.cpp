#include <algorithm>
#include <set>

#include "doctest.h"
#include "hsgate/design.hpp"
#include "hsgate/error.hpp"
#include "hsgate/motif.hpp"

using namespace hsgate;

namespace {

// Longest common substring, computed independently of the library.
int longest_common(const std::string& a, const std::string& b) {
  int best = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      int n = 0;
      while (i + n < a.size() && j + n < b.size() && a[i + n] == b[j + n]) ++n;
      best = std::max(best, n);
    }
  return best;
}

std::string revcomp(const std::string& s) {
  std::string out(s.rbegin(), s.rend());
  for (auto& c : out) c = c == 'A' ? 'T' : c == 'T' ? 'A' : c == 'C' ? 'G' : 'C';
  return out;
}

}  // namespace

TEST_CASE("reverse complement") {
  CHECK(reverse_complement("ACTTC") == "GAAGT");
  CHECK(reverse_complement(reverse_complement("ACCTATC")) == "ACCTATC");
  CHECK(longest_complementary_run("ACTTC", "GAAGT") == 5);
  CHECK(longest_complementary_run("AAAA", "AAAA") == 0);
}

TEST_CASE("default catalog, seed 1") {
  const auto cat = motif_structures().catalog;
  const auto a = assign_sequences(cat, {}, 1);
  const auto rep = validate(a);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  CHECK(a.at("T1").size() == 5);
  CHECK(a.at("T1").find_first_not_of("ACT") == std::string::npos);
  CHECK(a.at("T1*") == reverse_complement(a.at("T1")));
  CHECK(partial_overlap(a, "T1*", "T2") == 2);
  CHECK(crosstalk_score(a) <= 5);
  CHECK(a.strand_sequence("input") ==
        a.at("hI") + a.at("EI") + a.at("U*") + a.at("S") + a.at("T1*"));
}

TEST_CASE("assignment is deterministic per seed") {
  const auto cat = motif_structures().catalog;
  CHECK(assign_sequences(cat, {}, 5).to_table() == assign_sequences(cat, {}, 5).to_table());
  CHECK(assign_sequences(cat, {}, 5).to_table() != assign_sequences(cat, {}, 6).to_table());
}

TEST_CASE("validator catches planted violations") {
  const auto cat = motif_structures().catalog;
  const auto good = assign_sequences(cat, {}, 2);

  auto g = good;
  g.sequences["S"][3] = 'G';
  g.sequences["S*"] = reverse_complement(g.sequences["S"]);
  CHECK_FALSE(validate(g).check("g_confinement").passed);
  CHECK(validate(g).check("alphabet").passed);

  auto wrong = good;
  wrong.sequences["U*"][0] = wrong.sequences["U*"][0] == 'A' ? 'C' : 'A';
  CHECK_FALSE(validate(wrong).check("complements").passed);

  auto len = good;
  len.sequences["T2"] += "A";
  CHECK_FALSE(validate(len).check("lengths").passed);

  auto run = good;
  run.sequences["EI"].replace(0, 5, "TTTTT");
  run.sequences["EI*"] = reverse_complement(run.sequences["EI"]);
  CHECK_FALSE(validate(run).check("homopolymer").passed);

  // Three complementary bases at the clamp: T2 shares the last three bases of T1,
  // so T1* pairs with three bases of T2.
  auto three = good;
  const auto t1 = three.sequences["T1"];
  three.sequences["T2"] = std::string("A") + (t1[1] == 'C' ? 'T' : 'C') + t1.substr(2);
  three.sequences["T2*"] = reverse_complement(three.sequences["T2"]);
  CHECK(partial_overlap(three, "T1*", "T2") >= 3);
  CHECK_FALSE(validate(three).check("partial_overlap").passed);

  auto bad_alpha = good;
  bad_alpha.sequences["hF"][0] = 'N';
  CHECK_FALSE(validate(bad_alpha).check("alphabet").passed);
  CHECK_FALSE(validate(bad_alpha).ok());
}

TEST_CASE("complement domains may contain G") {
  DomainCatalog cat;
  cat.add_pair("X", 5, DomainKind::toehold, "X*");
  SequenceAssignment a{cat, {{"X", "ACTTC"}, {"X*", "GAAGT"}}, 0};
  const auto rep = validate(a);
  CHECK(rep.check("g_confinement").passed);
  CHECK(rep.check("alphabet").passed);
}

TEST_CASE("crosstalk score") {
  DomainCatalog one;
  one.add_pair("X", 12, DomainKind::branch, "X*");
  CHECK(crosstalk_score({one, {{"X", "ACTACCATCACT"}, {"X*", reverse_complement("ACTACCATCACT")}}, 0}) == 0);

  DomainCatalog two;
  two.add_pair("A", 10, DomainKind::branch, "A*");
  two.add_pair("B", 10, DomainKind::branch, "B*");
  const std::string a = "ACCTACTCAT";
  SequenceAssignment planted{two, {{"A", a}, {"A*", revcomp(a)}, {"B", revcomp(a)}, {"B*", a}}, 0};
  CHECK(crosstalk_score(planted) == 10);
}

TEST_CASE("crosstalk matches an independent scan and ignores order") {
  const auto cat = motif_structures().catalog;
  const auto a = assign_sequences(cat, {}, 9);
  int expect = 0;
  for (const auto& x : cat.names())
    for (const auto& y : cat.names()) {
      if (x == y || cat.are_complementary(x, y)) continue;
      expect = std::max(expect, longest_common(a.at(x), revcomp(a.at(y))));
    }
  CHECK(crosstalk_score(a) == expect);

  // The same sequences under a catalog declared in another order.
  DomainCatalog rev;
  auto names = cat.sense_names();
  std::reverse(names.begin(), names.end());
  for (const auto& n : names) rev.add_pair(n, cat.at(n).length_nt, cat.at(n).kind, cat.complement(n).name);
  SequenceAssignment b{rev, a.sequences, 0};
  CHECK(crosstalk_score(b) == expect);
}

TEST_CASE("unsatisfiable constraints") {
  const auto cat = motif_structures().catalog;
  DesignConstraints c;
  c.max_homopolymer = 0;
  try {
    assign_sequences(cat, c, 1);
    FAIL("expected failure");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("homopolymer") != std::string::npos);
  }
  DesignConstraints tight;
  tight.crosstalk_limit = 2;
  tight.max_attempts = 200;
  CHECK_THROWS_AS(assign_sequences(cat, tight, 1), ValidationError);
}

TEST_CASE("100 consecutive seeds validate") {
  const auto cat = motif_structures().catalog;
  std::set<std::string> distinct;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto a = assign_sequences(cat, {}, seed);
    CHECK(validate(a).ok());
    CHECK(crosstalk_score(a) <= 5);
    distinct.insert(a.to_table());
  }
  CHECK(distinct.size() == 100);
}

TEST_CASE("table output") {
  const auto a = assign_sequences(motif_structures().catalog, {}, 1);
  const auto t = a.to_table();
  CHECK(t.rfind("T1\t", 0) == 0);
  CHECK(std::count(t.begin(), t.end(), '\n') == static_cast<long>(a.catalog.names().size()));
}
