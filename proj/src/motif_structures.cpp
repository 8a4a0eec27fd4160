#include "hsgate/motif.hpp"

namespace hsgate {

// Gate hairpin (5'->3'):  T1 S* U T1* T2 U* S   stem S*/S and U/U*, loop T1* T2
// Input:                  hI EI U* S T1*
// Fuel:                   T1 U* S EF hF
// Input extractor:        EI S* U EI* hI*       stem EI/EI*, loop S* U
// Fuel extractor:         hF* EF* S* U EF       stem EF*/EF, loop S* U
// Reporter:               bottom U T2* (dye), top U* (quencher)
// T1* and T2 share a two-base clamp that sequesters both inside the closed loop.
MotifStructures motif_structures(int branch_length) {
  MotifStructures m;
  auto& cat = m.catalog;
  const auto toe = DomainKind::toehold;
  const auto br = DomainKind::branch;
  cat.add_pair("T1", kToeholdLength, toe, "T1*");
  cat.add_pair("T2", kToeholdLength, toe, "T2*");
  cat.add_pair("hI", kToeholdLength, toe, "hI*");
  cat.add_pair("hF", kToeholdLength, toe, "hF*");
  cat.add_pair("S", branch_length, br, "S*");
  cat.add_pair("U", branch_length, br, "U*");
  cat.add_pair("EI", branch_length, br, "EI*");
  cat.add_pair("EF", branch_length, br, "EF*");
  cat.set_partial("T1*", "T2", 2);

  const Strand gate{"gate", {"T1", "S*", "U", "T1*", "T2", "U*", "S"}};
  const Strand input{"input", {"hI", "EI", "U*", "S", "T1*"}};
  const Strand fuel{"fuel", {"T1", "U*", "S", "EF", "hF"}};
  const Strand iex{"input_extractor", {"EI", "S*", "U", "EI*", "hI*"}};
  const Strand fex{"fuel_extractor", {"hF*", "EF*", "S*", "U", "EF"}};
  const Strand rb{kDyeStrand, {"U", "T2*"}};
  const Strand rt{kQuencherStrand, {"U*"}};
  for (const auto& s : {gate, input, fuel, iex, fex, rb, rt}) cat.add_strand(s);

  using namespace species;
  auto put = [&](const std::string& name, std::vector<Strand> strands, std::vector<Pairing> pairs) {
    auto c = canonicalize(Complex(std::move(strands), std::move(pairs)), cat);
    m.names[c.canonical_form()] = name;
    c.set_label(name);
    m.species[name] = c;
  };
  put(G, {gate}, {{{0, 1}, {0, 6}}, {{0, 2}, {0, 5}}});
  put(I, {input}, {});
  put(F, {fuel}, {});
  put(Q, {rt}, {});
  put(Rb, {rb}, {});
  put(R, {rb, rt}, {{{0, 0}, {1, 0}}});
  put(Iex, {iex}, {{{0, 0}, {0, 3}}});
  put(Fex, {fex}, {{{0, 1}, {0, 4}}});
  put(GI, {gate, input}, {{{0, 0}, {1, 4}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 2}}});
  put(GF, {gate, fuel}, {{{0, 3}, {1, 0}}, {{0, 2}, {1, 1}}, {{0, 1}, {1, 2}}});
  put(GIRb, {gate, input, rb},
      {{{0, 0}, {1, 4}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 2}}, {{0, 4}, {2, 1}}, {{0, 5}, {2, 0}}});
  put(GFRb, {gate, fuel, rb},
      {{{0, 3}, {1, 0}}, {{0, 2}, {1, 1}}, {{0, 1}, {1, 2}}, {{0, 4}, {2, 1}}, {{0, 5}, {2, 0}}});
  put(Wi, {input, iex}, {{{0, 0}, {1, 4}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 2}}, {{0, 3}, {1, 1}}});
  put(Wf, {fuel, fex}, {{{0, 4}, {1, 0}}, {{0, 3}, {1, 1}}, {{0, 2}, {1, 2}}, {{0, 1}, {1, 3}}});
  put(GRb, {gate, rb}, {{{0, 4}, {1, 1}}, {{0, 5}, {1, 0}}});
  return m;
}

}  // namespace hsgate
