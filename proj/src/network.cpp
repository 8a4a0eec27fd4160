#include "hsgate/network.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "hsgate/error.hpp"

namespace hsgate {

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string join_side(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : sorted(names)) {
    if (!out.empty()) out += " + ";
    out += n;
  }
  return out.empty() ? "0" : out;
}

std::string fmt_rate(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", k);
  return buf;
}

}  // namespace

bool Reaction::same_channel(const Reaction& other) const {
  const auto r1 = sorted(reactants), p1 = sorted(products);
  const auto r2 = sorted(other.reactants), p2 = sorted(other.products);
  if (r1 == r2 && p1 == p2) return true;
  return reversible() && other.reversible() && r1 == p2 && p1 == r2;
}

void ReactionNetwork::add_species(const std::string& name, Census census) {
  if (auto it = index_.find(name); it != index_.end()) {
    if (species_[it->second].census != census)
      throw ValidationError("species " + name + " redeclared with a different strand census");
    return;
  }
  index_.emplace(name, static_cast<int>(species_.size()));
  species_.push_back({name, std::move(census)});
}

void ReactionNetwork::add_reaction(Reaction r) {
  for (const auto* side : {&r.reactants, &r.products})
    for (const auto& s : *side)
      if (!has_species(s)) throw ValidationError("reaction references unknown species: " + s);
  if (r.reactants.empty()) throw ValidationError("reaction without reactants");
  if (r.k_forward < 0 || (r.k_backward && *r.k_backward < 0))
    throw ValidationError("negative rate constant in " + format_reaction(r));
  if (!census_balanced(*this, r)) throw ValidationError("strand census not balanced: " + format_reaction(r));
  reactions_.push_back(std::move(r));
}

int ReactionNetwork::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValidationError("unknown species: " + name);
  return it->second;
}

const Census& ReactionNetwork::census(const std::string& name) const {
  return species_[index_of(name)].census;
}

std::vector<Reaction> ReactionNetwork::expanded() const {
  std::vector<Reaction> out;
  for (const auto& r : reactions_) {
    Reaction fwd = r;
    fwd.k_backward.reset();
    out.push_back(fwd);
    if (r.k_backward) out.push_back({r.products, r.reactants, *r.k_backward, std::nullopt, r.tag + "_rev"});
  }
  return out;
}

std::vector<std::string> ReactionNetwork::strand_names() const {
  std::set<std::string> names;
  for (const auto& s : species_)
    for (const auto& [strand, n] : s.census) names.insert(strand);
  return {names.begin(), names.end()};
}

std::string ReactionNetwork::format_reaction(const Reaction& r) {
  std::string out = join_side(r.reactants) + " -> " + join_side(r.products) + " @ " + fmt_rate(r.k_forward);
  if (r.k_backward) out += ", " + fmt_rate(*r.k_backward);
  return out;
}

std::string ReactionNetwork::dump() const {
  std::vector<std::string> lines;
  for (const auto& r : reactions_) {
    // A reversible channel is written with the lexicographically smaller side first.
    if (r.k_backward && join_side(r.products) < join_side(r.reactants))
      lines.push_back(format_reaction({r.products, r.reactants, *r.k_backward, r.k_forward, r.tag}));
    else
      lines.push_back(format_reaction(r));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

void ReactionNetwork::merge(const ReactionNetwork& other) {
  for (const auto& s : other.species()) add_species(s.name, s.census);
  for (const auto& r : other.reactions()) {
    const bool dup = std::any_of(reactions_.begin(), reactions_.end(),
                                 [&](const Reaction& mine) { return mine.same_channel(r); });
    if (!dup) add_reaction(r);
  }
}

bool census_balanced(const ReactionNetwork& net, const Reaction& r) {
  Census lhs, rhs;
  for (const auto& s : r.reactants)
    for (const auto& [strand, n] : net.census(s)) lhs[strand] += n;
  for (const auto& s : r.products)
    for (const auto& [strand, n] : net.census(s)) rhs[strand] += n;
  return lhs == rhs;
}

}  // namespace hsgate
