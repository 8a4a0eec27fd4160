#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hsgate/domain.hpp"
#include "hsgate/error.hpp"
#include "hsgate/network.hpp"

namespace hsgate {

/// Unpaired toehold that can nucleate a strand invasion. A toehold whose two
/// neighbours on its strand are both paired sits in a gap between helices
/// and is not reported.
struct ExposedToehold {
  Site site;
  std::string domain;
  int sequestered_bases = 0;  ///< clamp bases held by a partial partner in the same hairpin loop
};

std::vector<ExposedToehold> exposed_toeholds(const Complex& c, const DomainCatalog& catalog);

enum class ReactionKind {
  displacement,  ///< toehold-mediated, irreversible
  exchange,      ///< toehold exchange, reversible
  anneal,        ///< two free complementary strands
  closure,       ///< unimolecular hairpin reclosure (expanded mode only)
};

struct EnumeratedReaction {
  std::vector<Complex> reactants;
  std::vector<Complex> products;
  ReactionKind kind = ReactionKind::displacement;
  bool hindered = false;  ///< initiated on a clamp-sequestered toehold
  double k_forward = 0.0;
  std::optional<double> k_backward;

  Reaction to_reaction() const;
};

struct EnumeratorOptions {
  double k_t = 2.743e6;
  double k_rep = 1.3e6;
  double k_leak = 0.0;
  double k_close = 1.0;
  double tether_conc_M = 1e-7;  ///< reverse of a hairpin opening runs at k_t * tether_conc_M
  bool collapse_reclosure = true;
  /// Displacing one of these strands runs at k_rep.
  std::set<std::string> reporter_strands{"reporter_top"};
  /// Canonical form -> species name; unknown structures keep their canonical form.
  std::map<std::string, std::string> names;
};

/// Every displacement or exchange reaction between `a` and `b` (either one
/// may invade). Products are canonicalized and settled: released strands
/// leave, and naked strands (or, with collapse_reclosure, every complex)
/// refold their hairpins.
std::vector<EnumeratedReaction> enumerate_bimolecular(const Complex& a, const Complex& b,
                                                      const DomainCatalog& catalog,
                                                      const EnumeratorOptions& opts);

class CapacityError : public ValidationError {
 public:
  CapacityError(const std::string& what, std::vector<std::string> frontier)
      : ValidationError(what), frontier_(std::move(frontier)) {}
  const std::vector<std::string>& frontier() const { return frontier_; }

 private:
  std::vector<std::string> frontier_;
};

struct EnumeratedNetwork {
  ReactionNetwork network;
  std::vector<Complex> species;
  std::vector<EnumeratedReaction> reactions;
};

/// Fixed-point closure of enumerate_bimolecular (plus strand annealing and,
/// in expanded mode, unimolecular reclosure) from the seeds. Throws
/// CapacityError once more than `max_species` species would be needed.
EnumeratedNetwork enumerate_network(const std::vector<Complex>& seeds, int max_species,
                                    const DomainCatalog& catalog, const EnumeratorOptions& opts);

}  // namespace hsgate
