#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hsgate {

using Census = std::map<std::string, int>;

/// Mass-action channel. A reversible channel carries its backward constant;
/// the kinetics engine expands it into an explicit reverse channel.
struct Reaction {
  std::vector<std::string> reactants;
  std::vector<std::string> products;
  double k_forward = 0.0;
  std::optional<double> k_backward;
  std::string tag;

  bool reversible() const { return k_backward.has_value(); }
  /// Same channel up to reactant/product order (and direction when reversible).
  bool same_channel(const Reaction& other) const;
};

struct Species {
  std::string name;
  Census census;
};

class ReactionNetwork {
 public:
  /// Adding an existing name with the same census is a no-op.
  void add_species(const std::string& name, Census census);
  /// Rejects unknown species, negative rates and census-unbalanced channels.
  void add_reaction(Reaction r);

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  bool has_species(const std::string& name) const { return index_.count(name) != 0; }
  int index_of(const std::string& name) const;
  const Census& census(const std::string& name) const;

  /// Reactions plus their reverses as separate irreversible channels.
  std::vector<Reaction> expanded() const;
  /// Every strand name appearing in any census, sorted.
  std::vector<std::string> strand_names() const;

  /// One reaction per line, sorted: `A + B -> C @ kf [, kb]`.
  std::string dump() const;
  static std::string format_reaction(const Reaction& r);

  /// Union with shared species identified by name.
  void merge(const ReactionNetwork& other);

 private:
  std::vector<Species> species_;
  std::map<std::string, int> index_;
  std::vector<Reaction> reactions_;
};

bool census_balanced(const ReactionNetwork& net, const Reaction& r);

}  // namespace hsgate
