#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsgate/domain.hpp"

namespace hsgate {

struct DesignConstraints {
  int max_homopolymer = 4;
  /// Unintended complementary runs must be shorter than this.
  int crosstalk_limit = 6;
  long max_attempts = 200000;
};

/// Sequences for every domain in the catalog, complements included.
struct SequenceAssignment {
  DomainCatalog catalog;
  std::map<std::string, std::string> sequences;
  std::uint64_t seed = 0;

  const std::string& at(const std::string& domain) const;
  /// 5'->3' concatenation of a strand's domains.
  std::string strand_sequence(const std::string& strand) const;
  /// `domain<TAB>sequence` lines in catalog order.
  std::string to_table() const;
};

std::string reverse_complement(const std::string& seq);

/// Longest run of consecutive complementary bases between two sequences.
int longest_complementary_run(const std::string& a, const std::string& b);

/// Sense domains over {A,C,T}; complements derived. Throws ValidationError
/// naming the most frequently failing constraint when the budget runs out.
SequenceAssignment assign_sequences(const DomainCatalog& catalog, const DesignConstraints& constraints,
                                    std::uint64_t seed);

struct ConstraintCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct DesignReport {
  std::vector<ConstraintCheck> checks;
  bool ok() const;
  const ConstraintCheck& check(const std::string& name) const;
};

/// Checks: alphabet, lengths, complements, g_confinement, partial_overlap,
/// homopolymer, crosstalk.
DesignReport validate(const SequenceAssignment& assignment, const DesignConstraints& constraints = {});

/// Longest unintended complementary run over all domain pairs, skipping each
/// domain's own designed complement.
int crosstalk_score(const SequenceAssignment& assignment);

/// Length of the complementary stretch a partial clamp between `a` and `b`
/// realizes: the longer of the 3' runs shared by partner(a) with b and by
/// partner(b) with a.
int partial_overlap(const SequenceAssignment& assignment, const std::string& a, const std::string& b);

}  // namespace hsgate
