#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsgate {

enum class DomainKind { toehold, branch };

inline constexpr int kToeholdLength = 5;
inline constexpr int kDefaultBranchLength = 15;

struct DomainSpec {
  std::string name;
  int length_nt = 0;
  DomainKind kind = DomainKind::branch;
  std::optional<std::string> complement_of;
};

/// A strand is an ordered list of domain names, 5' to 3'.
struct Strand {
  std::string name;
  std::vector<std::string> domains;

  bool operator==(const Strand&) const = default;
};

/// Domains and strands of one design. Complement relations are kept symmetric,
/// and the first-declared member of each pair is the sense (designed) domain.
class DomainCatalog {
 public:
  /// Adds `name` and, when `complement` is non-empty, its complement with the
  /// same length and kind.
  void add_pair(const std::string& name, int length_nt, DomainKind kind,
                const std::string& complement);
  void add(DomainSpec spec);
  void add_strand(Strand strand);

  /// Declares that two domains share `bases` complementary bases without being
  /// full complements (the toehold sequestering clamp).
  void set_partial(const std::string& a, const std::string& b, int bases);
  int partial_bases(const std::string& a, const std::string& b) const;

  bool contains(const std::string& name) const { return domains_.count(name) != 0; }
  const DomainSpec& at(const std::string& name) const;
  const DomainSpec& complement(const std::string& name) const;
  bool are_complementary(const std::string& a, const std::string& b) const;
  bool is_sense(const std::string& name) const;
  bool is_toehold(const std::string& name) const { return at(name).kind == DomainKind::toehold; }

  const Strand& strand(const std::string& name) const;
  bool has_strand(const std::string& name) const { return strands_.count(name) != 0; }

  /// Domain names in declaration order.
  const std::vector<std::string>& names() const { return order_; }
  std::vector<std::string> sense_names() const;
  std::vector<Strand> strands() const;
  std::vector<std::pair<std::pair<std::string, std::string>, int>> partials() const;

  /// Checks the involution and that every referenced complement exists.
  void check_closed() const;

  /// Key-value record format; records are separated by blank lines.
  ///   name = T1
  ///   length_nt = 5
  ///   kind = toehold
  ///   complement_of = T1*
  /// Strand records use `strand = <name>` and `domains = <d1> <d2> ...`;
  /// a partial clamp is `partial = <a> <b> <bases>`.
  static DomainCatalog parse(std::string_view text);
  static DomainCatalog load(const std::string& path);
  std::string serialize() const;

 private:
  std::map<std::string, DomainSpec> domains_;
  std::vector<std::string> order_;
  std::map<std::string, Strand> strands_;
  std::vector<std::string> strand_order_;
  std::map<std::pair<std::string, std::string>, int> partial_;
};

struct Site {
  int strand = 0;
  int domain = 0;
  auto operator<=>(const Site&) const = default;
};

struct Pairing {
  Site a;
  Site b;
  auto operator<=>(const Pairing&) const = default;
};

/// One physical molecule: strands plus whole-domain hybridized pairs.
class Complex {
 public:
  Complex() = default;
  Complex(std::vector<Strand> strands, std::vector<Pairing> pairings, std::string label = {});
  static Complex single(Strand strand, std::string label = {});

  const std::vector<Strand>& strands() const { return strands_; }
  const std::vector<Pairing>& pairings() const { return pairings_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::optional<Site> partner(Site s) const;
  const std::string& domain_at(Site s) const;
  int domain_count(int strand) const { return static_cast<int>(strands_[strand].domains.size()); }
  bool is_paired(Site s) const { return partner(s).has_value(); }

  /// Lexicographically smallest serialization over strand orderings.
  std::string canonical_form() const;

 private:
  std::vector<Strand> strands_;
  std::vector<Pairing> pairings_;
  std::string label_;
};

/// Validates pairings against the catalog, checks connectivity, reorders the
/// strands into canonical order and sets the label. The label is looked up in
/// `names` (canonical form -> species name) and falls back to the canonical form.
Complex canonicalize(const Complex& c, const DomainCatalog& catalog,
                     const std::map<std::string, std::string>* names = nullptr);

/// Strand name -> copy count.
std::map<std::string, int> strand_census(const Complex& c);

}  // namespace hsgate
