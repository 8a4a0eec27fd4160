#include "hsgate/domain.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hsgate/error.hpp"

namespace hsgate {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void DomainCatalog::add(DomainSpec spec) {
  if (spec.name.empty()) throw ValidationError("domain with empty name");
  if (spec.length_nt <= 0) throw ValidationError("domain " + spec.name + ": length_nt must be positive");
  if (spec.kind == DomainKind::branch && spec.length_nt < 10)
    throw ValidationError("branch domain " + spec.name + " must be at least 10 nt");
  if (domains_.count(spec.name)) throw ValidationError("duplicate domain name: " + spec.name);
  order_.push_back(spec.name);
  domains_.emplace(spec.name, std::move(spec));
}

void DomainCatalog::add_pair(const std::string& name, int length_nt, DomainKind kind,
                             const std::string& complement) {
  add({name, length_nt, kind, complement.empty() ? std::nullopt : std::optional(complement)});
  if (!complement.empty()) add({complement, length_nt, kind, name});
}

void DomainCatalog::add_strand(Strand strand) {
  if (strand.domains.empty()) throw ValidationError("strand " + strand.name + " has no domains");
  for (const auto& d : strand.domains) at(d);
  if (strands_.count(strand.name)) throw ValidationError("duplicate strand name: " + strand.name);
  strand_order_.push_back(strand.name);
  strands_.emplace(strand.name, std::move(strand));
}

void DomainCatalog::set_partial(const std::string& a, const std::string& b, int bases) {
  at(a);
  at(b);
  if (bases <= 0) throw ValidationError("partial clamp needs a positive base count");
  partial_[ordered(a, b)] = bases;
}

int DomainCatalog::partial_bases(const std::string& a, const std::string& b) const {
  auto it = partial_.find(ordered(a, b));
  return it == partial_.end() ? 0 : it->second;
}

const DomainSpec& DomainCatalog::at(const std::string& name) const {
  auto it = domains_.find(name);
  if (it == domains_.end()) throw ValidationError("unknown domain: " + name);
  return it->second;
}

const DomainSpec& DomainCatalog::complement(const std::string& name) const {
  const auto& d = at(name);
  if (!d.complement_of) throw ValidationError("domain " + name + " has no complement");
  return at(*d.complement_of);
}

bool DomainCatalog::are_complementary(const std::string& a, const std::string& b) const {
  const auto& d = at(a);
  return d.complement_of && *d.complement_of == b;
}

bool DomainCatalog::is_sense(const std::string& name) const {
  const auto& d = at(name);
  if (!d.complement_of) return true;
  const auto self = std::find(order_.begin(), order_.end(), name);
  const auto other = std::find(order_.begin(), order_.end(), *d.complement_of);
  return self < other;
}

const Strand& DomainCatalog::strand(const std::string& name) const {
  auto it = strands_.find(name);
  if (it == strands_.end()) throw ValidationError("unknown strand: " + name);
  return it->second;
}

std::vector<std::string> DomainCatalog::sense_names() const {
  std::vector<std::string> out;
  for (const auto& n : order_)
    if (is_sense(n)) out.push_back(n);
  return out;
}

std::vector<Strand> DomainCatalog::strands() const {
  std::vector<Strand> out;
  for (const auto& n : strand_order_) out.push_back(strands_.at(n));
  return out;
}

std::vector<std::pair<std::pair<std::string, std::string>, int>> DomainCatalog::partials() const {
  return {partial_.begin(), partial_.end()};
}

void DomainCatalog::check_closed() const {
  for (const auto& [name, d] : domains_) {
    if (!d.complement_of) continue;
    const auto& c = at(*d.complement_of);
    if (!c.complement_of || *c.complement_of != name)
      throw ValidationError("complement relation of " + name + " is not an involution");
    if (c.length_nt != d.length_nt || c.kind != d.kind)
      throw ValidationError("complement " + c.name + " disagrees with " + name + " on length or kind");
  }
}

DomainCatalog DomainCatalog::parse(std::string_view text) {
  DomainCatalog cat;
  std::vector<std::map<std::string, std::string>> records(1);
  std::vector<int> record_line(1, 1);
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto line = trim(raw);
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      if (!records.back().empty()) {
        records.emplace_back();
        record_line.push_back(line_no + 1);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("catalog line " + std::to_string(line_no) + ": expected key = value");
    if (records.back().empty()) record_line.back() = line_no;
    records.back()[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }

  // Domains first so that strands may reference domains declared later.
  std::vector<std::tuple<std::string, std::string, int>> pending_partials;
  std::vector<Strand> pending_strands;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.empty()) continue;
    const auto where = "catalog record at line " + std::to_string(record_line[i]);
    if (r.count("strand")) {
      if (!r.count("domains")) throw ValidationError(where + ": strand without domains");
      pending_strands.push_back({r.at("strand"), split_ws(r.at("domains"))});
      continue;
    }
    if (r.count("partial")) {
      auto parts = split_ws(r.at("partial"));
      if (parts.size() != 3) throw ValidationError(where + ": partial = <a> <b> <bases>");
      pending_partials.emplace_back(parts[0], parts[1], std::stoi(parts[2]));
      continue;
    }
    for (const char* key : {"name", "length_nt", "kind"})
      if (!r.count(key)) throw ValidationError(where + ": missing key " + key);
    DomainSpec d;
    d.name = r.at("name");
    try {
      d.length_nt = std::stoi(r.at("length_nt"));
    } catch (const std::exception&) {
      throw ValidationError(where + ": length_nt is not an integer");
    }
    const auto& kind = r.at("kind");
    if (kind == "toehold")
      d.kind = DomainKind::toehold;
    else if (kind == "branch")
      d.kind = DomainKind::branch;
    else
      throw ValidationError(where + ": kind must be toehold or branch");
    if (r.count("complement_of") && !r.at("complement_of").empty()) d.complement_of = r.at("complement_of");
    cat.add(std::move(d));
  }
  cat.check_closed();
  for (auto& [a, b, n] : pending_partials) cat.set_partial(a, b, n);
  for (auto& s : pending_strands) cat.add_strand(std::move(s));
  return cat;
}

DomainCatalog DomainCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string DomainCatalog::serialize() const {
  std::ostringstream out;
  for (const auto& n : order_) {
    const auto& d = domains_.at(n);
    out << "name = " << d.name << "\n"
        << "length_nt = " << d.length_nt << "\n"
        << "kind = " << (d.kind == DomainKind::toehold ? "toehold" : "branch") << "\n";
    if (d.complement_of) out << "complement_of = " << *d.complement_of << "\n";
    out << "\n";
  }
  for (const auto& [ab, n] : partial_) out << "partial = " << ab.first << " " << ab.second << " " << n << "\n\n";
  for (const auto& sn : strand_order_) {
    const auto& s = strands_.at(sn);
    out << "strand = " << s.name << "\ndomains =";
    for (const auto& d : s.domains) out << " " << d;
    out << "\n\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

Complex::Complex(std::vector<Strand> strands, std::vector<Pairing> pairings, std::string label)
    : strands_(std::move(strands)), pairings_(std::move(pairings)), label_(std::move(label)) {
  for (auto& p : pairings_)
    if (p.b < p.a) std::swap(p.a, p.b);
  std::sort(pairings_.begin(), pairings_.end());
}

Complex Complex::single(Strand strand, std::string label) {
  return Complex({std::move(strand)}, {}, std::move(label));
}

std::optional<Site> Complex::partner(Site s) const {
  for (const auto& p : pairings_) {
    if (p.a == s) return p.b;
    if (p.b == s) return p.a;
  }
  return std::nullopt;
}

const std::string& Complex::domain_at(Site s) const {
  return strands_.at(s.strand).domains.at(s.domain);
}

namespace {

std::string serialize_with(const std::vector<Strand>& strands, const std::vector<Pairing>& pairings,
                           const std::vector<int>& perm) {
  // perm[new_index] = old_index
  std::vector<int> inverse(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<int>(i);
  std::vector<Pairing> renamed;
  renamed.reserve(pairings.size());
  for (const auto& p : pairings) {
    Pairing q{{inverse[p.a.strand], p.a.domain}, {inverse[p.b.strand], p.b.domain}};
    if (q.b < q.a) std::swap(q.a, q.b);
    renamed.push_back(q);
  }
  std::sort(renamed.begin(), renamed.end());
  std::string out;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (i) out += '+';
    out += strands[perm[i]].name;
  }
  out += '|';
  for (size_t i = 0; i < renamed.size(); ++i) {
    if (i) out += ',';
    const auto& p = renamed[i];
    out += std::to_string(p.a.strand) + '.' + std::to_string(p.a.domain) + '-' +
           std::to_string(p.b.strand) + '.' + std::to_string(p.b.domain);
  }
  return out;
}

std::vector<int> canonical_perm(const std::vector<Strand>& strands, const std::vector<Pairing>& pairings) {
  std::vector<int> perm(strands.size());
  std::iota(perm.begin(), perm.end(), 0);
  // The strand-name list is the serialization prefix, so only orderings with
  // non-decreasing names can be minimal.
  auto by_name = [&](int x, int y) { return strands[x].name < strands[y].name; };
  std::vector<int> best;
  std::string best_s;
  do {
    if (!std::is_sorted(perm.begin(), perm.end(), by_name)) continue;
    auto s = serialize_with(strands, pairings, perm);
    if (best.empty() || s < best_s) {
      best_s = std::move(s);
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::string Complex::canonical_form() const {
  return serialize_with(strands_, pairings_, canonical_perm(strands_, pairings_));
}

Complex canonicalize(const Complex& c, const DomainCatalog& catalog,
                     const std::map<std::string, std::string>* names) {
  const auto& strands = c.strands();
  if (strands.empty()) throw ValidationError("complex has no strands");
  std::vector<std::vector<int>> used(strands.size());
  for (size_t i = 0; i < strands.size(); ++i) {
    for (const auto& d : strands[i].domains) catalog.at(d);
    used[i].assign(strands[i].domains.size(), 0);
  }
  // union-find over strands for connectivity
  std::vector<int> parent(strands.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : c.pairings()) {
    for (const auto& s : {p.a, p.b}) {
      if (s.strand < 0 || s.strand >= static_cast<int>(strands.size()) || s.domain < 0 ||
          s.domain >= static_cast<int>(strands[s.strand].domains.size()))
        throw ValidationError("pairing references a missing site");
      if (used[s.strand][s.domain]++) throw ValidationError("domain paired twice");
    }
    if (p.a == p.b) throw ValidationError("domain paired with itself");
    const auto& da = c.domain_at(p.a);
    const auto& db = c.domain_at(p.b);
    if (!catalog.are_complementary(da, db))
      throw ValidationError("invalid pairing: " + da + " with " + db + " (not complements)");
    parent[find(p.a.strand)] = find(p.b.strand);
  }
  for (size_t i = 1; i < strands.size(); ++i)
    if (find(static_cast<int>(i)) != find(0)) throw ValidationError("complex pairing graph is disconnected");

  const auto perm = canonical_perm(strands, c.pairings());
  std::vector<int> inverse(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<int>(i);
  std::vector<Strand> ordered_strands;
  for (int idx : perm) ordered_strands.push_back(strands[idx]);
  std::vector<Pairing> renamed;
  for (const auto& p : c.pairings())
    renamed.push_back({{inverse[p.a.strand], p.a.domain}, {inverse[p.b.strand], p.b.domain}});
  Complex out(std::move(ordered_strands), std::move(renamed));
  auto form = out.canonical_form();
  std::string label = form;
  if (names) {
    auto it = names->find(form);
    if (it != names->end()) label = it->second;
  }
  out.set_label(std::move(label));
  return out;
}

std::map<std::string, int> strand_census(const Complex& c) {
  std::map<std::string, int> out;
  for (const auto& s : c.strands()) ++out[s.name];
  return out;
}

}  // namespace hsgate
