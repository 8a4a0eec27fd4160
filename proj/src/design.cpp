#include "hsgate/design.hpp"

#include <algorithm>
#include <random>

#include "hsgate/error.hpp"

namespace hsgate {

namespace {

char complement_base(char c) {
  switch (c) {
    case 'A': return 'T';
    case 'T': return 'A';
    case 'C': return 'G';
    case 'G': return 'C';
  }
  return 'N';
}

int longest_homopolymer(const std::string& s) {
  int best = 0, run = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    run = (i && s[i] == s[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

int shared_suffix(const std::string& a, const std::string& b) {
  int n = 0;
  while (n < static_cast<int>(std::min(a.size(), b.size())) && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return n;
}

/// Unordered pairs of distinct domains that are not designed partners.
std::vector<std::pair<std::string, std::string>> scan_pairs(const DomainCatalog& cat) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& names = cat.names();
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j)
      if (!cat.are_complementary(names[i], names[j])) out.push_back({names[i], names[j]});
  return out;
}

}  // namespace

std::string reverse_complement(const std::string& seq) {
  std::string out(seq.rbegin(), seq.rend());
  for (auto& c : out) c = complement_base(c);
  return out;
}

int longest_complementary_run(const std::string& a, const std::string& b) {
  // Longest common substring of a and revcomp(b).
  const std::string rb = reverse_complement(b);
  std::vector<int> prev(rb.size() + 1, 0), cur(rb.size() + 1, 0);
  int best = 0;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= rb.size(); ++j) {
      cur[j] = a[i - 1] == rb[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

const std::string& SequenceAssignment::at(const std::string& domain) const {
  auto it = sequences.find(domain);
  if (it == sequences.end()) throw ValidationError("no sequence for domain: " + domain);
  return it->second;
}

std::string SequenceAssignment::strand_sequence(const std::string& strand) const {
  std::string out;
  for (const auto& d : catalog.strand(strand).domains) out += at(d);
  return out;
}

std::string SequenceAssignment::to_table() const {
  std::string out;
  for (const auto& name : catalog.names()) out += name + "\t" + at(name) + "\n";
  return out;
}

int partial_overlap(const SequenceAssignment& s, const std::string& a, const std::string& b) {
  return std::max(shared_suffix(s.at(s.catalog.complement(a).name), s.at(b)),
                  shared_suffix(s.at(s.catalog.complement(b).name), s.at(a)));
}

int crosstalk_score(const SequenceAssignment& s) {
  int best = 0;
  for (const auto& [x, y] : scan_pairs(s.catalog))
    best = std::max(best, longest_complementary_run(s.at(x), s.at(y)));
  return best;
}

// ---------------------------------------------------------------------------

SequenceAssignment assign_sequences(const DomainCatalog& catalog, const DesignConstraints& cons,
                                    std::uint64_t seed) {
  catalog.check_closed();
  SequenceAssignment out;
  out.catalog = catalog;
  out.seed = seed;
  if (cons.max_homopolymer < 1)
    throw ValidationError("unsatisfiable: homopolymer limit " + std::to_string(cons.max_homopolymer) +
                          " admits no sequence (tightest constraint: homopolymer)");

  std::mt19937_64 rng(seed);
  static constexpr char kAlphabet[] = {'A', 'C', 'T'};
  std::uniform_int_distribution<int> pick(0, 2);
  std::map<std::string, long> failures;
  long attempts = 0;

  auto random_sequence = [&](int length) {
    std::string s;
    while (static_cast<int>(s.size()) < length) {
      const char c = kAlphabet[pick(rng)];
      const int n = static_cast<int>(s.size());
      if (n >= cons.max_homopolymer &&
          std::all_of(s.end() - cons.max_homopolymer, s.end(), [&](char x) { return x == c; }))
        continue;
      s.push_back(c);
    }
    return s;
  };

  // Designed partial clamps between sense-expressible domains.
  struct Clamp {
    std::string anchor, follower;
    int bases;
  };
  std::vector<Clamp> clamps;
  for (const auto& [pair, bases] : catalog.partials()) {
    const std::string anchor = catalog.complement(pair.first).name;
    clamps.push_back({anchor, pair.second, bases});
  }

  for (const auto& name : catalog.sense_names()) {
    const auto& spec = catalog.at(name);
    const std::string partner = catalog.complement(name).name;
    for (;;) {
      if (++attempts > cons.max_attempts) {
        auto worst = std::max_element(failures.begin(), failures.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        throw ValidationError("unsatisfiable within " + std::to_string(cons.max_attempts) +
                              " attempts (tightest constraint: " +
                              (worst == failures.end() ? std::string("none") : worst->first) + ")");
      }
      std::string cand = random_sequence(spec.length_nt);
      // Splice in a deliberate clamp against an anchor that already has a sequence.
      for (const auto& c : clamps) {
        if (c.follower != name || !out.sequences.count(c.anchor)) continue;
        const auto& anchor = out.sequences.at(c.anchor);
        if (c.bases > spec.length_nt || c.bases > static_cast<int>(anchor.size())) continue;
        std::copy(anchor.end() - c.bases, anchor.end(), cand.end() - c.bases);
      }
      if (longest_homopolymer(cand) > cons.max_homopolymer) {
        ++failures["homopolymer"];
        continue;
      }
      bool clamp_ok = true;
      for (const auto& c : clamps) {
        const bool mine = c.follower == name || c.anchor == name;
        const std::string other = c.follower == name ? c.anchor : c.follower;
        if (!mine || !out.sequences.count(other)) continue;
        const auto& a = c.anchor == name ? cand : out.sequences.at(c.anchor);
        const auto& b = c.follower == name ? cand : out.sequences.at(c.follower);
        const std::string ra = reverse_complement(a), rb = reverse_complement(b);
        if (std::max(shared_suffix(a, b), shared_suffix(rb, ra)) != c.bases) clamp_ok = false;
      }
      if (!clamp_ok) {
        ++failures["partial_overlap"];
        continue;
      }
      const std::string cand_rc = reverse_complement(cand);
      bool clash = longest_complementary_run(cand, cand) >= cons.crosstalk_limit ||
                   longest_complementary_run(cand_rc, cand_rc) >= cons.crosstalk_limit;
      for (const auto& [other, seq] : out.sequences) {
        if (clash) break;
        for (const auto& [mine, mseq] : {std::pair{name, cand}, std::pair{partner, cand_rc}}) {
          if (catalog.are_complementary(mine, other)) continue;
          if (longest_complementary_run(mseq, seq) >= cons.crosstalk_limit) clash = true;
        }
      }
      if (clash) {
        ++failures["crosstalk"];
        continue;
      }
      out.sequences[name] = cand;
      out.sequences[partner] = cand_rc;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool DesignReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.passed; });
}

const ConstraintCheck& DesignReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw ValidationError("no such check: " + name);
}

DesignReport validate(const SequenceAssignment& s, const DesignConstraints& cons) {
  DesignReport rep;
  auto fail = [](ConstraintCheck& c, const std::string& why) {
    if (c.passed) c.detail = why;
    c.passed = false;
  };
  ConstraintCheck alphabet{"alphabet", true, ""}, lengths{"lengths", true, ""}, complements{"complements", true, ""},
      gconf{"g_confinement", true, ""},
      overlap{"partial_overlap", true, ""}, homo{"homopolymer", true, ""}, cross{"crosstalk", true, ""};

  bool complete = true;
  for (const auto& name : s.catalog.names()) {
    auto it = s.sequences.find(name);
    if (it == s.sequences.end()) {
      fail(lengths, "missing sequence for " + name);
      complete = false;
      continue;
    }
    const auto& seq = it->second;
    const auto& spec = s.catalog.at(name);
    if (seq.find_first_not_of("ACGT") != std::string::npos) fail(alphabet, name + " has a non-ACGT base");
    if (static_cast<int>(seq.size()) != spec.length_nt)
      fail(lengths, name + " is " + std::to_string(seq.size()) + " nt, expected " + std::to_string(spec.length_nt));
    if (spec.kind == DomainKind::toehold && seq.size() != kToeholdLength)
      fail(lengths, "toehold " + name + " is not " + std::to_string(kToeholdLength) + " nt");
    if (s.catalog.is_sense(name) && seq.find('G') != std::string::npos)
      fail(gconf, "sense domain " + name + " contains G");
    if (longest_homopolymer(seq) > cons.max_homopolymer) fail(homo, name + " has a homopolymer run over the limit");
    const auto& partner = s.catalog.complement(name).name;
    if (auto p = s.sequences.find(partner); p != s.sequences.end() && p->second != reverse_complement(seq))
      fail(complements, name + " and " + partner + " are not reverse complements");
  }

  if (complete) {
    for (const auto& [pair, bases] : s.catalog.partials()) {
      const int got = partial_overlap(s, pair.first, pair.second);
      if (got != bases)
        fail(overlap, pair.first + "/" + pair.second + " share " + std::to_string(got) + " bases, expected " +
                          std::to_string(bases));
    }
    const int score = crosstalk_score(s);
    if (score >= cons.crosstalk_limit) fail(cross, "crosstalk score " + std::to_string(score));
  }
  rep.checks = {alphabet, lengths, complements, gconf, overlap, homo, cross};
  return rep;
}

}  // namespace hsgate
