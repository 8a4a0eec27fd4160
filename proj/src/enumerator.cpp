#include "hsgate/enumerator.hpp"

#include <algorithm>
#include <numeric>

namespace hsgate {

namespace {

/// Mutable pairing table used while a reaction is played out.
struct Work {
  const DomainCatalog* cat = nullptr;
  std::vector<Strand> strands;
  std::vector<std::vector<std::optional<Site>>> pr;

  static Work from(const std::vector<const Complex*>& parts, const DomainCatalog& cat) {
    Work w;
    w.cat = &cat;
    int offset = 0;
    for (const auto* c : parts) {
      for (const auto& s : c->strands()) {
        w.strands.push_back(s);
        w.pr.emplace_back(s.domains.size());
      }
      for (const auto& p : c->pairings())
        w.link({p.a.strand + offset, p.a.domain}, {p.b.strand + offset, p.b.domain});
      offset += static_cast<int>(c->strands().size());
    }
    return w;
  }

  int n() const { return static_cast<int>(strands.size()); }
  int len(int s) const { return static_cast<int>(strands[s].domains.size()); }
  bool valid(Site s) const { return s.strand >= 0 && s.strand < n() && s.domain >= 0 && s.domain < len(s.strand); }
  const std::string& dom(Site s) const { return strands[s.strand].domains[s.domain]; }
  std::optional<Site> partner(Site s) const { return pr[s.strand][s.domain]; }
  bool paired(Site s) const { return partner(s).has_value(); }
  bool comp(Site a, Site b) const { return cat->are_complementary(dom(a), dom(b)); }
  bool toehold(Site s) const { return cat->is_toehold(dom(s)); }

  void link(Site a, Site b) {
    pr[a.strand][a.domain] = b;
    pr[b.strand][b.domain] = a;
  }
  void unlink(Site a) {
    if (auto b = partner(a)) {
      pr[b->strand][b->domain].reset();
      pr[a.strand][a.domain].reset();
    }
  }

  std::vector<Pairing> pairs() const {
    std::vector<Pairing> out;
    for (int s = 0; s < n(); ++s)
      for (int d = 0; d < len(s); ++d)
        if (auto p = pr[s][d]; p && Site{s, d} < *p) out.push_back({{s, d}, *p});
    return out;
  }

  /// Strand indices grouped by connectivity.
  std::vector<std::vector<int>> components() const {
    std::vector<int> parent(n());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& p : pairs()) parent[find(p.a.strand)] = find(p.b.strand);
    std::map<int, std::vector<int>> groups;
    for (int s = 0; s < n(); ++s) groups[find(s)].push_back(s);
    std::vector<std::vector<int>> out;
    for (auto& [root, g] : groups) out.push_back(std::move(g));
    std::sort(out.begin(), out.end());
    return out;
  }

  int component_of(int strand) const {
    const auto comps = components();
    for (size_t i = 0; i < comps.size(); ++i)
      if (std::find(comps[i].begin(), comps[i].end(), strand) != comps[i].end()) return static_cast<int>(i);
    return -1;
  }

  /// Pairs stacked into one helix with the pair at `a`.
  std::vector<Pairing> helix_of(Site a) const {
    std::vector<Pairing> out;
    auto b = partner(a);
    if (!b) return out;
    out.push_back({a, *b});
    for (int dir : {+1, -1}) {
      Site x = a, y = *b;
      for (;;) {
        Site nx{x.strand, x.domain + dir}, ny{y.strand, y.domain - dir};
        if (!valid(nx) || !valid(ny) || partner(nx) != ny) break;
        out.push_back({nx, ny});
        x = nx;
        y = ny;
      }
    }
    return out;
  }

  bool gap(Site s) const {
    Site prev{s.strand, s.domain - 1}, next{s.strand, s.domain + 1};
    return valid(prev) && valid(next) && paired(prev) && paired(next);
  }

  /// Clamp bases if a partial partner shares an enclosing hairpin loop.
  int sequestered(Site s) const {
    const int st = s.strand;
    for (int m = 0; m < len(st); ++m) {
      if (m == s.domain || paired({st, m})) continue;
      const int bases = cat->partial_bases(dom(s), dom({st, m}));
      if (!bases) continue;
      const int lo = std::min(m, s.domain), hi = std::max(m, s.domain);
      for (int i = 0; i < lo; ++i)
        if (auto p = partner({st, i}); p && p->strand == st && p->domain > hi) return bases;
    }
    return 0;
  }

  std::optional<int> exposure(Site s) const {
    if (!toehold(s) || paired(s) || gap(s)) return std::nullopt;
    return sequestered(s);
  }

  Complex extract(const std::vector<int>& group) const {
    std::vector<int> index(n(), -1);
    std::vector<Strand> ss;
    for (size_t i = 0; i < group.size(); ++i) {
      index[group[i]] = static_cast<int>(i);
      ss.push_back(strands[group[i]]);
    }
    std::vector<Pairing> ps;
    for (const auto& p : pairs())
      if (index[p.a.strand] >= 0)
        ps.push_back({{index[p.a.strand], p.a.domain}, {index[p.b.strand], p.b.domain}});
    return Complex(std::move(ss), std::move(ps));
  }
};

struct FrontResult {
  int invaded_by_x = 0;
  int invaded_by_y = 0;
  std::vector<std::pair<Site, Site>> displaced;  // (target site, incumbent site it lost)
  std::vector<Site> stop;
};

/// Advances a branch-migration front from the pair x-y; x moves by `d`,
/// y by `-d` (antiparallel). Unpaired complementary neighbours zip, and a
/// free domain facing a paired complement takes it over.
FrontResult run_front(Work& w, Site x, Site y, int d) {
  FrontResult r;
  for (;;) {
    Site nx{x.strand, x.domain + d}, ny{y.strand, y.domain - d};
    if (!w.valid(nx) || !w.valid(ny) || nx == ny) {
      for (const auto& s : {nx, ny})
        if (w.valid(s)) r.stop.push_back(s);
      break;
    }
    const auto px = w.partner(nx), py = w.partner(ny);
    if (px && *px == ny) {
      x = nx;
      y = ny;
      continue;
    }
    if (!w.comp(nx, ny) || (px && py)) {
      r.stop = {nx, ny};
      break;
    }
    if (py) {
      r.displaced.push_back({ny, *py});
      w.unlink(ny);
      ++r.invaded_by_x;
    } else if (px) {
      r.displaced.push_back({nx, *px});
      w.unlink(nx);
      ++r.invaded_by_y;
    }
    w.link(nx, ny);
    x = nx;
    y = ny;
  }
  return r;
}

struct SettleResult {
  bool dissociated = false;
  bool nucleated = false;
};

/// Toehold-only helices that hold two parts together fall apart unless they
/// are stacked between helices on both flanks.
bool dissociate_one(Work& w) {
  for (const auto& p : w.pairs()) {
    const auto helix = w.helix_of(p.a);
    if (!std::all_of(helix.begin(), helix.end(), [&](const Pairing& q) { return w.toehold(q.a); })) continue;
    bool sandwiched = false;
    for (int side = 0; side < 2 && !sandwiched; ++side) {
      int s = side ? helix.front().b.strand : helix.front().a.strand;
      int lo = 1 << 30, hi = -1;
      for (const auto& q : helix) {
        const Site t = side ? q.b : q.a;
        lo = std::min(lo, t.domain);
        hi = std::max(hi, t.domain);
      }
      Site before{s, lo - 1}, after{s, hi + 1};
      sandwiched = w.valid(before) && w.valid(after) && w.paired(before) && w.paired(after);
    }
    if (sandwiched) continue;
    Work trial = w;
    for (const auto& q : helix) trial.unlink(q.a);
    if (trial.components().size() > w.components().size()) {
      w = std::move(trial);
      return true;
    }
  }
  return false;
}

/// Closes the first available hairpin stem: two unpaired complementary branch
/// domains on one strand with a non-empty loop between them.
bool nucleate_one(Work& w, bool collapse) {
  for (const auto& group : w.components()) {
    const bool naked = group.size() == 1 && std::none_of(w.pr[group[0]].begin(), w.pr[group[0]].end(),
                                                         [](const auto& p) { return p.has_value(); });
    if (!collapse && !naked) continue;
    for (int s : group) {
      for (int i = 0; i < w.len(s); ++i) {
        for (int j = i + 2; j < w.len(s); ++j) {
          Site a{s, i}, b{s, j};
          if (w.paired(a) || w.paired(b) || w.toehold(a) || !w.comp(a, b)) continue;
          w.link(a, b);
          run_front(w, a, b, +1);
          run_front(w, a, b, -1);
          return true;
        }
      }
    }
  }
  return false;
}

SettleResult settle(Work& w, bool collapse) {
  SettleResult r;
  for (;;) {
    if (dissociate_one(w)) {
      r.dissociated = true;
      continue;
    }
    if (nucleate_one(w, collapse)) {
      r.nucleated = true;
      continue;
    }
    break;
  }
  return r;
}

std::vector<Complex> split(const Work& w, const DomainCatalog& cat, const EnumeratorOptions& opts) {
  std::vector<Complex> out;
  for (const auto& g : w.components()) out.push_back(canonicalize(w.extract(g), cat, &opts.names));
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) { return a.label() < b.label(); });
  return out;
}

std::vector<std::string> labels(const std::vector<Complex>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.label());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_free_strand(const Complex& c) { return c.strands().size() == 1 && c.pairings().empty(); }

std::optional<EnumeratedReaction> anneal(const Complex& a, const Complex& b, const DomainCatalog& cat,
                                         const EnumeratorOptions& opts) {
  if (!is_free_strand(a) || !is_free_strand(b)) return std::nullopt;
  for (int flip = 0; flip < 2; ++flip) {
    const auto& shorter = flip ? b : a;
    const auto& longer = flip ? a : b;
    const auto& sd = shorter.strands()[0].domains;
    const auto& ld = longer.strands()[0].domains;
    if (sd.size() > ld.size()) continue;
    if (std::all_of(sd.begin(), sd.end(), [&](const std::string& d) { return cat.is_toehold(d); })) continue;
    const int ns = static_cast<int>(sd.size());
    for (int o = 0; o + ns <= static_cast<int>(ld.size()); ++o) {
      bool ok = true;
      for (int i = 0; i < ns && ok; ++i) ok = cat.are_complementary(sd[i], ld[o + ns - 1 - i]);
      if (!ok) continue;
      std::vector<Pairing> ps;
      for (int i = 0; i < ns; ++i) ps.push_back({{0, i}, {1, o + ns - 1 - i}});
      Complex joined({shorter.strands()[0], longer.strands()[0]}, ps);
      EnumeratedReaction r;
      r.reactants = {a, b};
      r.products = {canonicalize(joined, cat, &opts.names)};
      r.kind = ReactionKind::anneal;
      r.k_forward = opts.k_t;
      return r;
    }
  }
  return std::nullopt;
}

std::optional<EnumeratedReaction> reclosure(const Complex& c, const DomainCatalog& cat,
                                            const EnumeratorOptions& opts) {
  Work w = Work::from({&c}, cat);
  if (!settle(w, true).nucleated) return std::nullopt;
  EnumeratedReaction r;
  r.reactants = {c};
  r.products = split(w, cat, opts);
  r.kind = ReactionKind::closure;
  r.k_forward = opts.k_close;
  return r;
}

}  // namespace

Reaction EnumeratedReaction::to_reaction() const {
  Reaction r;
  for (const auto& c : reactants) r.reactants.push_back(c.label());
  for (const auto& c : products) r.products.push_back(c.label());
  r.k_forward = k_forward;
  r.k_backward = k_backward;
  switch (kind) {
    case ReactionKind::displacement: r.tag = hindered ? "hindered" : "displacement"; break;
    case ReactionKind::exchange: r.tag = hindered ? "hindered" : "exchange"; break;
    case ReactionKind::anneal: r.tag = "anneal"; break;
    case ReactionKind::closure: r.tag = "closure"; break;
  }
  return r;
}

std::vector<ExposedToehold> exposed_toeholds(const Complex& c, const DomainCatalog& catalog) {
  const Work w = Work::from({&c}, catalog);
  std::vector<ExposedToehold> out;
  for (int s = 0; s < w.n(); ++s)
    for (int d = 0; d < w.len(s); ++d)
      if (auto seq = w.exposure({s, d})) out.push_back({{s, d}, w.dom({s, d}), *seq});
  return out;
}

std::vector<EnumeratedReaction> enumerate_bimolecular(const Complex& a, const Complex& b,
                                                      const DomainCatalog& catalog,
                                                      const EnumeratorOptions& opts) {
  std::vector<EnumeratedReaction> out;
  const Work base = Work::from({&a, &b}, catalog);
  const int offset = static_cast<int>(a.strands().size());
  const auto ta = exposed_toeholds(a, catalog);
  const auto tb = exposed_toeholds(b, catalog);
  const auto reactant_labels = labels({a, b});

  for (const auto& x : ta) {
    for (const auto& y : tb) {
      if (!catalog.are_complementary(x.domain, y.domain)) continue;
      const Site xs = x.site;
      const Site ys{y.site.strand + offset, y.site.domain};
      for (int d : {+1, -1}) {
        Work w = base;
        w.link(xs, ys);
        const auto front = run_front(w, xs, ys, d);
        if (front.displaced.empty()) continue;

        // Helix each displaced incumbent belonged to before the invasion.
        std::vector<std::vector<Pairing>> original;
        for (const auto& [target, incumbent] : front.displaced) original.push_back(base.helix_of(target));

        const auto settled = settle(w, opts.collapse_reclosure);

        bool stalled = false;
        for (size_t i = 0; i < front.displaced.size() && !stalled; ++i) {
          const auto& [target, incumbent] = front.displaced[i];
          if (w.component_of(incumbent.strand) != w.component_of(target.strand)) continue;
          if (incumbent.strand != target.strand) {
            stalled = true;
            break;
          }
          for (const auto& p : original[i])
            if (w.partner(p.a) == p.b) stalled = true;
        }
        if (stalled) continue;

        EnumeratedReaction r;
        r.reactants = {a, b};
        r.products = split(w, catalog, opts);
        if (labels(r.products) == reactant_labels) continue;
        r.hindered = x.sequestered_bases > 0 || y.sequestered_bases > 0;

        bool newly_exposed = false;
        for (const auto& s : front.stop) {
          const auto before = base.exposure(s);
          const auto after = w.exposure(s);
          if (after && *after == 0 && !(before && *before == 0)) newly_exposed = true;
        }
        const bool one_invader = front.invaded_by_x == 0 || front.invaded_by_y == 0;
        const bool reversible = !settled.nucleated && one_invader && (settled.dissociated || newly_exposed);
        r.kind = reversible ? ReactionKind::exchange : ReactionKind::displacement;

        bool reporter = false;
        for (const auto& [target, incumbent] : front.displaced)
          if (opts.reporter_strands.count(base.strands[incumbent.strand].name)) reporter = true;
        r.k_forward = r.hindered ? opts.k_leak : reporter ? opts.k_rep : opts.k_t;
        if (reversible) r.k_backward = r.products.size() == 1 ? opts.k_t * opts.tether_conc_M : opts.k_t;

        const bool dup = std::any_of(out.begin(), out.end(), [&](const EnumeratedReaction& e) {
          return labels(e.products) == labels(r.products) && e.hindered == r.hindered;
        });
        if (!dup) out.push_back(std::move(r));
      }
    }
  }
  return out;
}

EnumeratedNetwork enumerate_network(const std::vector<Complex>& seeds, int max_species,
                                    const DomainCatalog& catalog, const EnumeratorOptions& opts) {
  std::vector<Complex> species;
  std::map<std::string, int> index;
  auto add_species = [&](const Complex& c) {
    auto canon = canonicalize(c, catalog, &opts.names);
    if (index.count(canon.label())) return;
    index[canon.label()] = static_cast<int>(species.size());
    species.push_back(std::move(canon));
  };
  for (const auto& s : seeds) add_species(s);
  if (static_cast<int>(species.size()) > max_species) {
    std::vector<std::string> frontier;
    for (const auto& s : species) frontier.push_back(s.label());
    throw CapacityError("seed set exceeds max_species = " + std::to_string(max_species), frontier);
  }
  // Seed order must not matter.
  std::sort(species.begin(), species.end(), [](const Complex& x, const Complex& y) { return x.label() < y.label(); });
  for (size_t i = 0; i < species.size(); ++i) index[species[i].label()] = static_cast<int>(i);

  std::vector<EnumeratedReaction> reactions;
  auto record = [&](EnumeratedReaction r, size_t processed) {
    const auto rr = r.to_reaction();
    for (const auto& e : reactions)
      if (e.to_reaction().same_channel(rr)) return;
    for (const auto& p : r.products) {
      if (index.count(p.label())) continue;
      if (static_cast<int>(species.size()) >= max_species) {
        std::vector<std::string> frontier;
        for (size_t k = processed; k < species.size(); ++k) frontier.push_back(species[k].label());
        frontier.push_back(p.label());
        throw CapacityError("reaction closure needs more than max_species = " + std::to_string(max_species),
                            frontier);
      }
      index[p.label()] = static_cast<int>(species.size());
      species.push_back(p);
    }
    reactions.push_back(std::move(r));
  };

  for (size_t k = 0; k < species.size(); ++k) {
    std::vector<EnumeratedReaction> found;
    for (size_t j = 0; j <= k; ++j) {
      const Complex a = species[j], b = species[k];
      for (auto& r : enumerate_bimolecular(a, b, catalog, opts)) found.push_back(std::move(r));
      if (auto r = anneal(a, b, catalog, opts)) found.push_back(std::move(*r));
    }
    if (!opts.collapse_reclosure)
      if (auto r = reclosure(species[k], catalog, opts)) found.push_back(std::move(*r));
    for (auto& r : found) record(std::move(r), k + 1);
  }

  EnumeratedNetwork out;
  for (const auto& c : species) out.network.add_species(c.label(), strand_census(c));
  for (const auto& r : reactions) out.network.add_reaction(r.to_reaction());
  out.species = std::move(species);
  out.reactions = std::move(reactions);
  return out;
}

}  // namespace hsgate
