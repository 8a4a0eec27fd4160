#include <algorithm>
#include <cmath>
#include <random>

#include "hsgate/error.hpp"
#include "hsgate/kinetics.hpp"

namespace hsgate {

const std::vector<long>& SsaTrajectory::at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t i = it == times.begin() ? 0 : static_cast<size_t>(it - times.begin()) - 1;
  return counts.at(i);
}

SsaTrajectory ssa_simulate(const ReactionNetwork& net, const std::map<std::string, long>& initial_counts,
                           double volume_L, double t_end_s, std::uint64_t seed) {
  if (!(volume_L > 0)) throw ValidationError("SSA volume must be positive");
  SsaTrajectory out;
  std::map<std::string, int> index;
  for (const auto& s : net.species()) {
    index[s.name] = static_cast<int>(out.species.size());
    out.species.push_back(s.name);
  }
  std::vector<long> n(out.species.size(), 0);
  for (const auto& [name, count] : initial_counts) {
    auto it = index.find(name);
    if (it == index.end()) throw ValidationError("unknown species: " + name);
    if (count < 0) throw ValidationError("negative molecule count for " + name);
    n[it->second] = count;
  }

  struct Channel {
    std::vector<int> reactants, products;
    double c = 0.0;  // stochastic constant
  };
  const double nav = kAvogadro * volume_L;
  std::vector<Channel> channels;
  for (const auto& r : net.expanded()) {
    Channel ch;
    for (const auto& s : r.reactants) ch.reactants.push_back(index.at(s));
    for (const auto& s : r.products) ch.products.push_back(index.at(s));
    switch (ch.reactants.size()) {
      case 0: ch.c = r.k_forward * nav; break;
      case 1: ch.c = r.k_forward; break;
      case 2: ch.c = r.k_forward / nav; break;
      default: throw ValidationError("SSA supports at most bimolecular channels");
    }
    channels.push_back(std::move(ch));
  }
  auto propensity = [&](const Channel& ch) {
    double a = ch.c;
    if (ch.reactants.size() == 2 && ch.reactants[0] == ch.reactants[1]) {
      const long k = n[ch.reactants[0]];
      return a * static_cast<double>(k) * static_cast<double>(k - 1);
    }
    for (int i : ch.reactants) a *= static_cast<double>(n[i]);
    return a;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> a(channels.size());
  double t = 0.0;
  out.times.push_back(0.0);
  out.counts.push_back(n);
  for (;;) {
    double total = 0.0;
    for (size_t j = 0; j < channels.size(); ++j) total += a[j] = propensity(channels[j]);
    if (total <= 0.0) break;
    const double r1 = 1.0 - uni(rng);  // (0, 1]
    t += -std::log(r1) / total;
    if (t > t_end_s) break;
    const double pick = uni(rng) * total;
    size_t j = 0;
    for (double acc = a[0]; acc <= pick && j + 1 < channels.size(); acc += a[++j]) {
    }
    for (int i : channels[j].reactants) --n[i];
    for (int i : channels[j].products) ++n[i];
    out.times.push_back(t);
    out.counts.push_back(n);
  }
  return out;
}

}  // namespace hsgate
