// Synthetic fluorescence data for fit tests.
#pragma once

#include <random>
#include <vector>

#include "hsgate/fit.hpp"
#include "hsgate/kinetics.hpp"
#include "hsgate/motif.hpp"

namespace synthetic {

struct Series {
  std::vector<double> times;
  std::vector<double> signal;
};

// Normalized (fixed 150 nM) motif signal at k_t, sampled every dt seconds.
inline Series motif_signal(double k_t, const hsgate::InjectionSchedule& sched, double dt) {
  hsgate::MotifParams p;
  p.k_t = k_t;
  const auto net = hsgate::build_hairpin_motif(p);
  std::vector<double> times;
  for (double t = dt; t <= sched.end_time_s + 1e-9; t += dt) times.push_back(t);
  const auto tr = hsgate::integrate_at(net, sched, times);
  const auto f = hsgate::fluorescence(tr, net, hsgate::Normalization::parse("fixed:150"));
  Series out{times, {}};
  size_t j = 0;
  for (double t : times) {
    while (tr.times[j] < t) ++j;
    out.signal.push_back(f[j]);
  }
  return out;
}

inline std::vector<double> with_noise(const std::vector<double>& y, double frac, unsigned seed) {
  double peak = 0;
  for (double v : y) peak = std::max(peak, v);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, frac * peak);
  std::vector<double> out = y;
  for (auto& v : out) v += n(rng);
  return out;
}

}  // namespace synthetic
