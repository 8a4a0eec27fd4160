#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hsgate/error.hpp"
#include "hsgate/fit.hpp"
#include "synthetic.hpp"

using namespace hsgate;

namespace {

const InjectionSchedule& schedule() {
  static const auto s = build_renewal_schedule(2, 600, true);
  return s;
}

FitProblem problem_at(double k_star, double noise = 0.0, unsigned seed = 0) {
  auto d = synthetic::motif_signal(k_star, schedule(), 10);
  if (noise > 0) d.signal = synthetic::with_noise(d.signal, noise, seed);
  return motif_fit_problem(schedule(), d.times, d.signal);
}

}  // namespace

TEST_CASE("likelihood at the generating rate") {
  const auto p = problem_at(2.0e6);
  const auto at_truth = evaluate(2.0e6, p);
  CHECK(at_truth.sse < 1e-12);
  CHECK(negative_log_likelihood(1e5, p) > negative_log_likelihood(2.0e6, p));
  CHECK_THROWS_AS(negative_log_likelihood(1e8, p), ValidationError);
}

TEST_CASE("zero data against a silent model is degenerate") {
  auto sched = build_renewal_schedule(1, 600, true);
  sched.events.clear();
  std::vector<double> t{10, 20, 30, 40}, y(4, 0.0);
  const auto p = motif_fit_problem(sched, t, y);
  const auto e = evaluate(1e6, p);
  CHECK(e.degenerate);
  CHECK(e.nll == doctest::Approx(2.0 * std::log(kSseFloor)));
}

TEST_CASE("noise-free recovery and boundary flag") {
  const auto p = problem_at(2.743e6);
  const auto r = fit(p);
  CHECK(r.converged);
  CHECK_FALSE(r.at_boundary);
  CHECK(std::abs(r.k_hat / 2.743e6 - 1) < 0.01);
  CHECK(r.grid.size() == 25);
  CHECK(r.evaluations > 25);
  for (size_t i = 1; i < r.refinement.size(); ++i) CHECK(r.refinement[i] <= r.refinement[i - 1]);

  auto narrow = p;
  narrow.k_min = 1e5;
  narrow.k_max = 1e6;
  const auto b = fit(narrow);
  CHECK(b.at_boundary);
  CHECK(b.k_hat == doctest::Approx(1e6).epsilon(1e-4));
}

TEST_CASE("fit is bit-reproducible") {
  const auto p = problem_at(1.5e6, 0.02, 3);
  const auto a = fit(p), b = fit(p);
  CHECK(a.k_hat == b.k_hat);
  CHECK(a.nll == b.nll);
  CHECK(a.grid == b.grid);
}

TEST_CASE("affine rescaling leaves k_hat unchanged") {
  auto p = problem_at(2.743e6, 0.02, 5);
  p.fit_amplitude = p.fit_offset = true;
  auto q = p;
  for (auto& y : q.data) y = 3.5 * y + 0.2;
  const auto a = fit(p), b = fit(q);
  CHECK(std::abs(std::log(a.k_hat / b.k_hat)) < 1e-5);
  CHECK(b.alpha == doctest::Approx(3.5 * a.alpha).epsilon(1e-6));
  CHECK(b.beta == doctest::Approx(3.5 * a.beta + 0.2).epsilon(1e-6));
}

TEST_CASE("residual diagnostics") {
  const auto p = problem_at(2.743e6);
  FitResult exact;
  exact.k_hat = 2.743e6;
  const auto perfect = residual_diagnostics(exact, p);
  CHECK(perfect.max_abs < 1e-6);
  CHECK(perfect.phase_rms.size() == schedule().event_times().size() + 1);
  int total = 0;
  for (int n : perfect.phase_points) total += n;
  CHECK(total == static_cast<int>(p.times.size()));

  const auto noisy = problem_at(2.743e6, 0.02, 11);
  const auto r = fit(noisy);
  const auto rep = residual_diagnostics(r, noisy);
  double peak = 0;
  for (double v : problem_at(2.743e6).data) peak = std::max(peak, v);
  CHECK(rep.rms == doctest::Approx(0.02 * peak).epsilon(0.3));
}

TEST_CASE("per-cycle efficiency mode") {
  auto sched = schedule();
  sched.per_cycle_efficiency = {1.0, 0.7};
  MotifParams base;
  const auto net = build_hairpin_motif(base);
  auto d = synthetic::motif_signal(2.743e6, schedule(), 10);
  // Regenerate with the reduced second cycle.
  const auto tr = integrate_at(net, sched, d.times);
  const auto f = fluorescence(tr, net, Normalization::parse("fixed:150"));
  size_t j = 0;
  for (size_t i = 0; i < d.times.size(); ++i) {
    while (tr.times[j] < d.times[i]) ++j;
    d.signal[i] = f[j];
  }
  auto p = motif_fit_problem(schedule(), d.times, d.signal);
  p.fit_efficiency = true;
  const auto r = fit(p);
  REQUIRE(r.efficiencies.size() == 2);
  CHECK(std::abs(r.k_hat / 2.743e6 - 1) < 0.02);
  CHECK(r.efficiencies[1] == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("problem validation") {
  auto p = problem_at(1e6);
  p.k_min = 2e6;
  p.k_max = 1e6;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = problem_at(1e6);
  p.data.pop_back();
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = problem_at(1e6);
  p.times.back() = 1e9;
  CHECK_THROWS_AS(fit(p), ValidationError);
}
