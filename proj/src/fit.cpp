#include "hsgate/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>

#include "hsgate/error.hpp"

namespace hsgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double sq(double x) { return x * x; }

InjectionSchedule with_efficiencies(InjectionSchedule s, const std::vector<double>& eff) {
  if (!eff.empty()) s.per_cycle_efficiency = eff;
  return s;
}

int cycle_count(const InjectionSchedule& s) {
  int n = static_cast<int>(s.per_cycle_efficiency.size());
  for (const auto& e : s.events) n = std::max(n, e.cycle + 1);
  return n;
}

/// Golden-section minimization of f on [lo, hi]; calls `seen` after every iterate.
template <class F>
double golden(F&& f, double lo, double hi, double tol, int& evals, bool& converged,
              const std::function<void(double)>& seen = {}) {
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  evals += 2;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
    ++evals;
    if (seen) seen(std::min(f1, f2));
  }
  converged = hi - lo <= tol;
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

void FitProblem::validate() const {
  if (!model) throw ValidationError("fit problem has no model");
  if (!(k_min > 0) || !(k_min < k_max)) throw ValidationError("fit bounds need 0 < k_min < k_max");
  if (times.size() != data.size()) throw ValidationError("data times and values differ in length");
  if (times.size() < 3) throw ValidationError("need at least three data points");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(data[i])) throw ValidationError("non-finite data value at row " + std::to_string(i + 1));
    if (times[i] < 0 || (i && times[i] <= times[i - 1]))
      throw ValidationError("data times must be non-negative and strictly increasing");
  }
  const double horizon = std::max(schedule.end_time_s, schedule.last_event_time());
  if (horizon > 0 && times.back() > horizon)
    throw ValidationError("data extend past the protocol end (" + std::to_string(times.back()) + " s > " +
                          std::to_string(horizon) + " s)");
  if (grid_points < 3) throw ValidationError("grid needs at least three points");
  if (!(log_k_tolerance > 0)) throw ValidationError("refinement tolerance must be positive");
  schedule.validate();
}

Evaluation evaluate(double k, const FitProblem& problem, const std::vector<double>& efficiencies) {
  const auto schedule = with_efficiencies(problem.schedule, efficiencies);
  std::vector<double> signal;
  try {
    const auto net = problem.model(k);
    const auto trace = integrate_at(net, schedule, problem.times, problem.integrator);
    const auto all = fluorescence(trace, net, problem.normalization);
    signal.reserve(problem.times.size());
    size_t j = 0;
    for (double t : problem.times) {
      while (trace.times[j] < t) ++j;
      signal.push_back(all[j]);
    }
  } catch (const NumericalError& e) {
    throw NumericalError("simulation failed at k = " + fmt(k) + ": " + e.what());
  }

  Evaluation ev;
  const double n = static_cast<double>(signal.size());
  const auto& y = problem.data;
  if (problem.fit_amplitude && problem.fit_offset) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < signal.size(); ++i) {
      sx += signal[i];
      sy += y[i];
      sxx += signal[i] * signal[i];
      sxy += signal[i] * y[i];
    }
    const double var = sxx - sx * sx / n;
    ev.alpha = var > 0 ? (sxy - sx * sy / n) / var : 0.0;
    ev.alpha = std::max(ev.alpha, 0.0);
    ev.beta = (sy - ev.alpha * sx) / n;
  } else if (problem.fit_amplitude) {
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < signal.size(); ++i) {
      sxx += signal[i] * signal[i];
      sxy += signal[i] * y[i];
    }
    ev.alpha = sxx > 0 ? std::max(sxy / sxx, 0.0) : 0.0;
  } else if (problem.fit_offset) {
    double d = 0;
    for (size_t i = 0; i < signal.size(); ++i) d += y[i] - signal[i];
    ev.beta = d / n;
  }

  ev.model.resize(signal.size());
  for (size_t i = 0; i < signal.size(); ++i) {
    ev.model[i] = ev.alpha * signal[i] + ev.beta;
    ev.sse += sq(y[i] - ev.model[i]);
  }
  const double mse = ev.sse / n;
  ev.degenerate = !(mse > kSseFloor);
  ev.nll = 0.5 * n * std::log(ev.degenerate ? kSseFloor : mse);
  if (!std::isfinite(ev.nll)) ev.nll = kInf;
  return ev;
}

double negative_log_likelihood(double k, const FitProblem& problem) {
  if (k < problem.k_min || k > problem.k_max)
    throw ValidationError("k = " + fmt(k) + " lies outside the fit bounds");
  return evaluate(k, problem).nll;
}

FitResult fit(const FitProblem& problem) {
  problem.validate();
  FitResult res;
  std::vector<double> eff;
  if (problem.fit_efficiency) eff.assign(cycle_count(problem.schedule), 1.0);

  const double lo = std::log(problem.k_min), hi = std::log(problem.k_max);
  const int m = problem.grid_points;

  auto objective = [&](double log_k) {
    try {
      return evaluate(std::exp(log_k), problem, eff).nll;
    } catch (const NumericalError&) {
      return kInf;
    }
  };

  // Coarse scan; points are independent and evaluated concurrently.
  std::vector<double> log_grid(m);
  for (int i = 0; i < m; ++i) log_grid[i] = lo + (hi - lo) * i / (m - 1);
  std::vector<std::future<double>> jobs;
  for (double lk : log_grid) jobs.push_back(std::async(std::launch::async, objective, lk));
  std::vector<double> values;
  for (auto& j : jobs) values.push_back(j.get());
  res.evaluations += m;
  for (int i = 0; i < m; ++i) res.grid.push_back({std::exp(log_grid[i]), values[i]});
  if (std::none_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw NumericalError("objective is not finite anywhere on the grid");

  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  double a = log_grid[std::max(best - 1, 0)], b = log_grid[std::min(best + 1, m - 1)];
  double best_value = values[best];
  double log_k = log_grid[best];

  auto refine_k = [&](bool record) {
    bool conv = false;
    const double x = golden(objective, a, b, problem.log_k_tolerance, res.evaluations, conv,
                            [&](double v) {
                              if (!record) return;
                              best_value = std::min(best_value, v);
                              res.refinement.push_back(best_value);
                            });
    // Keep the grid point if refinement did not improve on it.
    const double fx = objective(x);
    ++res.evaluations;
    if (fx <= objective(log_k)) log_k = x;
    ++res.evaluations;
    res.converged = conv;
  };
  refine_k(true);

  if (problem.fit_efficiency) {
    for (int round = 0; round < 2; ++round) {
      for (size_t c = 0; c < eff.size(); ++c) {
        auto f = [&](double e) {
          auto trial = eff;
          trial[c] = e;
          try {
            return evaluate(std::exp(log_k), problem, trial).nll;
          } catch (const NumericalError&) {
            return kInf;
          }
        };
        bool conv = false;
        eff[c] = golden(f, 0.05, 1.0, 1e-4, res.evaluations, conv);
      }
      a = std::max(lo, log_k - 0.5);
      b = std::min(hi, log_k + 0.5);
      refine_k(false);
    }
    res.efficiencies = eff;
  }

  res.k_hat = std::exp(log_k);
  const auto ev = evaluate(res.k_hat, problem, eff);
  ++res.evaluations;
  res.alpha = ev.alpha;
  res.beta = ev.beta;
  res.nll = ev.nll;
  res.degenerate = ev.degenerate;
  res.rms = std::sqrt(ev.sse / static_cast<double>(problem.data.size()));
  const double edge = 2.0 * problem.log_k_tolerance;
  res.at_boundary = log_k - lo <= edge || hi - log_k <= edge;
  return res;
}

ResidualReport residual_diagnostics(const FitResult& result, const FitProblem& problem) {
  const auto ev = evaluate(result.k_hat, problem, result.efficiencies);
  ResidualReport rep;
  rep.times = problem.times;
  const auto cuts = with_efficiencies(problem.schedule, result.efficiencies).event_times();
  rep.phase_rms.assign(cuts.size() + 1, 0.0);
  rep.phase_points.assign(cuts.size() + 1, 0);
  double total = 0.0;
  for (size_t i = 0; i < problem.data.size(); ++i) {
    const double r = problem.data[i] - ev.model[i];
    rep.residuals.push_back(r);
    total += r * r;
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
    // Snapshots at an event time are post-event, so they open the new phase.
    const size_t phase = std::upper_bound(cuts.begin(), cuts.end(), problem.times[i]) - cuts.begin();
    rep.phase_rms[phase] += r * r;
    ++rep.phase_points[phase];
  }
  rep.rms = std::sqrt(total / static_cast<double>(problem.data.size()));
  for (size_t p = 0; p < rep.phase_rms.size(); ++p)
    rep.phase_rms[p] = rep.phase_points[p] ? std::sqrt(rep.phase_rms[p] / rep.phase_points[p]) : 0.0;
  return rep;
}

FitProblem motif_fit_problem(const InjectionSchedule& schedule, std::vector<double> times,
                             std::vector<double> data, const MotifParams& base) {
  FitProblem p;
  p.model = [base](double k) {
    MotifParams mp = base;
    mp.k_t = k;
    return build_hairpin_motif(mp);
  };
  p.schedule = schedule;
  p.times = std::move(times);
  p.data = std::move(data);
  return p;
}

}  // namespace hsgate
