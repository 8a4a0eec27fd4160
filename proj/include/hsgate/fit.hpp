#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsgate/kinetics.hpp"

namespace hsgate {

/// Estimates k_t by maximum likelihood under i.i.d. Gaussian noise of unknown
/// variance. The model signal is optionally mapped through alpha * s + beta,
/// with both profiled out by linear least squares.
struct FitProblem {
  std::function<ReactionNetwork(double k_t)> model;
  InjectionSchedule schedule;
  Normalization normalization = Normalization::parse("fixed:150");

  std::vector<double> times;  ///< s, strictly increasing
  std::vector<double> data;

  double k_min = 1e5;
  double k_max = 1e7;
  bool fit_amplitude = false;
  bool fit_offset = false;
  /// Also fit one multiplier per cycle in (0, 1], alternating with k.
  bool fit_efficiency = false;

  int grid_points = 25;
  double log_k_tolerance = 1e-6;  ///< golden-section stops below this bracket width (natural log)
  IntegratorOptions integrator;

  void validate() const;
};

struct FitResult {
  double k_hat = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  double nll = 0.0;
  double rms = 0.0;
  bool converged = false;
  bool at_boundary = false;
  bool degenerate = false;  ///< SSE hit the floor
  int evaluations = 0;
  std::vector<double> efficiencies;
  std::vector<std::pair<double, double>> grid;  ///< (k, nll) from the scan
  std::vector<double> refinement;               ///< best nll after each golden-section iterate
};

/// Value floor for SSE/n; a perfect fit reports NLL = n/2 ln(floor).
inline constexpr double kSseFloor = 1e-300;

struct Evaluation {
  double nll = 0.0;
  double sse = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  bool degenerate = false;
  std::vector<double> model;  ///< mapped model signal at the data times
};

/// Simulates the model at k and profiles out the nuisances. Simulation
/// failures are rethrown as NumericalError naming k.
Evaluation evaluate(double k, const FitProblem& problem, const std::vector<double>& efficiencies = {});

double negative_log_likelihood(double k, const FitProblem& problem);

FitResult fit(const FitProblem& problem);

struct ResidualReport {
  std::vector<double> times;
  std::vector<double> residuals;
  double rms = 0.0;
  double max_abs = 0.0;
  /// Segments split at each distinct event time; one more than the event times.
  std::vector<double> phase_rms;
  std::vector<int> phase_points;
};

ResidualReport residual_diagnostics(const FitResult& result, const FitProblem& problem);

/// Renewal-protocol problem for the single motif (fixed 150 nM normalization).
FitProblem motif_fit_problem(const InjectionSchedule& schedule, std::vector<double> times,
                             std::vector<double> data, const MotifParams& base = {});

}  // namespace hsgate
