#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "csuq/fourier_ops.hpp"
#include "csuq/types.hpp"

namespace csuq {

struct SolverOptions {
  std::size_t max_iters = 2000;
  /// Stop once kkt_residual <= tol_kkt * max(1, ||X^* y / n||_inf).
  double tol_kkt = 1e-6;
  /// Also stop after `stall_window` consecutive iterations whose relative
  /// objective change is below tol_obj.
  double tol_obj = 1e-10;
  std::size_t stall_window = 10;
  /// Fixed step; when empty the step is 1 / L with L from power iteration on Sigma_hat.
  std::optional<double> step_size;
  bool restart = true;
  std::size_t power_iters = 50;
  double power_tol = 1e-4;
  std::uint64_t power_seed = 0;
  /// The KKT residual costs one extra adjoint, so it is evaluated every few iterations.
  std::size_t kkt_every = 10;
  bool record_trace = false;

  void validate() const;
};

struct TraceRow {
  std::size_t iteration;
  double objective;
  double best_objective;
  double kkt_residual;  // NaN on iterations where it was not evaluated
};

struct LassoSolution {
  ComplexSignal beta_hat;
  double lambda = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double step_size = 0.0;
  std::vector<TraceRow> trace;
};

/// Proximal map of t|.| on C: 0 when |z| <= t, otherwise z (1 - t / |z|).
Complex soft_threshold_complex(Complex z, double t);

/// (1 / 2n) ||X beta - y||^2 + lambda ||beta||_1.
double objective(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta,
                 double lambda);

/// Max violation of the c-LASSO optimality conditions. With g = X^*(y - X beta) / n:
/// (|g_k| - lambda)_+ where beta_k = 0 and |g_k - lambda beta_k / |beta_k|| elsewhere.
/// lambda = 0 reduces to ||g||_inf.
double kkt_residual(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta,
                    double lambda);

/// Largest eigenvalue of X^* X / n by power iteration.
double estimate_lipschitz(const MeasurementOperator& op, std::size_t iters, double rel_tol,
                          std::uint64_t seed);

/// Accelerated proximal gradient (FISTA) with gradient-based restart for
/// min (1 / 2n) ||X beta - y||^2 + lambda ||beta||_1 over C^p.
/// Throws NumericalError if an iterate becomes non-finite.
LassoSolution solve_classo(const MeasurementOperator& op, const ComplexSignal& y, double lambda,
                           const SolverOptions& opts = {},
                           const std::optional<ComplexSignal>& warm_start = std::nullopt);

/// CSV with columns iteration,objective,best_objective,kkt_residual.
void write_trace_csv(std::ostream& os, const LassoSolution& solution);

}  // namespace csuq
