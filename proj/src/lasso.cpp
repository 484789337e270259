#include "csuq/lasso.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "csuq/error.hpp"
#include "csuq/random.hpp"

namespace csuq {

namespace {

// Power iteration approaches L from below; the step keeps a small margin.
constexpr double kLipschitzMargin = 1.01;

double l1_norm(const ComplexSignal& v) { return v.cwiseAbs().sum(); }

bool all_finite(const ComplexSignal& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

double kkt_from_gradient(const ComplexSignal& g, const ComplexSignal& beta, double lambda) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    const double mag = std::abs(beta[k]);
    double violation;
    if (mag == 0.0) {
      violation = std::max(0.0, std::abs(g[k]) - lambda);
    } else {
      violation = std::abs(g[k] - lambda * (beta[k] / mag));
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

void check_problem(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal* beta,
                   double lambda) {
  if (op.rows() == 0) throw DimensionError("c-LASSO needs at least one measurement (n = 0)");
  if (static_cast<std::size_t>(y.size()) != op.rows()) {
    throw DimensionError(fmt::format("measurement length {} != n = {}", y.size(), op.rows()));
  }
  if (beta && static_cast<std::size_t>(beta->size()) != op.cols()) {
    throw DimensionError(fmt::format("signal length {} != p = {}", beta->size(), op.cols()));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError(fmt::format("lambda must be finite and >= 0, got {}", lambda));
  }
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(tol_kkt > 0.0) || !(tol_obj > 0.0)) throw DomainError("solver tolerances must be positive");
  if (step_size && !(*step_size > 0.0)) throw DomainError("step size must be positive");
  if (kkt_every < 1) throw DomainError("kkt_every must be >= 1");
}

Complex soft_threshold_complex(Complex z, double t) {
  const double mag = std::abs(z);
  if (mag <= t) return {0.0, 0.0};
  return z * (1.0 - t / mag);
}

double objective(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta,
                 double lambda) {
  check_problem(op, y, &beta, lambda);
  const double n = static_cast<double>(op.rows());
  return (op.forward(beta) - y).squaredNorm() / (2.0 * n) + lambda * l1_norm(beta);
}

double kkt_residual(const MeasurementOperator& op, const ComplexSignal& y, const ComplexSignal& beta,
                    double lambda) {
  check_problem(op, y, &beta, lambda);
  const ComplexSignal g = op.adjoint(y - op.forward(beta)) / static_cast<double>(op.rows());
  if (lambda == 0.0) return g.cwiseAbs().maxCoeff();
  return kkt_from_gradient(g, beta, lambda);
}

double estimate_lipschitz(const MeasurementOperator& op, std::size_t iters, double rel_tol,
                          std::uint64_t seed) {
  if (op.rows() == 0) throw DimensionError("Lipschitz estimate needs n >= 1");
  const auto p = static_cast<Eigen::Index>(op.cols());
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  ComplexSignal v(p);
  for (Eigen::Index k = 0; k < p; ++k) v[k] = {gauss(rng), gauss(rng)};
  v.normalize();
  double estimate = 0.0;
  for (std::size_t it = 0; it < std::max<std::size_t>(iters, 1); ++it) {
    ComplexSignal w = apply_sample_covariance(op, v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const bool settled = it > 0 && std::abs(norm - estimate) <= rel_tol * norm;
    estimate = norm;
    v = w / norm;
    if (settled) break;
  }
  return estimate;
}

LassoSolution solve_classo(const MeasurementOperator& op, const ComplexSignal& y, double lambda,
                           const SolverOptions& opts, const std::optional<ComplexSignal>& warm_start) {
  opts.validate();
  check_problem(op, y, warm_start ? &*warm_start : nullptr, lambda);
  require_finite(y, "measurement vector");

  const double n = static_cast<double>(op.rows());
  const auto p = static_cast<Eigen::Index>(op.cols());

  LassoSolution sol;
  sol.lambda = lambda;
  if (opts.step_size) {
    sol.step_size = *opts.step_size;
  } else {
    const double lip = estimate_lipschitz(op, opts.power_iters, opts.power_tol, opts.power_seed);
    sol.step_size = lip > 0.0 ? 1.0 / (kLipschitzMargin * lip) : 1.0;
  }
  const double step = sol.step_size;
  const double kkt_scale = std::max(1.0, (op.adjoint(y) / n).cwiseAbs().maxCoeff());
  const double kkt_target = opts.tol_kkt * kkt_scale;

  ComplexSignal x = warm_start ? *warm_start : ComplexSignal::Zero(p);
  ComplexSignal fx = op.forward(x);
  ComplexSignal z = x;
  ComplexSignal fz = fx;
  double momentum = 1.0;

  auto value_of = [&](const ComplexSignal& beta, const ComplexSignal& f_beta) {
    return (f_beta - y).squaredNorm() / (2.0 * n) + lambda * l1_norm(beta);
  };
  auto kkt_of = [&](const ComplexSignal& beta, const ComplexSignal& f_beta) {
    const ComplexSignal g = op.adjoint(y - f_beta) / n;
    return lambda == 0.0 ? g.cwiseAbs().maxCoeff() : kkt_from_gradient(g, beta, lambda);
  };

  double current = value_of(x, fx);
  double best = current;
  double kkt = kkt_of(x, fx);
  std::size_t stalled = 0;
  sol.converged = kkt <= kkt_target;

  std::size_t it = 0;
  while (!sol.converged && it < opts.max_iters) {
    ++it;
    const ComplexSignal grad = op.adjoint(fz - y) / n;
    ComplexSignal next = z - step * grad;
    for (Eigen::Index k = 0; k < p; ++k) next[k] = soft_threshold_complex(next[k], step * lambda);
    ComplexSignal f_next = op.forward(next);
    if (!all_finite(next) || !all_finite(f_next)) {
      throw NumericalError("c-LASSO iterate became non-finite", it);
    }

    double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if (opts.restart && (z - next).dot(next - x).real() > 0.0) {
      next_momentum = 1.0;
      momentum = 1.0;
    }
    const double theta = (momentum - 1.0) / next_momentum;
    z = next + theta * (next - x);
    fz = f_next + theta * (f_next - fx);
    momentum = next_momentum;

    const double value = value_of(next, f_next);
    const double change = std::abs(current - value) / std::max(std::abs(value), std::numeric_limits<double>::min());
    stalled = change < opts.tol_obj ? stalled + 1 : 0;
    current = value;
    best = std::min(best, value);
    x = std::move(next);
    fx = std::move(f_next);

    double traced_kkt = std::numeric_limits<double>::quiet_NaN();
    if (it % opts.kkt_every == 0 || stalled >= opts.stall_window || it == opts.max_iters) {
      kkt = kkt_of(x, fx);
      traced_kkt = kkt;
      sol.converged = kkt <= kkt_target;
    }
    if (opts.record_trace) sol.trace.push_back({it, value, best, traced_kkt});
    if (stalled >= opts.stall_window) break;
  }

  sol.beta_hat = std::move(x);
  sol.objective = current;
  sol.kkt_residual = kkt;
  sol.iterations = it;
  return sol;
}

void write_trace_csv(std::ostream& os, const LassoSolution& solution) {
  os << "iteration,objective,best_objective,kkt_residual\n";
  for (const auto& row : solution.trace) {
    os << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", row.iteration, row.objective, row.best_objective,
                      row.kkt_residual);
  }
}

}  // namespace csuq
