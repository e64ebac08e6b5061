#include "saginopt/optcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace saginopt {

void ConvexProblem::validate() const {
  if (dim <= 0) throw std::invalid_argument("convex problem: dim must be > 0");
  if (!objective) throw std::invalid_argument("convex problem: no objective");
  if (static_cast<int>(lower.size()) != dim ||
      static_cast<int>(upper.size()) != dim)
    throw std::invalid_argument("convex problem: bounds size mismatch");
  for (int i = 0; i < dim; ++i)
    if (lower[i] > upper[i])
      throw std::invalid_argument("convex problem: lower bound above upper");
  for (const auto& c : constraints)
    for (const auto& [idx, coeff] : c.terms)
      if (idx < 0 || idx >= dim)
        throw std::invalid_argument("convex problem: constraint index range");
}

double feasibility_violation(const ConvexProblem& problem,
                             std::span<const double> x) {
  double worst = 0.0;
  for (int i = 0; i < problem.dim; ++i) {
    worst = std::max(worst, problem.lower[i] - x[i]);
    worst = std::max(worst, x[i] - problem.upper[i]);
  }
  for (const auto& c : problem.constraints) {
    double lhs = 0.0;
    for (const auto& [idx, coeff] : c.terms) lhs += coeff * x[idx];
    worst = std::max(worst, lhs - c.bound);
  }
  return worst;
}

namespace {

void clamp_to_box(const ConvexProblem& problem, std::vector<double>& x) {
  for (int i = 0; i < problem.dim; ++i)
    x[i] = std::clamp(x[i], problem.lower[i], problem.upper[i]);
}

void project_halfspace(const LinearConstraint& c, std::vector<double>& x) {
  double lhs = 0.0;
  double norm2 = 0.0;
  for (const auto& [idx, coeff] : c.terms) {
    lhs += coeff * x[idx];
    norm2 += coeff * coeff;
  }
  if (lhs <= c.bound || norm2 == 0.0) return;
  const double step = (lhs - c.bound) / norm2;
  for (const auto& [idx, coeff] : c.terms) x[idx] -= step * coeff;
}

}  // namespace

std::vector<double> project_feasible(const ConvexProblem& problem,
                                     std::span<const double> point) {
  std::vector<double> x(point.begin(), point.end());
  clamp_to_box(problem, x);
  if (problem.constraints.empty() ||
      feasibility_violation(problem, x) <= 0.0)
    return x;
  x.assign(point.begin(), point.end());
  // Dykstra's alternating projections with per-set corrections. Stop only
  // when the corrections stabilize: iterates can sit feasible for many
  // cycles while the corrections still carry the far-out component.
  const std::size_t sets = problem.constraints.size() + 1;
  std::vector<std::vector<double>> corrections(
      sets, std::vector<double>(problem.dim, 0.0));
  std::vector<double> before(problem.dim);
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double settle = 1e-13 * scale;
  for (int cycle = 0; cycle < 4000; ++cycle) {
    double delta = 0.0;
    for (std::size_t s = 0; s < sets; ++s) {
      for (int i = 0; i < problem.dim; ++i) {
        x[i] += corrections[s][i];
        before[i] = x[i];
      }
      if (s == 0)
        clamp_to_box(problem, x);
      else
        project_halfspace(problem.constraints[s - 1], x);
      for (int i = 0; i < problem.dim; ++i) {
        const double next = before[i] - x[i];
        delta = std::max(delta, std::abs(next - corrections[s][i]));
        corrections[s][i] = next;
      }
    }
    if (delta <= settle) break;
  }
  return x;
}

MinimizeResult minimize(const ConvexProblem& problem,
                        std::span<const double> start) {
  problem.validate();
  if (static_cast<int>(start.size()) != problem.dim)
    throw std::invalid_argument("minimize: start size mismatch");
  if (feasibility_violation(problem, start) > problem.feasibility_tol)
    throw SolverError("minimize: start point infeasible");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> x(start.begin(), start.end());
  std::vector<double> grad(problem.dim), trial(problem.dim),
      trial_grad(problem.dim), prev_x, prev_grad;

  auto eval = [&](std::span<const double> p, std::span<double> g) {
    const double v = problem.objective(p, g);
    return std::isnan(v) ? inf : v;
  };

  double value = eval(x, grad);
  if (!std::isfinite(value))
    throw SolverError("minimize: objective not finite at start");

  MinimizeResult result;
  // Displacements handed to the projection are capped relative to the box
  // size; far-out points make the alternating projections ill-conditioned.
  double diameter = 1.0;
  for (int i = 0; i < problem.dim; ++i)
    if (std::isfinite(problem.upper[i]) && std::isfinite(problem.lower[i]))
      diameter = std::max(diameter, problem.upper[i] - problem.lower[i]);
  auto step_cap = [&](const std::vector<double>& g) {
    double gnorm = 0.0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    return gnorm > 0.0 ? 100.0 * diameter / gnorm
                       : std::numeric_limits<double>::max();
  };

  double step = 1.0;
  {
    double gnorm = 0.0;
    for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
    if (gnorm > 0.0) step = 1.0 / gnorm;
  }

  // Projected-gradient residual with a unit (box-capped) reference step.
  auto pg_residual = [&](const std::vector<double>& p,
                         const std::vector<double>& g) {
    const double t_ref = std::min(1.0, step_cap(g) * 0.01);
    std::vector<double> ref(problem.dim);
    for (int i = 0; i < problem.dim; ++i) ref[i] = p[i] - t_ref * g[i];
    ref = project_feasible(problem, std::span<const double>(ref));
    double r = 0.0;
    for (int i = 0; i < problem.dim; ++i)
      r = std::max(r, std::abs(ref[i] - p[i]));
    return r;
  };

  constexpr double kArmijo = 1e-4;
  int it = 0;
  double last_move = std::numeric_limits<double>::infinity();
  for (; it < problem.max_iterations; ++it) {
    // The unit-step residual needs an extra projection; skip it while the
    // iterates are still moving a lot.
    if (last_move <= problem.optimality_tol * 4.0 || (it & 7) == 0) {
      result.residual = pg_residual(x, grad);
      if (result.residual <= problem.optimality_tol) {
        result.converged = true;
        break;
      }
    }

    // Barzilai-Borwein step length from the previous pair, safeguarded.
    if (!prev_x.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (int i = 0; i < problem.dim; ++i) {
        const double s = x[i] - prev_x[i];
        const double y = grad[i] - prev_grad[i];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 1e-300 && ss > 0.0)
        step = std::clamp(ss / sy, 1e-14, step_cap(grad));
    }
    step = std::min(step, step_cap(grad));

    bool accepted = false;
    double trial_value = inf;
    for (int backtrack = 0; backtrack < 70; ++backtrack) {
      for (int i = 0; i < problem.dim; ++i) trial[i] = x[i] - step * grad[i];
      trial = project_feasible(problem, std::span<const double>(trial));
      double directional = 0.0;
      double move = 0.0;
      for (int i = 0; i < problem.dim; ++i) {
        const double d = trial[i] - x[i];
        directional += grad[i] * d;
        move = std::max(move, std::abs(d));
      }
      if (move <= 1e-15) break;  // pinned: no feasible move at this scale
      trial_value = eval(trial, trial_grad);
      if (trial_value <= value + kArmijo * directional) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.residual = pg_residual(x, grad);
      result.converged = result.residual <= problem.optimality_tol * 10.0;
      break;  // line search exhausted; report the best point found
    }

    last_move = 0.0;
    for (int i = 0; i < problem.dim; ++i)
      last_move = std::max(last_move, std::abs(trial[i] - x[i]));
    prev_x = x;
    prev_grad = grad;
    x = trial;
    std::swap(grad, trial_grad);
    value = trial_value;
  }

  result.point = std::move(x);
  result.value = value;
  result.iterations = it;
  return result;
}

}  // namespace saginopt
