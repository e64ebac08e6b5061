#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace saginopt {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse half-space sum_i coeff_i * x[index_i] <= bound.
struct LinearConstraint {
  std::vector<std::pair<int, double>> terms;
  double bound = 0.0;
};

/// Smooth convex objective over a box intersected with half-spaces.
struct ConvexProblem {
  int dim = 0;
  // Returns the value and fills the gradient (same length as x).
  std::function<double(std::span<const double>, std::span<double>)> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearConstraint> constraints;
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-6;
  int max_iterations = 10000;

  void validate() const;
};

struct MinimizeResult {
  std::vector<double> point;
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // projected-gradient norm at the solution
  bool converged = false;
};

// Largest constraint/box violation at x.
double feasibility_violation(const ConvexProblem& problem,
                             std::span<const double> x);

// Dykstra projection onto box ∩ half-spaces.
std::vector<double> project_feasible(const ConvexProblem& problem,
                                     std::span<const double> point);

// Projected gradient descent with Armijo backtracking from a feasible start.
// Throws SolverError when the start is infeasible beyond tolerance.
MinimizeResult minimize(const ConvexProblem& problem,
                        std::span<const double> start);

}  // namespace saginopt
