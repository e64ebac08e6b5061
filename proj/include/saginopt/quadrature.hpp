#pragma once

#include <functional>

namespace saginopt {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval. Splits the worst
// segment until the summed error estimate meets max(abs_tol, rel_tol*|I|).
QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double abs_tol = 1e-10,
                           double rel_tol = 1e-8, int max_segments = 4000);

// [lo, inf): extends the finite window by doubling until the marginal tail
// segment is negligible against the running total.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f,
                                       double lo, double abs_tol = 1e-10,
                                       double rel_tol = 1e-8,
                                       double initial_width = 1.0);

}  // namespace saginopt
