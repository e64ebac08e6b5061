#include "saginopt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace saginopt {
namespace {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss
// rule (even-index Kronrod nodes carry Gauss weights).
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Segment {
  double lo, hi;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate_segment(const std::function<double(double)>& f, double lo,
                         double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double y = f(mid + half * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * y;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * y;
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::abs(kronrod - gauss);
  // Standard QUADPACK-style sharpened error estimate.
  const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff, 1.5))
                                : 0.0;
  return {lo, hi, kronrod, std::max(err, diff * 1e-6)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double abs_tol, double rel_tol,
                           int max_segments) {
  QuadratureResult result;
  if (lo == hi) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Segment> segments;
  segments.push(evaluate_segment(f, lo, hi));
  result.evaluations = 15;
  double total = segments.top().value;
  double total_err = segments.top().error;
  int count = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         count < max_segments) {
    Segment worst = segments.top();
    segments.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {  // interval exhausted
      segments.push(worst);
      break;
    }
    Segment left = evaluate_segment(f, worst.lo, mid);
    Segment right = evaluate_segment(f, mid, worst.hi);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    segments.push(left);
    segments.push(right);
    ++count;
  }
  result.value = total;
  result.error = total_err;
  result.converged =
      total_err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0001 ||
      total_err <= abs_tol;
  return result;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f,
                                       double lo, double abs_tol,
                                       double rel_tol, double initial_width) {
  QuadratureResult total;
  total.converged = true;
  double a = lo;
  double width = initial_width;
  for (int block = 0; block < 64; ++block) {
    const double b = a + width;
    QuadratureResult part = integrate(f, a, b, abs_tol, rel_tol);
    total.value += part.value;
    total.error += part.error;
    total.evaluations += part.evaluations;
    total.converged = total.converged && part.converged;
    if (std::abs(part.value) <=
        std::max(abs_tol, 0.5 * rel_tol * std::abs(total.value)))
      return total;
    a = b;
    width *= 2.0;
  }
  total.converged = false;
  return total;
}

}  // namespace saginopt
