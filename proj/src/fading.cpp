#include "saginopt/fading.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "saginopt/geometry.hpp"
#include "saginopt/quadrature.hpp"

namespace saginopt {

PerModel PerModel::shadowed_rician(double b0, int m, double omega,
                                   int packet_bits, std::string label) {
  PerModel model;
  model.kind = Kind::ShadowedRician;
  model.b0 = b0;
  model.m = m;
  model.omega = omega;
  model.packet_bits = packet_bits;
  model.label = std::move(label);
  model.validate();
  return model;
}

PerModel PerModel::loo(double mu, double d0, double b0, int packet_bits,
                       std::string label) {
  PerModel model;
  model.kind = Kind::Loo;
  model.mu = mu;
  model.d0 = d0;
  model.b0 = b0;
  model.packet_bits = packet_bits;
  model.label = std::move(label);
  model.validate();
  return model;
}

void PerModel::validate() const {
  if (b0 <= 0.0) throw std::invalid_argument("per model: b0 must be > 0");
  if (packet_bits < 1)
    throw std::invalid_argument("per model: packet length must be >= 1 bit");
  if (kind == Kind::ShadowedRician) {
    if (m < 1) throw std::invalid_argument("per model: m must be >= 1");
    if (omega <= 0.0)
      throw std::invalid_argument("per model: omega must be > 0");
  } else if (d0 <= 0.0) {
    throw std::invalid_argument("per model: d0 must be > 0");
  }
}

PerModel ils_model(int packet_bits) {
  return PerModel::shadowed_rician(0.158, 19, 1.29, packet_bits, "ILS");
}
PerModel fhs_model(int packet_bits) {
  return PerModel::shadowed_rician(0.063, 1, 8.97e-4, packet_bits, "FHS");
}
PerModel as_model(int packet_bits) {
  return PerModel::shadowed_rician(0.126, 10, 0.835, packet_bits, "AS");
}
PerModel loo_model(int packet_bits) {
  return PerModel::loo(0.5, 0.01, 0.063, packet_bits, "Loo");
}

double bpsk_ber(double snr) {
  if (snr < 0.0) throw std::invalid_argument("bpsk_ber: snr must be >= 0");
  return 0.5 * std::erfc(std::sqrt(snr));
}

double awgn_per(double snr, int packet_bits) {
  const double ber = bpsk_ber(snr);
  if (ber >= 1.0) return 1.0;
  // 1 - (1-b)^n without cancellation for tiny b.
  return -std::expm1(static_cast<double>(packet_bits) * std::log1p(-ber));
}

double kummer_1f1(int m, double x) {
  if (m < 1) throw std::invalid_argument("kummer_1f1: m must be >= 1");
  // 1F1(m,1,x) = exp(x) * sum_{k=0}^{m-1} C(m-1,k) x^k / k!
  double term = 1.0;
  double poly = 1.0;
  for (int k = 1; k <= m - 1; ++k) {
    term *= x * static_cast<double>(m - k) /
            (static_cast<double>(k) * static_cast<double>(k));
    poly += term;
  }
  return poly * std::exp(x);
}

double bessel_i0e(double x) {
  x = std::abs(x);
  if (x <= 20.0) {
    // Power series sum (x^2/4)^k / (k!)^2, then scale.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 120; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k));
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x);
  }
  // Asymptotic expansion for exp(-x) I0(x).
  const double inv = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 10; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd * inv / static_cast<double>(k);
    sum += term;
    if (std::abs(term) < sum * 1e-17) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double bessel_i0(double x) { return bessel_i0e(x) * std::exp(std::abs(x)); }

namespace {

double per_truncation_point(int packet_bits) {
  double hi = 1.0;
  while (awgn_per(hi, packet_bits) > 1e-12 && hi < 1e9) hi *= 2.0;
  return hi;
}

std::mutex c0_mutex;
std::map<int, double> c0_cache;

// Inner lognormal-Rice mixture of the Loo density, written with the scaled
// Bessel function so the integrand never overflows:
//   exp(-((r-z)^2)/(2 b0)) i0e(r z / b0) * exp(-(ln z - mu)^2 / (2 d0)) / z
double loo_inner(double r, const PerModel& model) {
  const double sd_log = std::sqrt(model.d0);
  const double sd_rice = std::sqrt(model.b0);
  double lo = std::max(std::exp(model.mu - 12.0 * sd_log), 1e-12);
  double hi = std::exp(model.mu + 12.0 * sd_log);
  lo = std::max(lo, r - 12.0 * sd_rice);
  hi = std::min(hi, r + 12.0 * sd_rice);
  if (hi <= lo) return 0.0;
  auto integrand = [&](double z) {
    const double lg = std::log(z) - model.mu;
    const double e1 = lg * lg / (2.0 * model.d0);
    const double dr = r - z;
    const double e2 = dr * dr / (2.0 * model.b0);
    if (e1 + e2 > 700.0) return 0.0;
    return std::exp(-e1 - e2) * bessel_i0e(r * z / model.b0) / z;
  };
  QuadratureResult q = integrate(integrand, lo, hi, 1e-12, 1e-8);
  return q.value;
}

}  // namespace

double c0_integral(int packet_bits) {
  if (packet_bits < 1)
    throw std::invalid_argument("c0_integral: packet length must be >= 1");
  {
    std::lock_guard<std::mutex> lock(c0_mutex);
    auto it = c0_cache.find(packet_bits);
    if (it != c0_cache.end()) return it->second;
  }
  const double hi = per_truncation_point(packet_bits);
  QuadratureResult q = integrate(
      [packet_bits](double g) { return awgn_per(g, packet_bits); }, 0.0, hi,
      1e-10, 1e-8);
  if (!q.converged)
    throw std::runtime_error("c0_integral: quadrature did not converge");
  std::lock_guard<std::mutex> lock(c0_mutex);
  c0_cache[packet_bits] = q.value;
  return q.value;
}

double sr_pdf(double snr, double avg_snr, const PerModel& model) {
  if (model.kind != PerModel::Kind::ShadowedRician)
    throw std::invalid_argument("sr_pdf: model is not Shadowed-Rician");
  if (snr < 0.0) return 0.0;
  const double b0 = model.b0;
  const double omega = model.omega;
  const double m = static_cast<double>(model.m);
  const double scale = 2.0 * b0 * avg_snr;
  const double front = std::pow(2.0 * b0 * m / (2.0 * b0 * m + omega), m) / scale;
  const double arg = omega * snr / (scale * (2.0 * b0 * m + omega));
  return front * std::exp(-snr / scale) * kummer_1f1(model.m, arg);
}

double loo_pdf(double snr, double avg_snr, const PerModel& model) {
  if (model.kind != PerModel::Kind::Loo)
    throw std::invalid_argument("loo_pdf: model is not Loo");
  if (snr <= 0.0) return 0.0;
  const double r = snr / avg_snr;
  const double front =
      snr / (model.b0 * avg_snr * avg_snr * std::sqrt(2.0 * kPi * model.d0));
  return front * loo_inner(r, model);
}

double per_upper_sr(double avg_snr, const PerModel& model) {
  if (avg_snr <= 0.0)
    throw std::invalid_argument("per_upper_sr: average snr must be > 0");
  const double c0 = c0_integral(model.packet_bits);
  QuadratureResult q = integrate(
      [&](double g) { return sr_pdf(g, avg_snr, model); }, 0.0, c0, 1e-12, 1e-8);
  if (!q.converged)
    throw std::runtime_error("per_upper_sr: quadrature did not converge");
  return std::clamp(q.value, 0.0, 1.0);
}

double per_upper_loo(double avg_snr, const PerModel& model) {
  if (avg_snr <= 0.0)
    throw std::invalid_argument("per_upper_loo: average snr must be > 0");
  const double c0 = c0_integral(model.packet_bits);
  QuadratureResult q = integrate(
      [&](double g) { return loo_pdf(g, avg_snr, model); }, 0.0, c0, 1e-12,
      1e-7);
  if (!q.converged)
    throw std::runtime_error("per_upper_loo: quadrature did not converge");
  return std::clamp(q.value, 0.0, 1.0);
}

double per_upper_bound(double avg_snr, const PerModel& model) {
  return model.kind == PerModel::Kind::ShadowedRician
             ? per_upper_sr(avg_snr, model)
             : per_upper_loo(avg_snr, model);
}

}  // namespace saginopt
