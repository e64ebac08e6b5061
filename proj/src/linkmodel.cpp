#include "saginopt/linkmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace saginopt {

void LinkParams::validate() const {
  if (tx_power_w <= 0.0 || tx_gain <= 0.0 || rx_gain <= 0.0)
    throw std::invalid_argument("link params: powers and gains must be > 0");
  if (add_loss <= 0.0 || add_loss > 1.0)
    throw std::invalid_argument("link params: add_loss must lie in (0, 1]");
  if (frequency_hz <= 0.0 || bandwidth_hz <= 0.0 || noise_psd <= 0.0)
    throw std::invalid_argument(
        "link params: frequency, bandwidth and noise psd must be > 0");
  if (fading_gain < 0.0)
    throw std::invalid_argument("link params: fading gain must be >= 0");
}

double path_loss(double wavelength_m, double distance_m) {
  if (wavelength_m <= 0.0)
    throw std::invalid_argument("path_loss: wavelength must be > 0");
  if (distance_m <= 0.0)
    throw std::invalid_argument("path_loss: distance must be > 0");
  const double amp = wavelength_m / (4.0 * kPi * distance_m);
  return amp * amp;
}

double link_snr(const LinkParams& p, double distance_m) {
  const double pl = path_loss(p.wavelength_m(), distance_m);
  return p.tx_power_w * p.tx_gain * p.rx_gain * p.add_loss * pl *
         p.fading_gain / (p.noise_psd * p.bandwidth_hz);
}

double shannon_rate(double bandwidth_hz, double snr) {
  if (bandwidth_hz <= 0.0)
    throw std::invalid_argument("shannon_rate: bandwidth must be > 0");
  if (snr < 0.0) throw std::invalid_argument("shannon_rate: snr must be >= 0");
  return bandwidth_hz * std::log2(1.0 + snr);
}

double g2s_rate(double omega, double c_const, double bandwidth_hz) {
  if (omega < 0.0 || omega > 1.0)
    throw std::invalid_argument("g2s_rate: omega must lie in [0, 1]");
  if (c_const < 0.0)
    throw std::invalid_argument("g2s_rate: c_const must be >= 0");
  if (omega == 0.0) return 0.0;  // limit value
  return omega * bandwidth_hz * std::log2(1.0 + c_const / omega);
}

double g2s_c_const(const LinkParams& p, double distance_m) {
  const double pl = path_loss(p.wavelength_m(), distance_m);
  return p.tx_power_w * p.tx_gain * p.rx_gain * p.add_loss * pl /
         (p.noise_psd * p.bandwidth_hz);
}

double tx_delay(double ratio, double packets, double packet_bits,
                double capacity_bps) {
  if (ratio == 0.0) return 0.0;
  if (capacity_bps <= 0.0)
    throw std::invalid_argument("tx_delay: zero-capacity link cannot carry data");
  return ratio * packets * packet_bits / capacity_bps;
}

double prop_delay(double distance_m) { return distance_m / kSpeedOfLight; }

}  // namespace saginopt
