#pragma once

#include <algorithm>
#include <vector>

#include "saginopt/geometry.hpp"

namespace saginopt {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Link budget of one link class (ISL, G2S, S2A or G2A). All members are
/// linear units; dB conversion happens only at the config boundary.
struct LinkParams {
  double tx_power_w = 1.0;
  double tx_gain = 1.0;
  double rx_gain = 1.0;
  double add_loss = 1.0;    // extra environment loss, in (0, 1]
  double frequency_hz = 1.0;
  double bandwidth_hz = 1.0;
  double noise_psd = 1.0;   // W/Hz
  double fading_gain = 1.0; // small-scale power gain h^2

  double wavelength_m() const { return kSpeedOfLight / frequency_hz; }
  void validate() const;
};

// Free-space path loss (lambda / 4 pi d)^2, returned as a linear gain.
double path_loss(double wavelength_m, double distance_m);

// Received SNR P G_T G_R L_add L_PL h^2 / (n0 W).
double link_snr(const LinkParams& p, double distance_m);

// W log2(1 + snr), bits/s.
double shannon_rate(double bandwidth_hz, double snr);

// Rate of a satellite granted a fraction omega of a ground station band:
// omega W log2(1 + c / omega). The omega -> 0 limit is 0.
double g2s_rate(double omega, double c_const, double bandwidth_hz);

// SNR-like constant c of a G2S link: the full budget without the bandwidth
// split, so that the rate at share omega is g2s_rate(omega, c, W).
double g2s_c_const(const LinkParams& p, double distance_m);

// Transmission delay of a file fraction: ratio * packets * packet_bits / C.
double tx_delay(double ratio, double packets, double packet_bits,
                double capacity_bps);

double prop_delay(double distance_m);

/// Per-file delay record: phase 1 (parallel feeder links into the serving
/// satellite) and phase 2 (the final hop to the aircraft).
struct DelayBreakdown {
  std::vector<double> phase1_tran_s;  // per established phase-1 link
  std::vector<double> phase1_prop_s;  // matching propagation delays
  double phase2_s = 0.0;
  double total_s = 0.0;

  // Slowest combined phase-1 link.
  double phase1_s() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < phase1_tran_s.size(); ++i)
      worst = std::max(worst, phase1_tran_s[i] + phase1_prop_s[i]);
    return worst;
  }
  void finalize() { total_s = phase1_s() + phase2_s; }
};

}  // namespace saginopt
