#pragma once

#include <string>

namespace saginopt {

/// Small-scale fading model attached to a link class, used to bound the
/// average packet error rate of an uncoded packet of n bits.
struct PerModel {
  enum class Kind { ShadowedRician, Loo };

  Kind kind = Kind::ShadowedRician;
  // Shadowed-Rician: 2*b0 is the average multipath power, m the Nakagami
  // parameter of the LoS component, omega its average power.
  double b0 = 0.158;
  int m = 19;
  double omega = 1.29;
  // Loo: mean and variance of the lognormal LoS amplitude (b0 reused for the
  // multipath power).
  double mu = 0.0;
  double d0 = 0.0;

  int packet_bits = 1023;
  std::string label;

  static PerModel shadowed_rician(double b0, int m, double omega,
                                  int packet_bits, std::string label);
  static PerModel loo(double mu, double d0, double b0, int packet_bits,
                      std::string label);
  void validate() const;
};

// Shipped parameter sets: infrequent light / frequent heavy / average
// shadowing for ground-space links, plus the light-shadowing Loo set for
// space-air links.
PerModel ils_model(int packet_bits = 1023);
PerModel fhs_model(int packet_bits = 1023);
PerModel as_model(int packet_bits = 1023);
PerModel loo_model(int packet_bits = 1023);

// Coherent BPSK bit error rate Q(sqrt(2 snr)).
double bpsk_ber(double snr);

// AWGN packet error rate 1 - (1 - ber)^n for an uncoded n-bit packet.
double awgn_per(double snr, int packet_bits);

// Confluent hypergeometric 1F1(m, 1, x) for integer m >= 1, evaluated as
// exp(x) times the degree m-1 Kummer polynomial.
double kummer_1f1(int m, double x);

// Modified Bessel function of the first kind, order zero, and its
// exponentially scaled variant exp(-x) I0(x).
double bessel_i0(double x);
double bessel_i0e(double x);

// c0 = integral of the AWGN PER over snr, the truncation point of the
// average-PER upper bounds.
double c0_integral(int packet_bits);

// SNR densities under the two fading families (average SNR avg_snr).
double sr_pdf(double snr, double avg_snr, const PerModel& model);
double loo_pdf(double snr, double avg_snr, const PerModel& model);

// Upper bounds on the average PER: the fading pdf integrated over [0, c0].
double per_upper_sr(double avg_snr, const PerModel& model);
double per_upper_loo(double avg_snr, const PerModel& model);

// Dispatch on model.kind.
double per_upper_bound(double avg_snr, const PerModel& model);

}  // namespace saginopt
