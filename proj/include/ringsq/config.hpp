#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Physical configuration and frequency grids shared by every solver.
// All quantities SI (rad/s, s, m, J, W).
namespace ringsq {

enum class ModeLabel { pump, signal, idler };

const char* to_string(ModeLabel m);

struct ModeParams {
  ModeLabel label = ModeLabel::pump;
  double resonance_freq = 0.0;   // omega0, rad/s
  double center_freq = 0.0;      // omega_bar, rad/s (simulation frame)
  double group_velocity = 0.0;   // m/s
  double round_trip_time = 0.0;  // s, = L / v
  double coupling_rho = 0.0;     // bus coupler reflection into the ring
  double coupling_tau = 0.0;     // bus coupler transmission, tau^2 + rho^2 = 1
  double alpha = 0.0;            // propagation loss, 1/m
  double gamma_xpm = 0.0;        // 1/(W m), signal/idler only
  double gamma_spm = 0.0;        // 1/(W m), pump only
};

struct RingConfig {
  double circumference = 0.0;  // m
  ModeParams pump, signal, idler;
  double gamma_sfwm = 0.0;     // 1/(W m)
  double phase_mismatch = 0.0; // delta-k-bar, 1/m (stored, not recomputed)
  double freq_mismatch = 0.0;  // delta-omega-bar = w_s + w_i - 2 w_p, rad/s
  int phantom_channels = 1;

  const ModeParams& mode(ModeLabel m) const;
  ModeParams& mode(ModeLabel m);

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ModeRates {
  double kappa_ex = 0.0;   // rho^2 / (2T), 1/s
  double kappa_in = 0.0;   // alpha L / (2T), 1/s
  double kappa_tot = 0.0;
  double eta_escape = 0.0;       // kappa_ex / kappa_tot
  double eta_escape_exact = 0.0; // rho^2 g^2/(rho^2 g^2 + 1 - g^2), g = e^{-aL/2}
};

struct DerivedRates {
  ModeRates pump, signal, idler;
  double fsr_hz = 0.0;       // 1/T of the signal mode
  double fwhm_hz = 0.0;      // kappa_tot / pi of the signal mode
  double finesse = 0.0;      // fsr / fwhm

  const ModeRates& mode(ModeLabel m) const;
};

// Continuous-decay rates, escape efficiencies and finesse in the high-Q
// convention. Zero total loss gives eta_escape = 1.
DerivedRates derive_rates(const RingConfig& cfg);

struct FrequencyGrid {
  int n_points = 0;       // odd, >= 3
  double spacing = 0.0;   // rad/s
  double signal_center = 0.0;
  double idler_center = 0.0;

  // offset of bin k from the mode center: (k - (n-1)/2) * spacing
  double offset(int k) const { return (k - (n_points - 1) / 2) * spacing; }
  double signal_freq(int k) const { return signal_center + offset(k); }
  double idler_freq(int k) const { return idler_center + offset(k); }
  int center_index() const { return (n_points - 1) / 2; }
};

// Uniform signal/idler grids centered on the mode centers. N must be odd so
// the exact center frequency is a grid point.
FrequencyGrid build_grid(const RingConfig& cfg, int n_points, double span);

// Resonance intensity FWHM in rad/s (2 kappa_tot of the signal mode); the
// default grid span is expressed in multiples of this.
double resonance_fwhm(const RingConfig& cfg);

enum class PulseShape { gaussian, custom_samples };

struct PumpPulseSpec {
  PulseShape shape = PulseShape::gaussian;
  double energy = 0.0;             // J
  double intensity_fwhm_hz = 0.0;  // spectral intensity FWHM, Hz
  double detuning = 0.0;           // pulse center offset from pump resonance, rad/s
  double time_step = 0.0;          // s; the Ikeda clock, must equal T_p
  int n_round_trips = 65536;       // power of two
  double center_time = 0.0;        // s; 0 = auto (6 amplitude sigmas)
  std::vector<std::complex<double>> custom_samples;  // sqrt(W), for custom shape
};

}  // namespace ringsq
