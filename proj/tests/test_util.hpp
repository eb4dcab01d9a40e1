#pragma once

#include "ringsq/config.hpp"
#include "ringsq/units.hpp"

namespace ringsq::testutil {

// The SiN ring used throughout: 200 um radius, FSR 117 GHz for all modes,
// rho^2 = 0.01, 10 dB/m propagation loss, resonances spaced 3 FSR with exact
// frequency matching, all nonlinear coefficients 1 /(W m).
inline RingConfig paper_ring(double loss_db_per_m = 10.0) {
  RingConfig cfg;
  cfg.circumference = units::two_pi * 200e-6;
  cfg.gamma_sfwm = 1.0;
  cfg.phase_mismatch = 0.0;
  cfg.freq_mismatch = 0.0;
  cfg.phantom_channels = 1;

  const double fsr = 117e9;
  const double rho = std::sqrt(0.01);
  const double alpha = units::alpha_per_m_from_db_per_m(loss_db_per_m);
  auto fill = [&](ModeParams& m, ModeLabel label, double omega0) {
    m.label = label;
    m.resonance_freq = omega0;
    m.center_freq = omega0;
    m.round_trip_time = 1.0 / fsr;
    m.group_velocity = cfg.circumference * fsr;
    m.coupling_rho = rho;
    m.coupling_tau = std::sqrt(1.0 - rho * rho);
    m.alpha = alpha;
  };
  const double wp = units::omega_from_wavelength_nm(1554.2);
  const double ws = units::omega_from_wavelength_nm(1551.4);
  fill(cfg.pump, ModeLabel::pump, wp);
  fill(cfg.signal, ModeLabel::signal, ws);
  fill(cfg.idler, ModeLabel::idler, 2.0 * wp - ws);  // exact frequency matching
  cfg.pump.gamma_spm = 1.0;
  cfg.signal.gamma_xpm = 1.0;
  cfg.idler.gamma_xpm = 1.0;
  return cfg;
}

inline PumpPulseSpec paper_pulse(const RingConfig& cfg, double energy_pj,
                                 double detuning_ghz = 0.0) {
  PumpPulseSpec p;
  p.shape = PulseShape::gaussian;
  p.energy = units::joule_from_pj(energy_pj);
  p.intensity_fwhm_hz = 283e6;
  p.detuning = units::rad_s_from_ghz(detuning_ghz);
  p.time_step = cfg.pump.round_trip_time;
  p.n_round_trips = 65536;
  return p;
}

}  // namespace ringsq::testutil
