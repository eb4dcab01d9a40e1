#include "ringsq/low_gain.hpp"

#include <cmath>

#include "ringsq/units.hpp"

namespace ringsq::oracle {

cplx enhancement(const ModeParams& m, double circumference, double omega) {
  const cplx loop = m.coupling_tau * std::exp(-m.alpha * circumference / 2.0) *
                    std::polar(1.0, (omega - m.resonance_freq) * m.round_trip_time);
  return iu * m.coupling_rho / (1.0 - loop);
}

cplx transmission(const ModeParams& m, double circumference, double omega) {
  const cplx ring = std::exp(-m.alpha * circumference / 2.0) *
                    std::polar(1.0, (omega - m.resonance_freq) * m.round_trip_time);
  return (m.coupling_tau - ring) / (1.0 - m.coupling_tau * ring);
}

namespace {

// Analytic transform-limited Gaussian amplitude spectrum at offset d from the
// (detuned) pulse center, normalized to integrate |.|^2 to the pulse energy.
double gaussian_amp(double energy, double w_fwhm, double d) {
  const double peak_sq = energy * (2.0 / w_fwhm) * std::sqrt(std::log(2.0) / M_PI);
  return std::sqrt(peak_sq) * std::exp(-2.0 * std::log(2.0) * d * d / (w_fwhm * w_fwhm));
}

}  // namespace

cplx effective_pump_low_gain(const PumpPulseSpec& spec, const RingConfig& cfg,
                             double sum_offset) {
  if (spec.shape != PulseShape::gaussian)
    throw std::invalid_argument("oracle: only gaussian pulses supported");
  const double w_fwhm = units::two_pi * spec.intensity_fwhm_hz;
  // Integrand support: both Gaussians and both enhancement resonances sit
  // within a few linewidths/FWHMs of the center; +-24 FWHM at ~1/500 FWHM
  // steps converges well past 1e-8 relative.
  const double half = 24.0 * std::max(w_fwhm, resonance_fwhm(cfg));
  const int npts = 1 << 15;
  const double dw = 2.0 * half / npts;
  const double wp = cfg.pump.center_freq;
  cplx acc{};
  for (int j = 0; j <= npts; ++j) {
    const double w2 = -half + j * dw;            // offset of omega'' from omega_bar_p
    const double w1 = sum_offset - w2;           // offset of (sum - omega'')
    const double a1 = gaussian_amp(spec.energy, w_fwhm, w1 - spec.detuning);
    const double a2 = gaussian_amp(spec.energy, w_fwhm, w2 - spec.detuning);
    if (a1 == 0.0 && a2 == 0.0) continue;
    const cplx l1 = enhancement(cfg.pump, cfg.circumference, wp + w1);
    const cplx l2 = enhancement(cfg.pump, cfg.circumference, wp + w2);
    const double trap = (j == 0 || j == npts) ? 0.5 : 1.0;
    acc += trap * a1 * a2 * l1 * l2;
  }
  // The input pulse peaks at t_c, which shows up as a linear spectral phase
  // e^{i (w - w_bar) t_c} on each factor and so as e^{i sum_offset t_c} here.
  return acc * dw * std::polar(1.0, sum_offset * pulse_center_time(spec));
}

CMat first_order_jsa(const PumpPulseSpec& spec, const RingConfig& cfg,
                     const FrequencyGrid& grid) {
  const int n = grid.n_points;
  // Sum frequencies only take 2N-1 distinct values on the uniform grid.
  std::vector<cplx> bsum(2 * n - 1);
  for (int s = 0; s < 2 * n - 1; ++s) {
    const double sum_offset = (s - (n - 1)) * grid.spacing + cfg.freq_mismatch;
    bsum[s] = effective_pump_low_gain(spec, cfg, sum_offset);
  }
  const cplx pref = iu * cfg.gamma_sfwm * cfg.circumference / units::two_pi * grid.spacing;
  CMat jsa(n, n);
  std::vector<cplx> ls(n), li_conj(n);
  for (int k = 0; k < n; ++k) {
    ls[k] = enhancement(cfg.signal, cfg.circumference, grid.signal_freq(k));
    li_conj[k] = std::conj(enhancement(cfg.idler, cfg.circumference, grid.idler_freq(k)));
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) jsa(r, c) = pref * bsum[r + c] * ls[r] * li_conj[c];
  return jsa;
}

CMat tcmt_q_blocks(const PumpKernels& kernels, const RingConfig& cfg,
                   const FrequencyGrid& grid) {
  const int n = grid.n_points;
  const DerivedRates rates = derive_rates(cfg);
  CMat q(2 * n, 2 * n);
  const double dw = grid.spacing;
  const cplx xpm_s = iu * 2.0 * cfg.signal.gamma_xpm * cfg.circumference / units::two_pi * dw;
  const cplx xpm_i = iu * 2.0 * cfg.idler.gamma_xpm * cfg.circumference / units::two_pi * dw;
  const cplx sfwm = iu * cfg.gamma_sfwm * cfg.circumference / units::two_pi * dw;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const cplx e = kernels.autocorr.eval((r - c) * dw);
      const cplx b = kernels.effective_pump.eval((r + c - (n - 1)) * dw + cfg.freq_mismatch);
      cplx qss = -xpm_s * e;
      cplx qii = -xpm_i * e;
      if (r == c) {
        qss += (rates.signal.kappa_tot - iu * (grid.signal_freq(r) - cfg.signal.resonance_freq)) *
               cfg.signal.round_trip_time;
        qii += (rates.idler.kappa_tot - iu * (grid.idler_freq(r) - cfg.idler.resonance_freq)) *
               cfg.idler.round_trip_time;
      }
      const cplx qsi = -sfwm * b;
      q(r, c) = qss;                      // Q_ss
      q(n + r, n + c) = std::conj(qii);   // (Q_ii)*
      q(r, n + c) = qsi;                  // Q_si
      q(n + c, r) = std::conj(qsi);       // Q_si^H
    }
  }
  return q;
}

}  // namespace ringsq::oracle
