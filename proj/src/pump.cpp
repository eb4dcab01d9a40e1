#include "ringsq/pump.hpp"

#include <cmath>

#include "ringsq/errors.hpp"
#include "ringsq/fft.hpp"
#include "ringsq/units.hpp"

namespace ringsq {

cplx spm_roundtrip(cplx field_in, double alpha_p, double gamma_spm, double length) {
  const double al = alpha_p * length;
  const double l_eff = alpha_p > 0.0 ? (1.0 - std::exp(-al)) / alpha_p : length;
  const double phase = gamma_spm * l_eff * std::norm(field_in);
  return field_in * std::exp(-al / 2.0) * std::polar(1.0, phase);
}

double pulse_center_time(const PumpPulseSpec& spec) {
  if (spec.center_time > 0.0) return spec.center_time;
  const double w_fwhm = units::two_pi * spec.intensity_fwhm_hz;
  if (!(w_fwhm > 0)) throw std::invalid_argument("pump: intensity_fwhm must be > 0");
  const double sigma_w = w_fwhm / (2.0 * std::sqrt(std::log(2.0)));  // amplitude std
  return 8.0 / sigma_w;
}

namespace {

std::vector<cplx> make_input(const PumpPulseSpec& spec, int n) {
  std::vector<cplx> in(n);
  const double dt = spec.time_step;
  if (spec.shape == PulseShape::custom_samples) {
    if (int(spec.custom_samples.size()) != n)
      throw std::invalid_argument("pump: custom_samples size must equal n_round_trips");
    in = spec.custom_samples;
  } else {
    // Transform-limited Gaussian with the requested spectral intensity FWHM.
    const double w_fwhm = units::two_pi * spec.intensity_fwhm_hz;
    const double sigma_w = w_fwhm / (2.0 * std::sqrt(std::log(2.0)));  // amplitude std
    const double sigma_t = 1.0 / sigma_w;
    const double tc = pulse_center_time(spec);
    for (int k = 0; k < n; ++k) {
      const double t = k * dt - tc;
      in[k] = std::exp(-t * t / (2.0 * sigma_t * sigma_t)) *
              std::polar(1.0, -spec.detuning * t);
    }
  }
  // Pin the discrete pulse energy: sum |in|^2 dt = E_p. Custom samples with
  // energy == 0 are taken verbatim (CW drives and the like).
  double e = 0.0;
  for (const auto& v : in) e += std::norm(v);
  e *= dt;
  if (e > 0.0 && spec.energy > 0.0) {
    const double s = std::sqrt(spec.energy / e);
    for (auto& v : in) v *= s;
  } else if (spec.energy == 0.0 && spec.shape == PulseShape::gaussian) {
    for (auto& v : in) v = {};
  }
  return in;
}

// Unitary-convention spectrum on the DFT grid, fftshifted to ascending
// frequency offsets: beta(w_k) = dt/sqrt(2 pi) sum_j x_j e^{i w_k t_j}.
std::vector<cplx> spectrum_of(const std::vector<cplx>& time_samples, double dt) {
  std::vector<cplx> x = time_samples;
  fft_pow2(x, +1);
  const size_t n = x.size();
  std::vector<cplx> out(n);
  const double scale = dt / std::sqrt(units::two_pi);
  for (size_t k = 0; k < n; ++k) out[k] = scale * x[(k + n / 2) % n];
  return out;
}

}  // namespace

PumpField run_ikeda(const PumpPulseSpec& spec, const RingConfig& cfg) {
  const ModeParams& p = cfg.pump;
  const int n = spec.n_round_trips;
  if (n < 2 || !is_pow2(size_t(n)))
    throw std::invalid_argument("pump: n_round_trips must be a power of two >= 2");
  if (std::abs(spec.time_step - p.round_trip_time) > 1e-9 * p.round_trip_time)
    throw std::invalid_argument("pump: time_step must equal the pump round-trip time");

  PumpField f;
  f.dt = spec.time_step;
  f.domega = units::two_pi / (double(n) * f.dt);
  f.input = make_input(spec, n);
  f.intracavity.resize(n);
  f.output.resize(n);

  const cplx loop_phase = std::polar(1.0, (p.center_freq - p.resonance_freq) * p.round_trip_time);
  const cplx irho = iu * p.coupling_rho;
  cplx prev{};  // beta(0, t_{-1}) = 0
  for (int k = 0; k < n; ++k) {
    const cplx circulated = spm_roundtrip(prev, p.alpha, p.gamma_spm, cfg.circumference) * loop_phase;
    const cplx cur = p.coupling_tau * circulated + irho * f.input[k];
    if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag()))
      throw DivergedError(k, "pump field non-finite at round trip " + std::to_string(k));
    f.intracavity[k] = cur;
    f.output[k] = irho * circulated + p.coupling_tau * f.input[k];
    prev = cur;
  }

  double peak = 0.0;
  for (const auto& v : f.intracavity) peak = std::max(peak, std::norm(v));
  const double terminal = std::norm(f.intracavity.back());
  f.terminal_ratio = peak > 0 ? terminal / peak : 0.0;
  f.truncation_warning = f.terminal_ratio > 1e-6;

  f.spectrum = spectrum_of(f.intracavity, f.dt);
  f.input_spectrum = spectrum_of(f.input, f.dt);
  return f;
}

PumpKernels build_kernels(const PumpField& field) {
  const size_t n = field.spectrum.size();
  if (n == 0) throw std::invalid_argument("build_kernels: spectrum missing");
  // Discrete autocorrelation and self-convolution of the spectrum, evaluated
  // through the time domain: both reduce to one more DFT.
  //   E_p(D) = dt sum_j |beta(t_j)|^2 e^{i D t_j}
  //   B_p(S) = dt sum_j beta(t_j)^2  e^{i S t_j}
  std::vector<cplx> absq(n), sq(n);
  for (size_t j = 0; j < n; ++j) {
    absq[j] = std::norm(field.intracavity[j]);
    sq[j] = field.intracavity[j] * field.intracavity[j];
  }
  fft_pow2(absq, +1);
  fft_pow2(sq, +1);

  PumpKernels k;
  k.autocorr.dx = k.effective_pump.dx = field.domega;
  k.autocorr.x0 = k.effective_pump.x0 = -double(n / 2) * field.domega;
  k.autocorr.values.resize(n);
  k.effective_pump.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t src = (i + n / 2) % n;
    k.autocorr.values[i] = field.dt * absq[src];
    k.effective_pump.values[i] = field.dt * sq[src];
  }
  return k;
}

}  // namespace ringsq
