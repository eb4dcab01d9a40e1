#pragma once

#include <complex>
#include <vector>

#include "ringsq/cmat.hpp"
#include "ringsq/config.hpp"

namespace ringsq {

// Intracavity pump after the Ikeda iteration, in both domains. Time samples
// live on t_k = k*dt with dt = T_p; the spectrum is the unitary DFT of the
// time samples as a function of omega - omega_bar_p, stored ascending.
struct PumpField {
  double dt = 0.0;
  double domega = 0.0;  // pump grid spacing 2 pi / (n dt)
  std::vector<cplx> input;        // beta^in(t_k), sqrt(W)
  std::vector<cplx> intracavity;  // beta(0, t_k)
  std::vector<cplx> output;       // beta^out(t_k)
  std::vector<cplx> spectrum;        // beta(0, omega), index i -> offset (i - n/2) domega
  std::vector<cplx> input_spectrum;  // beta^in(omega), same layout
  bool truncation_warning = false;
  double terminal_ratio = 0.0;  // terminal/peak intracavity power

  double freq_offset(size_t i) const {
    return (double(i) - double(spectrum.size() / 2)) * domega;
  }
};

// One round trip of loss plus self-phase modulation (exact closed form).
cplx spm_roundtrip(cplx field_in, double alpha_p, double gamma_spm, double length);

// Where the input pulse peak sits on the time axis. center_time == 0 selects
// the default placement of eight amplitude sigmas.
double pulse_center_time(const PumpPulseSpec& spec);

// Iterates the Ikeda map for the classical pump. Throws DivergedError on
// non-finite fields; flags truncation_warning when the terminal intracavity
// power exceeds 1e-6 of the peak.
PumpField run_ikeda(const PumpPulseSpec& spec, const RingConfig& cfg);

// Uniformly sampled kernel with a linear-interpolation evaluator that
// returns 0 outside its support.
struct SampledKernel {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<cplx> values;

  cplx eval(double x) const {
    const double u = (x - x0) / dx;
    if (u < 0.0 || u > double(values.size() - 1)) return {};
    const auto i = size_t(u);
    if (i + 1 >= values.size()) return values.back();
    const double f = u - double(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
  }
};

// Pump autocorrelation E_p(delta) and effective pump B_p(sum), the SFWM/XPM
// kernels. Arguments of the evaluators are offsets: delta = w - w' for the
// autocorrelation, sum - 2*omega_bar_p for the effective pump.
struct PumpKernels {
  SampledKernel autocorr;        // E_p
  SampledKernel effective_pump;  // B_p
};

PumpKernels build_kernels(const PumpField& field);

}  // namespace ringsq
