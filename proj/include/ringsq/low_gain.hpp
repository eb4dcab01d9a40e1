#pragma once

#include "ringsq/cmat.hpp"
#include "ringsq/config.hpp"
#include "ringsq/pump.hpp"

// Analytic low-gain solutions and the high-Q TCMT kernel, kept free of any
// shared code path with the full solver so agreement between the two is
// evidence rather than tautology.
namespace ringsq::oracle {

// Cavity enhancement function of mode m.
cplx enhancement(const ModeParams& m, double circumference, double omega);

// Airy transmission function of mode m.
cplx transmission(const ModeParams& m, double circumference, double omega);

// Enhancement-dressed self-convolution of the *input* pump spectrum, i.e. the
// effective pump of the low-gain regime. `sum_offset` is relative to
// 2*omega_bar_p. Gaussian pulses only; quadrature runs on an internal fine
// grid independent of the Ikeda machinery.
cplx effective_pump_low_gain(const PumpPulseSpec& spec, const RingConfig& cfg,
                             double sum_offset);

// First-order perturbative cross-mode transfer matrix (the low-gain JSA),
// [n,m] = dw * i (gamma_sfwm L / 2pi) B^lg(w_s,n + w_i,m) L_s(w_s,n) L_i*(w_i,m).
CMat first_order_jsa(const PumpPulseSpec& spec, const RingConfig& cfg,
                     const FrequencyGrid& grid);

// High-Q reduction of the Q matrix, blocks [[Q_ss, Q_si], [Q_si^H, Q_ii^*]].
CMat tcmt_q_blocks(const PumpKernels& kernels, const RingConfig& cfg,
                   const FrequencyGrid& grid);

}  // namespace ringsq::oracle
