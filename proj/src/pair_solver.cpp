#include "ringsq/pair_solver.hpp"

#include <cmath>

#include "ringsq/detail/eigen_map.hpp"
#include "ringsq/errors.hpp"
#include "ringsq/kernels.hpp"
#include "ringsq/units.hpp"

namespace ringsq {

namespace {

// z-dependence of the generator is a pure phase on the F blocks with rate
// mu = dk_bar - dw_bar / v_p; everything else is constant along the ring.
double phase_rate(const RingConfig& cfg) {
  return cfg.phase_mismatch - cfg.freq_mismatch / cfg.pump.group_velocity;
}

}  // namespace

CMat build_generator(const PumpKernels& kernels, const RingConfig& cfg,
                     const FrequencyGrid& grid, double z, bool xpm_on) {
  const int n = grid.n_points;
  const double dw = grid.spacing;
  const double inv_vp = 1.0 / cfg.pump.group_velocity;
  const double walk_s = 1.0 / cfg.signal.group_velocity - inv_vp;
  const double walk_i = 1.0 / cfg.idler.group_velocity - inv_vp;
  const double g_xpm_s = xpm_on ? cfg.signal.gamma_xpm : 0.0;
  const double g_xpm_i = xpm_on ? cfg.idler.gamma_xpm : 0.0;
  const cplx fphase = std::polar(1.0, -phase_rate(cfg) * z);

  CMat gen(2 * n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const cplx e = kernels.autocorr.eval((r - c) * dw);
      const cplx b = kernels.effective_pump.eval((r + c - (n - 1)) * dw + cfg.freq_mismatch);
      cplx g = 2.0 * g_xpm_s / units::two_pi * e * dw;
      cplx h = 2.0 * g_xpm_i / units::two_pi * std::conj(e) * dw;
      if (r == c) {
        g += grid.offset(r) * walk_s;
        h += grid.offset(r) * walk_i;
      }
      const cplx f = cfg.gamma_sfwm / units::two_pi * b * fphase * dw;
      gen(r, c) = iu * g;
      gen(r, n + c) = iu * f;
      // -F^H and -H^H entries; F's sum argument is symmetric in (r,c) and the
      // autocorrelation kernel is hermitian, so both reduce to conjugations.
      gen(n + r, c) = -iu * std::conj(f);
      gen(n + r, n + c) = -iu * h;
    }
  }
  return gen;
}

namespace {

double bogoliubov_defect(const CMat& u) {
  const int n2 = u.rows();
  const int n = n2 / 2;
  CMat uj = u;
  for (int r = 0; r < n2; ++r)
    for (int c = n; c < n2; ++c) uj(r, c) = -uj(r, c);
  CMat m = kern::matmul_adjoint(uj, u);  // U J U^H
  for (int d = 0; d < n2; ++d) m(d, d) -= (d < n) ? 1.0 : -1.0;
  return m.max_abs();
}

}  // namespace

RoundTripMatrix integrate_roundtrip(const PumpKernels& kernels, const RingConfig& cfg,
                                    const FrequencyGrid& grid, double segment_length,
                                    double z0, int z_steps, bool xpm_on) {
  if (z_steps < 1) throw std::invalid_argument("integrate_roundtrip: z_steps must be >= 1");
  const int n2 = 2 * grid.n_points;
  const size_t sz = size_t(n2) * n2;
  const double h = segment_length / z_steps;
  const bool z_const = phase_rate(cfg) == 0.0;

  CMat a = CMat::identity(n2);
  CMat gen = build_generator(kernels, cfg, grid, z0, xpm_on);
  if (z_const && gen.max_abs() == 0.0) {
    // dark ring with no walk-off: the propagator is exactly the identity
    RoundTripMatrix rt;
    rt.z_steps = z_steps;
    rt.segment_length = segment_length;
    rt.z0 = z0;
    rt.u = std::move(a);
    return rt;
  }
  CMat stage(n2, n2), k1(n2, n2), k2(n2, n2), k3(n2, n2), k4(n2, n2);

  auto gen_at = [&](double z) -> const CMat& {
    if (!z_const) gen = build_generator(kernels, cfg, grid, z, xpm_on);
    return gen;
  };
  auto mul = [&](const CMat& g, const CMat& x, CMat& out) {
    kern::cgemm(n2, n2, n2, cplx{1.0, 0.0}, g.data(), n2, x.data(), n2, cplx{}, out.data(), n2);
  };

  for (int s = 0; s < z_steps; ++s) {
    const double z = z0 + s * h;
    mul(gen_at(z), a, k1);
    kern::cxpay(sz, a.data(), cplx{h / 2.0, 0.0}, k1.data(), stage.data());
    mul(gen_at(z + h / 2.0), stage, k2);
    kern::cxpay(sz, a.data(), cplx{h / 2.0, 0.0}, k2.data(), stage.data());
    mul(gen_at(z + h / 2.0), stage, k3);
    kern::cxpay(sz, a.data(), cplx{h, 0.0}, k3.data(), stage.data());
    mul(gen_at(z + h), stage, k4);
    kern::caxpy(sz, cplx{h / 6.0, 0.0}, k1.data(), a.data());
    kern::caxpy(sz, cplx{h / 3.0, 0.0}, k2.data(), a.data());
    kern::caxpy(sz, cplx{h / 3.0, 0.0}, k3.data(), a.data());
    kern::caxpy(sz, cplx{h / 6.0, 0.0}, k4.data(), a.data());
  }

  RoundTripMatrix rt;
  rt.z_steps = z_steps;
  rt.segment_length = segment_length;
  rt.z0 = z0;
  rt.symplectic_defect = bogoliubov_defect(a);
  rt.u = std::move(a);
  if (rt.symplectic_defect > 1e-6)
    throw IntegrationAccuracyError(
        "round-trip integration symplectic defect " + std::to_string(rt.symplectic_defect) +
        " exceeds 1e-6; increase z_steps");
  return rt;
}

BoundaryMatrices make_boundaries(const RingConfig& cfg, const FrequencyGrid& grid,
                                 int channels) {
  if (channels < 1) throw std::invalid_argument("make_boundaries: channels must be >= 1");
  const int n = grid.n_points;
  BoundaryMatrices b;
  b.n_freq = n;
  b.channels = channels;
  b.t.resize(2 * n);
  b.r.resize(2 * n);
  b.gamma_full.resize(2 * n);
  b.kappa_full.resize(2 * n);
  b.e_full.resize(2 * n);
  b.gamma_seg.resize(2 * n);
  b.kappa_seg.resize(2 * n);
  b.e_seg.resize(2 * n);
  const double len = cfg.circumference;
  for (int half = 0; half < 2; ++half) {
    const ModeParams& m = half == 0 ? cfg.signal : cfg.idler;
    const double conj_sign = half == 0 ? 1.0 : -1.0;  // idler rows are daggered
    const double g_full = std::exp(-m.alpha * len / 2.0);
    const double k_full = std::sqrt(std::max(0.0, 1.0 - g_full * g_full));
    const double g_seg = std::exp(-m.alpha * len / (2.0 * channels));
    const double k_seg = std::sqrt(std::max(0.0, 1.0 - g_seg * g_seg));
    for (int k = 0; k < n; ++k) {
      const int idx = half * n + k;
      const double w = half == 0 ? grid.signal_freq(k) : grid.idler_freq(k);
      const double phase = (m.center_freq - m.resonance_freq) * m.round_trip_time +
                           (w - m.center_freq) * cfg.pump.round_trip_time;
      b.t[idx] = m.coupling_tau;
      b.r[idx] = conj_sign * iu * m.coupling_rho;
      b.gamma_full[idx] = g_full;
      b.kappa_full[idx] = conj_sign * iu * k_full;
      b.e_full[idx] = std::polar(1.0, conj_sign * phase);
      b.gamma_seg[idx] = g_seg;
      b.kappa_seg[idx] = conj_sign * iu * k_seg;
      b.e_seg[idx] = std::polar(1.0, conj_sign * phase / channels);
    }
  }
  return b;
}

namespace {

CMat invert_q(const CMat& q, double pump_energy) {
  using namespace ringsq::detail;
  Eigen::PartialPivLU<EigCMat> lu(emap(q));
  CMat inv(q.rows(), q.cols());
  emap(inv) = lu.inverse();
  // Infinity norm as the threshold estimator for loss of validity.
  double norm = 0.0;
  for (int r = 0; r < inv.rows(); ++r) {
    double row = 0.0;
    for (int c = 0; c < inv.cols(); ++c) row += std::abs(inv(r, c));
    norm = std::max(norm, row);
  }
  if (!(norm < 1e12))
    throw SingularQError(pump_energy,
                         "Q matrix is singular (above oscillation threshold) at pump energy " +
                             std::to_string(pump_energy * 1e12) + " pJ");
  return inv;
}

std::vector<cplx> inv_diag(const std::vector<cplx>& d) {
  std::vector<cplx> o(d.size());
  for (size_t i = 0; i < d.size(); ++i) o[i] = 1.0 / d[i];
  return o;
}

std::vector<cplx> mul_diag(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> o(a.size());
  for (size_t i = 0; i < a.size(); ++i) o[i] = a[i] * b[i];
  return o;
}

// Eq. 25 blocks from the full-round-trip boundary diagonals.
ScatteringMatrix assemble_single(const RoundTripMatrix& seg, const BoundaryMatrices& b,
                                 double pump_energy) {
  const int n2 = 2 * b.n_freq;
  ScatteringMatrix s;
  s.n_freq = b.n_freq;
  s.channels = 1;
  s.full = true;
  s.bounds = b;

  CMat q = seg.u;
  q.scale_rows(mul_diag(b.t, mul_diag(b.gamma_full, b.e_full)));
  q *= cplx{-1.0, 0.0};
  for (int d = 0; d < n2; ++d) q(d, d) += 1.0;
  const CMat qinv = invert_q(q, pump_energy);
  s.qinv = qinv;

  const auto t_inv = inv_diag(b.t);
  const auto g_inv = inv_diag(b.gamma_full);

  s.aa = qinv;
  s.aa.scale_rows(b.r);
  s.aa.scale_cols(b.r);
  for (int d = 0; d < n2; ++d) s.aa(d, d) += 1.0;
  s.aa.scale_rows(t_inv);

  CMat af = qinv;
  af.scale_rows(mul_diag(t_inv, b.r));
  af.scale_cols(mul_diag(b.kappa_full, b.t));
  s.af.push_back(std::move(af));

  CMat fa = qinv;
  for (int d = 0; d < n2; ++d) fa(d, d) -= 1.0;
  fa.scale_rows(mul_diag(t_inv, mul_diag(g_inv, b.kappa_full)));
  fa.scale_cols(b.r);
  s.fa.push_back(std::move(fa));

  CMat ff = qinv;
  ff.scale_rows(mul_diag(t_inv, b.kappa_full));
  ff.scale_cols(mul_diag(b.kappa_full, b.t));
  for (int d = 0; d < n2; ++d) ff(d, d) += 1.0;
  ff.scale_rows(g_inv);
  s.ff.push_back(std::move(ff));
  return s;
}

}  // namespace

ScatteringMatrix assemble_S_composed(const std::vector<RoundTripMatrix>& segs,
                                     const BoundaryMatrices& b, int channels, SBlocks policy,
                                     double pump_energy) {
  const int n2 = 2 * b.n_freq;
  const int m = channels;
  const auto ge = mul_diag(b.gamma_seg, b.e_seg);

  // W_l = Gamma_seg E_seg U_l; prefix V_l = W_l ... W_1; suffix_j = W_M ... W_{j+1}.
  std::vector<CMat> w(m);
  for (int l = 0; l < m; ++l) {
    w[l] = segs[l].u;
    w[l].scale_rows(ge);
  }
  std::vector<CMat> prefix(m);
  prefix[0] = w[0];
  for (int l = 1; l < m; ++l) prefix[l] = kern::matmul(w[l], prefix[l - 1]);
  std::vector<CMat> suffix(m);  // suffix[j] = W_M ... W_{j+2} applied to channel j (0-based)
  suffix[m - 1] = CMat::identity(n2);
  for (int j = m - 2; j >= 0; --j) suffix[j] = kern::matmul(suffix[j + 1], w[j + 1]);

  CMat q = prefix[m - 1];
  q.scale_rows(b.t);
  q *= cplx{-1.0, 0.0};
  for (int d = 0; d < n2; ++d) q(d, d) += 1.0;
  const CMat qinv = invert_q(q, pump_energy);

  ScatteringMatrix s;
  s.n_freq = b.n_freq;
  s.channels = m;
  s.full = policy == SBlocks::full;
  s.bounds = b;
  s.qinv = qinv;

  const CMat x = kern::matmul(prefix[m - 1], qinv);  // V_M Q^-1

  s.aa = x;
  s.aa.scale_rows(b.r);
  s.aa.scale_cols(b.r);
  for (int d = 0; d < n2; ++d) s.aa(d, d) += b.t[d].real();

  // S^af,(j) = R (X T + I) suffix_j K_seg
  CMat y = x;
  y.scale_cols(b.t);
  for (int d = 0; d < n2; ++d) y(d, d) += 1.0;
  s.af.resize(m);
  for (int j = 0; j < m; ++j) {
    CMat blk = kern::matmul(y, suffix[j]);
    blk.scale_rows(b.r);
    blk.scale_cols(b.kappa_seg);
    s.af[j] = std::move(blk);
  }

  if (policy == SBlocks::full) {
    const auto kg = mul_diag(b.kappa_seg, inv_diag(b.gamma_seg));
    std::vector<CMat> pl(m);  // V_l Q^-1
    for (int l = 0; l < m; ++l)
      pl[l] = (l == m - 1) ? x : kern::matmul(prefix[l], qinv);
    s.fa.resize(m);
    for (int l = 0; l < m; ++l) {
      CMat blk = pl[l];
      blk.scale_rows(kg);
      blk.scale_cols(b.r);
      s.fa[l] = std::move(blk);
    }
    s.ff.resize(size_t(m) * m);
    for (int l = 0; l < m; ++l) {
      // interior products su_{l,j} = W_l ... W_{j+1}
      CMat su = CMat::identity(n2);
      std::vector<CMat> su_store(l + 1);
      su_store[l] = su;
      for (int j = l - 1; j >= 0; --j) su_store[j] = kern::matmul(su_store[j + 1], w[j + 1]);
      CMat plt = pl[l];
      plt.scale_cols(b.t);
      for (int j = 0; j < m; ++j) {
        CMat blk = kern::matmul(plt, suffix[j]);
        if (j <= l) blk += su_store[j];
        blk.scale_rows(kg);
        blk.scale_cols(b.kappa_seg);
        if (j == l)
          for (int d = 0; d < n2; ++d) blk(d, d) += 1.0 / b.gamma_seg[d].real();
        s.ff[size_t(l) * m + j] = std::move(blk);
      }
    }
  }
  return s;
}

ScatteringMatrix assemble_S(const std::vector<RoundTripMatrix>& segments,
                            const BoundaryMatrices& bounds, int channels, SBlocks policy,
                            double pump_energy) {
  if (int(segments.size()) != channels)
    throw std::invalid_argument("assemble_S: need one U segment per phantom channel");
  if (channels == 1) return assemble_single(segments[0], bounds, pump_energy);
  return assemble_S_composed(segments, bounds, channels, policy, pump_energy);
}

CMat true_sub(const CMat& block, Sub which) {
  const int n = block.rows() / 2;
  switch (which) {
    case Sub::ss: return block.block(0, 0, n, n);
    case Sub::si: return block.block(0, n, n, n);
    case Sub::is: return block.block(n, 0, n, n).conjugate();
    case Sub::ii: return block.block(n, n, n, n).conjugate();
  }
  throw std::logic_error("bad sub-block");
}

CMat ScatteringMatrix::dense() const {
  if (!full) throw std::logic_error("dense(): scattering matrix lacks phantom rows");
  const int n2 = 2 * n_freq;
  const int np = (1 + channels) * n2;
  CMat d(np, np);
  d.set_block(0, 0, aa);
  for (int j = 0; j < channels; ++j) d.set_block(0, (1 + j) * n2, af[j]);
  for (int l = 0; l < channels; ++l) {
    d.set_block((1 + l) * n2, 0, fa[l]);
    for (int j = 0; j < channels; ++j) d.set_block((1 + l) * n2, (1 + j) * n2, ff_block(l, j));
  }
  return d;
}

double symplectic_defect(const ScatteringMatrix& s) {
  // Accumulated in extended precision: the row products reach ||S||^2 and the
  // cancellation down to O(1) would otherwise cost ~eps ||S||^2 of headroom.
  const CMat d = s.dense();
  const int np = d.rows();
  const int n2 = 2 * s.n_freq;
  double worst = 0.0;
  for (int r = 0; r < np; ++r) {
    for (int c = 0; c <= r; ++c) {
      long double acc_re = 0.0L, acc_im = 0.0L;
      const cplx* row_r = d.data() + size_t(r) * np;
      const cplx* row_c = d.data() + size_t(c) * np;
      for (int k = 0; k < np; ++k) {
        const long double sign = (k % n2) < s.n_freq ? 1.0L : -1.0L;
        const long double ar = row_r[k].real(), ai = row_r[k].imag();
        const long double br = row_c[k].real(), bi = row_c[k].imag();
        acc_re += sign * (ar * br + ai * bi);
        acc_im += sign * (ai * br - ar * bi);
      }
      if (r == c) acc_re -= (r % n2) < s.n_freq ? 1.0L : -1.0L;
      const double mag = std::hypot(double(acc_re), double(acc_im));
      worst = std::max(worst, mag);
    }
  }
  return worst;
}

SimPoint simulate_point(const RingConfig& cfg, const PumpPulseSpec& pulse,
                        const SimOptions& opt) {
  SimPoint p;
  p.cfg = cfg;
  if (!opt.spm) p.cfg.pump.gamma_spm = 0.0;
  if (!opt.xpm) {
    p.cfg.signal.gamma_xpm = 0.0;
    p.cfg.idler.gamma_xpm = 0.0;
  }
  p.rates = derive_rates(p.cfg);
  p.grid = build_grid(p.cfg, opt.grid_n, opt.span_fwhm * resonance_fwhm(p.cfg));
  p.pump = run_ikeda(pulse, p.cfg);
  if (p.pump.truncation_warning)
    p.warnings.push_back("pump window truncation: terminal/peak power " +
                         std::to_string(p.pump.terminal_ratio));
  p.kernels = build_kernels(p.pump);

  const int m = opt.channels;
  const double seg_len = p.cfg.circumference / m;
  std::vector<RoundTripMatrix> segs;
  segs.reserve(m);
  const bool z_const = (p.cfg.phase_mismatch -
                        p.cfg.freq_mismatch / p.cfg.pump.group_velocity) == 0.0;
  for (int l = 0; l < m; ++l) {
    if (l > 0 && z_const) {
      segs.push_back(segs.front());
      segs.back().z0 = l * seg_len;
      continue;
    }
    segs.push_back(integrate_roundtrip(p.kernels, p.cfg, p.grid, seg_len, l * seg_len,
                                       opt.z_steps, opt.xpm));
  }
  const BoundaryMatrices b = make_boundaries(p.cfg, p.grid, m);
  p.S = assemble_S(segs, b, m, opt.policy, pulse.energy);
  return p;
}

}  // namespace ringsq
