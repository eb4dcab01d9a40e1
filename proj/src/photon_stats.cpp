#include "ringsq/photon_stats.hpp"

#include <cmath>

#include "ringsq/errors.hpp"
#include "ringsq/kernels.hpp"
#include "ringsq/modal.hpp"

namespace ringsq::stats {

namespace {

// X = sum over bus+phantom blocks of B_si B_si^H (Hermitian PSD).
CMat pair_weight(const ScatteringMatrix& s, Sub which) {
  const int n = s.n_freq;
  CMat x(n, n);
  auto add = [&](const CMat& blk2n) {
    const CMat blk = true_sub(blk2n, which);
    const CMat bh = blk.adjoint();
    kern::cgemm(n, n, n, cplx{1.0, 0.0}, blk.data(), n, bh.data(), n, cplx{1.0, 0.0}, x.data(),
                n);
  };
  add(s.aa);
  for (const auto& af : s.af) add(af);
  return x;
}

double trace_real(const CMat& m) {
  double t = 0.0;
  for (int i = 0; i < m.rows(); ++i) t += m(i, i).real();
  return t;
}

double frob_sq(const CMat& m) {
  double t = 0.0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) t += std::norm(m(r, c));
  return t;
}

// <n_s n_i> - <n_s><n_i>: Tr[(S_si* S_ii^H + ...)(S_is S_ss^T + ...)]
double pair_trace(const ScatteringMatrix& s) {
  const int n = s.n_freq;
  auto accumulate = [&](Sub first, Sub second, bool conj_first, bool transpose_second) {
    CMat acc(n, n);
    auto add = [&](const CMat& blk2n) {
      CMat a = true_sub(blk2n, first);
      if (conj_first) a = a.conjugate();
      CMat b = true_sub(blk2n, second);
      b = transpose_second ? b.transpose() : b.adjoint();
      kern::cgemm(n, n, n, cplx{1.0, 0.0}, a.data(), n, b.data(), n, cplx{1.0, 0.0},
                  acc.data(), n);
    };
    add(s.aa);
    for (const auto& af : s.af) add(af);
    return acc;
  };
  // A = S_si^* S_ii^H summed over ports, B = S_is S_ss^T summed over ports
  const CMat a = accumulate(Sub::si, Sub::ii, true, false);
  const CMat b = accumulate(Sub::is, Sub::ss, false, true);
  const CMat ab = kern::matmul(a, b);
  return trace_real(ab);
}

}  // namespace

double mean_photon_signal(const ScatteringMatrix& s) { return trace_real(pair_weight(s, Sub::si)); }

double mean_photon_idler(const ScatteringMatrix& s) { return trace_real(pair_weight(s, Sub::is)); }

double g2_self(const ScatteringMatrix& s) {
  const CMat x = pair_weight(s, Sub::si);
  const double n = trace_real(x);
  if (!(n > 0.0)) throw SimulationError("g2_self undefined at zero photon number");
  return 1.0 + frob_sq(x) / (n * n);
}

double g2_cross(const ScatteringMatrix& s) {
  const double ns = mean_photon_signal(s);
  const double ni = mean_photon_idler(s);
  if (!(ns > 0.0) || !(ni > 0.0))
    throw SimulationError("g2_cross undefined at zero photon number");
  return 1.0 + pair_trace(s) / (ns * ni);
}

double heralding(const ScatteringMatrix& s) {
  const double ns = mean_photon_signal(s);
  if (!(ns > 0.0)) throw SimulationError("heralding undefined at zero photon number");
  const double ni = mean_photon_idler(s);
  return (ns * ni + pair_trace(s)) / ns;
}

PhotonStatistics photon_statistics(const ScatteringMatrix& s) {
  PhotonStatistics p;
  const CMat x = pair_weight(s, Sub::si);
  p.n_s = trace_real(x);
  p.n_i = mean_photon_idler(s);
  if (p.n_s > 0.0 && p.n_i > 0.0) {
    p.g2_s = 1.0 + frob_sq(x) / (p.n_s * p.n_s);
    const double pt = pair_trace(s);
    p.g2_si = 1.0 + pt / (p.n_s * p.n_i);
    p.heralding_i = (p.n_s * p.n_i + pt) / p.n_s;
    const auto sv = modal::schmidt_singular_values(true_sub(s.aa, Sub::si));
    p.schmidt_K = modal::schmidt_number_from_singulars(sv);
    p.purity_P = 1.0 / p.schmidt_K;
  }
  return p;
}

double simplified_sfwm_mean(const std::vector<double>& c, double energy) {
  double n = 0.0;
  for (double cl : c) {
    const double s = std::sinh(cl * energy);
    n += s * s;
  }
  return n;
}

}  // namespace ringsq::stats
