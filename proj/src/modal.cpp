#include "ringsq/modal.hpp"

#include <cmath>

#include "ringsq/detail/eigen_map.hpp"
#include "ringsq/errors.hpp"
#include "ringsq/kernels.hpp"

namespace ringsq::modal {

namespace {

std::vector<cplx> inv_diag(const std::vector<cplx>& d) {
  std::vector<cplx> o(d.size());
  for (size_t i = 0; i < d.size(); ++i) o[i] = 1.0 / d[i];
  return o;
}

}  // namespace

SandwichDecomposition sandwich_decompose(const ScatteringMatrix& s) {
  if (s.channels != 1)
    throw std::invalid_argument("sandwich_decompose: defined for a single phantom channel");
  if (!s.full || s.qinv.rows() == 0)
    throw std::invalid_argument("sandwich_decompose: needs the fully assembled S");
  const BoundaryMatrices& b = s.bounds;
  const int n2 = 2 * b.n_freq;

  SandwichDecomposition d;
  d.n.resize(n2);
  std::vector<cplx> u2aa(n2), u2af(n2), u1aa(n2), u1af(n2), u1ff(n2), u2ff(n2);
  for (int i = 0; i < n2; ++i) {
    const cplx r2 = b.r[i] * b.r[i];
    const cplx k2g2 = b.kappa_full[i] * b.kappa_full[i] / (b.gamma_full[i] * b.gamma_full[i]);
    d.n[i] = std::sqrt(-(r2 + k2g2));
    u2aa[i] = b.r[i] / d.n[i];
    u2af[i] = b.kappa_full[i] / (b.gamma_full[i] * d.n[i]);
    u2ff[i] = -u2aa[i];
    u1aa[i] = -b.r[i] / (b.gamma_full[i] * d.n[i]);
    u1af[i] = -b.kappa_full[i] * b.t[i] / (b.gamma_full[i] * d.n[i]);
    u1ff[i] = b.r[i] / (b.gamma_full[i] * d.n[i]);
  }

  // C^aa = Gamma^-1 T^-1 - n T^-1 Q^-1 Gamma n
  d.c_aa = s.qinv;
  std::vector<cplx> left(n2), right(n2);
  for (int i = 0; i < n2; ++i) {
    left[i] = -d.n[i] / b.t[i];
    right[i] = b.gamma_full[i] * d.n[i];
  }
  d.c_aa.scale_rows(left);
  d.c_aa.scale_cols(right);
  for (int i = 0; i < n2; ++i) d.c_aa(i, i) += 1.0 / (b.gamma_full[i] * b.t[i]);

  d.u2 = CMat(2 * n2, 2 * n2);
  d.u1 = CMat(2 * n2, 2 * n2);
  for (int i = 0; i < n2; ++i) {
    d.u2(i, i) = u2aa[i];
    d.u2(i, n2 + i) = u2af[i];
    d.u2(n2 + i, i) = u2af[i];
    d.u2(n2 + i, n2 + i) = u2ff[i];
    d.u1(i, i) = u1aa[i];
    d.u1(i, n2 + i) = u1af[i];
    d.u1(n2 + i, i) = u1af[i];
    d.u1(n2 + i, n2 + i) = u1ff[i];
  }

  // Reconstruction check against the assembled S, block by block.
  auto recon_block = [&](const std::vector<cplx>& l2, const std::vector<cplx>& l1,
                         const std::vector<cplx>& diag2, const std::vector<cplx>& diag1) {
    CMat m = d.c_aa;
    m.scale_rows(l2);
    m.scale_cols(l1);
    for (int i = 0; i < n2; ++i) m(i, i) += diag2[i] * diag1[i];
    return m;
  };
  double defect = 0.0;
  defect = std::max(defect, (recon_block(u2aa, u1aa, u2af, u1af) - s.aa).max_abs());
  defect = std::max(defect, (recon_block(u2aa, u1af, u2af, u1ff) - s.af[0]).max_abs());
  defect = std::max(defect, (recon_block(u2af, u1aa, u2ff, u1af) - s.fa[0]).max_abs());
  defect = std::max(defect, (recon_block(u2af, u1af, u2ff, u1ff) - s.ff_block(0, 0)).max_abs());
  d.reconstruction_defect = defect;
  if (defect > 1e-8)
    throw NumericalIntegrityError("sandwich reconstruction defect " + std::to_string(defect));
  return d;
}

namespace {

double symplectic_defect_2n(const CMat& c) {
  const int n2 = c.rows();
  const int n = n2 / 2;
  CMat cj = c;
  for (int r = 0; r < n2; ++r)
    for (int col = n; col < n2; ++col) cj(r, col) = -cj(r, col);
  CMat m = kern::matmul_adjoint(cj, c);
  for (int d0 = 0; d0 < n2; ++d0) m(d0, d0) -= d0 < n ? 1.0 : -1.0;
  return m.max_abs();
}

}  // namespace

SqueezerSpectrum squeezer_decompose(const CMat& c_aa) {
  using namespace ringsq::detail;
  const int n = c_aa.rows() / 2;
  const double defect = symplectic_defect_2n(c_aa);
  if (defect > 1e-6)
    throw NumericalIntegrityError("squeezer_decompose: input not symplectic, defect " +
                                  std::to_string(defect));

  const CMat c_ss = c_aa.block(0, 0, n, n);
  const CMat c_si = c_aa.block(0, n, n, n);
  const CMat c_ii_conj = c_aa.block(n, n, n, n);  // stored block is (C_ii)*

  Eigen::BDCSVD<EigCMat> svd(emap(c_si), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();

  SqueezerSpectrum out;
  out.r.resize(n);
  for (int l = 0; l < n; ++l) out.r[l] = std::asinh(sv(l));

  // P_s = U D with D fixing the leading nonzero entry of each column to be
  // real positive; Q_i^T = D* W^H follows so the product is unchanged.
  CMat u = from_eigen(svd.matrixU());
  CMat wconj(n, n);
  {
    EigCMat w = svd.matrixV();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) wconj(r, c) = std::conj(w(r, c));
  }
  for (int l = 0; l < n; ++l) {
    double colmax = 0.0;
    for (int r = 0; r < n; ++r) colmax = std::max(colmax, std::abs(u(r, l)));
    cplx lead{1.0, 0.0};
    for (int r = 0; r < n; ++r) {
      if (std::abs(u(r, l)) > 1e-12 * colmax) {
        lead = u(r, l) / std::abs(u(r, l));
        break;
      }
    }
    const cplx d = std::conj(lead);
    for (int r = 0; r < n; ++r) {
      u(r, l) *= d;
      wconj(r, l) *= std::conj(d);  // column of Q_i = W* D*
    }
  }
  out.p_s = std::move(u);
  out.q_i = std::move(wconj);

  std::vector<cplx> sech(n);
  for (int l = 0; l < n; ++l) sech[l] = 1.0 / std::cosh(out.r[l]);

  // Q_s = C_ss^H P_s cosh^-1; the stored lower-right block is P_i* cosh Q_i^T,
  // so P_i* = block conj(Q_i) cosh^-1.
  out.q_s = kern::matmul(c_ss.adjoint(), out.p_s);
  out.q_s.scale_cols(sech);
  CMat pi_conj = kern::matmul(c_ii_conj, out.q_i.conjugate());
  pi_conj.scale_cols(sech);
  out.p_i = pi_conj.conjugate();

  // Reconstruction: blkdiag(P_s, P_i*) [[cosh, sinh],[sinh, cosh]] blkdiag(Q_s, Q_i*)^H
  std::vector<cplx> ch(n), sh(n);
  for (int l = 0; l < n; ++l) {
    ch[l] = std::cosh(out.r[l]);
    sh[l] = std::sinh(out.r[l]);
  }
  CMat ps_ch = out.p_s, ps_sh = out.p_s, pic_ch = out.p_i.conjugate(), pic_sh = pic_ch;
  ps_ch.scale_cols(ch);
  ps_sh.scale_cols(sh);
  pic_ch.scale_cols(ch);
  pic_sh.scale_cols(sh);
  const CMat qs_h = out.q_s.adjoint();
  const CMat qic_h = out.q_i.conjugate().adjoint();
  double rec = 0.0;
  rec = std::max(rec, (kern::matmul(ps_ch, qs_h) - c_ss).max_abs());
  rec = std::max(rec, (kern::matmul(ps_sh, qic_h) - c_si).max_abs());
  rec = std::max(rec, (kern::matmul(pic_sh, qs_h) - c_aa.block(n, 0, n, n)).max_abs());
  rec = std::max(rec, (kern::matmul(pic_ch, qic_h) - c_ii_conj).max_abs());
  out.reconstruction_defect = rec;

  double s2 = 0.0, s4 = 0.0;
  for (int l = 0; l < n; ++l) {
    const double sh2 = sv(l) * sv(l);
    s2 += sh2;
    s4 += sh2 * sh2;
  }
  out.schmidt_number = s4 > 0.0 ? s2 * s2 / s4 : 1.0;
  out.spectral_purity = 1.0 / out.schmidt_number;
  return out;
}

std::vector<double> schmidt_singular_values(const CMat& s_si) {
  using namespace ringsq::detail;
  Eigen::BDCSVD<EigCMat> svd(emap(s_si));
  std::vector<double> sv(s_si.rows());
  for (int i = 0; i < s_si.rows(); ++i) sv[i] = svd.singularValues()(i);
  return sv;
}

double schmidt_number_from_singulars(const std::vector<double>& sv) {
  double s2 = 0.0, s4 = 0.0;
  for (double v : sv) {
    s2 += v * v;
    s4 += v * v * v * v;
  }
  return s4 > 0.0 ? s2 * s2 / s4 : 1.0;
}

TemporalMode temporal_schmidt_mode(const SqueezerSpectrum& spec, int which,
                                   const FrequencyGrid& grid) {
  const int n = grid.n_points;
  if (which < 0 || which >= n) throw std::invalid_argument("temporal mode index out of range");
  TemporalMode tm;
  tm.times.resize(n);
  tm.values.resize(n);
  const double dt = 2.0 * M_PI / (double(n) * grid.spacing);
  for (int j = 0; j < n; ++j) {
    tm.times[j] = j * dt;
    cplx acc{};
    for (int k = 0; k < n; ++k)
      acc += spec.p_s(k, which) * std::polar(1.0, -grid.offset(k) * tm.times[j]);
    tm.values[j] = acc / std::sqrt(double(n));
  }
  return tm;
}

double effective_squeezing(double r_c, double eta_escape) {
  return -0.5 * std::log(1.0 - eta_escape + eta_escape * std::exp(-2.0 * r_c));
}

}  // namespace ringsq::modal
