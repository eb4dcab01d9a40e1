#include "ringsq/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ringsq/detail/eigen_map.hpp"
#include "ringsq/errors.hpp"
#include "ringsq/kernels.hpp"

namespace ringsq::gauss {

namespace {

// Places the true (unconjugated) sub-blocks of a 2N paired block into the
// annihilation/creation layout. Rows/cols: mode u of output waveguide wo,
// mode v of input waveguide wi.
struct Layout {
  int n = 0, channels = 0;
  int ann(int waveguide, bool idler, int k) const {
    return (waveguide * 2 + (idler ? 1 : 0)) * n + k;
  }
  int cre(int waveguide, bool idler, int k) const {
    return (1 + channels) * 2 * n + ann(waveguide, idler, k);
  }
};

}  // namespace

ComplexSymplectic build_symplectic(const ScatteringMatrix& s) {
  if (!s.full) throw std::invalid_argument("build_symplectic: needs the fully assembled S");
  const int n = s.n_freq;
  const int m = s.channels;
  const Layout lay{n, m};
  const int p = (1 + m) * 2 * n;
  ComplexSymplectic cs;
  cs.n_freq = n;
  cs.channels = m;
  cs.m = CMat(2 * p, 2 * p);

  auto place = [&](const CMat& blk2n, int wo, int wi) {
    const CMat bss = true_sub(blk2n, Sub::ss);
    const CMat bsi = true_sub(blk2n, Sub::si);
    const CMat bis = true_sub(blk2n, Sub::is);
    const CMat bii = true_sub(blk2n, Sub::ii);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        // a_u^out = B_ss a_s^in + B_si a_i^in+  (signal row)
        cs.m(lay.ann(wo, false, r), lay.ann(wi, false, c)) = bss(r, c);
        cs.m(lay.ann(wo, false, r), lay.cre(wi, true, c)) = bsi(r, c);
        // a_i^out = B_ii a_i^in + B_is a_s^in+  (conjugate of the stored row)
        cs.m(lay.ann(wo, true, r), lay.ann(wi, true, c)) = bii(r, c);
        cs.m(lay.ann(wo, true, r), lay.cre(wi, false, c)) = bis(r, c);
        // creation rows: mirrored conjugates
        cs.m(lay.cre(wo, false, r), lay.cre(wi, false, c)) = std::conj(bss(r, c));
        cs.m(lay.cre(wo, false, r), lay.ann(wi, true, c)) = std::conj(bsi(r, c));
        cs.m(lay.cre(wo, true, r), lay.cre(wi, true, c)) = std::conj(bii(r, c));
        cs.m(lay.cre(wo, true, r), lay.ann(wi, false, c)) = std::conj(bis(r, c));
      }
    }
  };

  place(s.aa, 0, 0);
  for (int j = 0; j < m; ++j) place(s.af[j], 0, 1 + j);
  for (int l = 0; l < m; ++l) {
    place(s.fa[l], 1 + l, 0);
    for (int j = 0; j < m; ++j) place(s.ff_block(l, j), 1 + l, 1 + j);
  }

  // M K M^H = K with K = diag(I_P, -I_P)
  CMat mk = cs.m;
  for (int r = 0; r < 2 * p; ++r)
    for (int c = p; c < 2 * p; ++c) mk(r, c) = -mk(r, c);
  CMat prod = kern::matmul_adjoint(mk, cs.m);
  for (int d = 0; d < 2 * p; ++d) prod(d, d) -= d < p ? 1.0 : -1.0;
  const double defect = prod.max_abs();
  if (defect > 1e-8)
    throw NumericalIntegrityError("complex symplectic defect " + std::to_string(defect));
  return cs;
}

CovarianceState vacuum_covariance(const ComplexSymplectic& m) {
  CovarianceState st;
  st.n_modes = m.ports();
  st.sigma = kern::matmul_adjoint(m.m, m.m);
  return st;
}

CovarianceState bus_vacuum_covariance(const ScatteringMatrix& s) {
  const int n = s.n_freq;
  const int m = s.channels;
  const int rows = 4 * n;  // [a_s, a_i | a_s+, a_i+]
  CovarianceState st;
  st.n_modes = 2 * n;
  st.sigma = CMat(rows, rows);

  // sigma = sum over input waveguides g of R_g R_g^H, where R_g is the bus
  // row slab over the 4N columns [q_s, q_i | q_s+, q_i+] of waveguide g.
  CMat slab(rows, rows);
  auto accumulate = [&](const CMat& blk2n) {
    slab.set_zero();
    const CMat bss = true_sub(blk2n, Sub::ss);
    const CMat bsi = true_sub(blk2n, Sub::si);
    const CMat bis = true_sub(blk2n, Sub::is);
    const CMat bii = true_sub(blk2n, Sub::ii);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        slab(r, c) = bss(r, c);                                    // a_s <- q_s
        slab(r, 3 * n + c) = bsi(r, c);                            // a_s <- q_i+
        slab(n + r, n + c) = bii(r, c);                            // a_i <- q_i
        slab(n + r, 2 * n + c) = bis(r, c);                        // a_i <- q_s+
        slab(2 * n + r, 2 * n + c) = std::conj(bss(r, c));         // a_s+ <- q_s+
        slab(2 * n + r, n + c) = std::conj(bsi(r, c));             // a_s+ <- q_i
        slab(3 * n + r, 3 * n + c) = std::conj(bii(r, c));         // a_i+ <- q_i+
        slab(3 * n + r, c) = std::conj(bis(r, c));                 // a_i+ <- q_s
      }
    }
    const CMat sh = slab.adjoint();
    kern::cgemm(rows, rows, rows, cplx{1.0, 0.0}, slab.data(), rows, sh.data(), rows,
                cplx{1.0, 0.0}, st.sigma.data(), rows);
  };
  accumulate(s.aa);
  for (int j = 0; j < m; ++j) accumulate(s.af[j]);
  return st;
}

std::vector<int> signal_ports(int n_freq) {
  std::vector<int> p(n_freq);
  for (int i = 0; i < n_freq; ++i) p[i] = i;
  return p;
}

std::vector<int> idler_ports(int n_freq) {
  std::vector<int> p(n_freq);
  for (int i = 0; i < n_freq; ++i) p[i] = n_freq + i;
  return p;
}

namespace {

// log det[(I + sigma_S)/2] with the restriction to `subset` modes (plus their
// creation rows), eigen-floored at zero.
double log_det_half(const CovarianceState& state, const std::vector<int>& subset) {
  const int p = state.n_modes;
  const int k = int(subset.size());
  Eigen::MatrixXcd red(2 * k, 2 * k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      red(r, c) = state.sigma(subset[r], subset[c]);
      red(r, k + c) = state.sigma(subset[r], p + subset[c]);
      red(k + r, c) = state.sigma(p + subset[r], subset[c]);
      red(k + r, k + c) = state.sigma(p + subset[r], p + subset[c]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(red, Eigen::EigenvaluesOnly);
  double logdet = 0.0;
  for (int i = 0; i < 2 * k; ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < -1e-8 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
      throw NumericalIntegrityError("reduced covariance not positive semidefinite");
    lam = std::max(lam, 0.0);
    logdet += std::log((1.0 + lam) / 2.0);
  }
  return logdet;
}

}  // namespace

double p_no_click(const CovarianceState& state, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("p_no_click: empty subset");
  return std::exp(-0.5 * log_det_half(state, subset));
}

ClickProbabilities click_probabilities(const CovarianceState& state,
                                       const std::vector<int>& s_ports,
                                       const std::vector<int>& i_ports) {
  for (int sp : s_ports)
    for (int ip : i_ports)
      if (sp == ip) throw std::invalid_argument("click_probabilities: overlapping port sets");
  const double off_s = p_no_click(state, s_ports);
  const double off_i = p_no_click(state, i_ports);
  std::vector<int> both = s_ports;
  both.insert(both.end(), i_ports.begin(), i_ports.end());
  const double off_si = p_no_click(state, both);
  ClickProbabilities c;
  c.p_s = 1.0 - off_s;
  c.p_i = 1.0 - off_i;
  c.p_si = 1.0 - off_s - off_i + off_si;
  return c;
}

Eigen::MatrixXd real_covariance(const CovarianceState& state) {
  const int p = state.n_modes;
  // R = (1/sqrt2) ((I, I), (-iI, iI)) over [ann; cre]; V = R sigma R^H.
  Eigen::MatrixXcd sig(2 * p, 2 * p);
  for (int r = 0; r < 2 * p; ++r)
    for (int c = 0; c < 2 * p; ++c) sig(r, c) = state.sigma(r, c);
  Eigen::MatrixXcd rmat = Eigen::MatrixXcd::Zero(2 * p, 2 * p);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < p; ++i) {
    rmat(i, i) = s;
    rmat(i, p + i) = s;
    rmat(p + i, i) = cplx{0.0, -s};
    rmat(p + i, p + i) = cplx{0.0, s};
  }
  const Eigen::MatrixXcd v = rmat * sig * rmat.adjoint();
  Eigen::MatrixXd vr = v.real();
  return 0.5 * (vr + vr.transpose());
}

namespace {

Eigen::MatrixXd omega_form(int n) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    o(i, n + i) = 1.0;
    o(n + i, i) = -1.0;
  }
  return o;
}

}  // namespace

WilliamsonResult williamson(const CovarianceState& bus_state) {
  const Eigen::MatrixXd v = real_covariance(bus_state);
  const int nmodes = bus_state.n_modes;
  const int dim = 2 * nmodes;
  const Eigen::MatrixXd omega = omega_form(nmodes);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NumericalIntegrityError("covariance not positive definite");
  const Eigen::MatrixXd sqrt_v =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd isqrt_v = es.eigenvectors() *
                                  es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                  es.eigenvectors().transpose();

  Eigen::MatrixXd r1 = isqrt_v * omega * isqrt_v;
  r1 = 0.5 * (r1 - r1.transpose().eval());  // exact antisymmetry
  Eigen::RealSchur<Eigen::MatrixXd> schur(r1);
  Eigen::MatrixXd t = schur.matrixT();
  Eigen::MatrixXd k = schur.matrixU();

  // 2x2 blocks ((0, lam), (-lam, 0)); enforce lam > 0 by swapping the pair.
  std::vector<double> lam(nmodes);
  for (int j = 0; j < nmodes; ++j) {
    double l = t(2 * j, 2 * j + 1);
    if (l < 0.0) {
      k.col(2 * j).swap(k.col(2 * j + 1));
      l = -l;
    }
    lam[j] = l;
  }
  // sort by nu = 1/lam descending => lam ascending
  std::vector<int> order(nmodes);
  for (int j = 0; j < nmodes; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] < lam[b]; });

  WilliamsonResult w;
  w.nu.resize(nmodes);
  w.s_w.resize(dim, dim);
  for (int j = 0; j < nmodes; ++j) {
    const int src = order[j];
    const double sl = std::sqrt(lam[src]);
    w.nu(j) = 1.0 / lam[src];
    w.s_w.col(j) = sqrt_v * k.col(2 * src) * sl;
    w.s_w.col(nmodes + j) = sqrt_v * k.col(2 * src + 1) * sl;
  }
  // Fix the overall sign convention so S_w Omega S_w^T = +Omega.
  {
    const Eigen::MatrixXd form = w.s_w * omega * w.s_w.transpose();
    double diag_up = 0.0;
    for (int j = 0; j < nmodes; ++j) diag_up += form(j, nmodes + j);
    if (diag_up < 0.0)
      for (int j = 0; j < nmodes; ++j) w.s_w.col(nmodes + j) *= -1.0;
  }

  for (int j = 0; j < nmodes; ++j)
    if (w.nu(j) < 1.0 - 1e-8)
      throw NumericalIntegrityError("unphysical state: symplectic eigenvalue " +
                                    std::to_string(w.nu(j)) + " < 1");

  Eigen::VectorXd dth(dim);
  for (int j = 0; j < nmodes; ++j) dth(j) = dth(nmodes + j) = w.nu(j);
  w.williamson_defect =
      (v - w.s_w * dth.asDiagonal() * w.s_w.transpose()).cwiseAbs().maxCoeff();

  // Bloch-Messiah of S_w through its SVD: P_sym = U S U^T, O = U V^T.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(w.s_w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::VectorXd& sv = svd.singularValues();

  // Build the orthogonal symplectic O_l = [v_1..v_n | -Omega v_1..-Omega v_n]
  // by a symplectic Gram-Schmidt over the singular-vector columns, largest
  // singular value first. In degenerate clusters (r ~ 0) a candidate can fall
  // into the span of already-accepted pairs; such columns are skipped and the
  // next one takes their place.
  w.o_l.resize(dim, dim);
  w.r.resize(nmodes);
  const Eigen::MatrixXd p_sym = u * sv.asDiagonal() * u.transpose();
  int accepted = 0;
  for (int cand = 0; cand < dim && accepted < nmodes; ++cand) {
    Eigen::VectorXd vj = u.col(cand);
    for (int q = 0; q < accepted; ++q) {
      vj -= w.o_l.col(q).dot(vj) * w.o_l.col(q);
      vj -= w.o_l.col(nmodes + q).dot(vj) * w.o_l.col(nmodes + q);
    }
    const double norm = vj.norm();
    if (norm < 1e-6) continue;
    vj /= norm;
    w.o_l.col(accepted) = vj;
    w.o_l.col(nmodes + accepted) = -omega * vj;
    w.r(accepted) = 0.5 * std::log(vj.dot(p_sym * p_sym * vj));
    ++accepted;
  }
  if (accepted < nmodes)
    throw NumericalIntegrityError("bloch-messiah basis degenerated");

  Eigen::VectorXd lam_diag(dim);
  for (int j = 0; j < nmodes; ++j) {
    lam_diag(j) = std::exp(w.r(j));
    lam_diag(nmodes + j) = std::exp(-w.r(j));
  }
  w.o_r = lam_diag.cwiseInverse().asDiagonal() * w.o_l.transpose() * w.s_w;
  // S_w = O_l Lambda O_r holds by construction; the meaningful residual is
  // how far O_r is from orthogonal.
  w.bloch_messiah_defect =
      (w.o_r * w.o_r.transpose() - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();

  const Eigen::MatrixXd sigma_w = w.o_l.transpose() * v * w.o_l;
  w.sigma_w_diag = sigma_w.diagonal();
  w.squeezing_db.resize(nmodes);
  w.antisqueezing_db.resize(nmodes);
  for (int j = 0; j < nmodes; ++j) {
    const double a = w.sigma_w_diag(j);
    const double b = w.sigma_w_diag(nmodes + j);
    w.squeezing_db[j] = -10.0 * std::log10(std::min(a, b));
    w.antisqueezing_db[j] = 10.0 * std::log10(std::max(a, b));
  }
  const double vmin = w.sigma_w_diag.minCoeff();
  const double vmax = w.sigma_w_diag.maxCoeff();
  w.first_squeezing_db = -10.0 * std::log10(vmin);
  w.first_antisqueezing_db = 10.0 * std::log10(vmax);
  // State purity of the first Williamson mode: the quadrature pair of the
  // mode holding the largest variance (for a thermal-only mode both
  // variances are nu, giving 1/nu).
  int j_star = 0;
  double best = 0.0;
  for (int j = 0; j < nmodes; ++j) {
    const double m = std::max(w.sigma_w_diag(j), w.sigma_w_diag(nmodes + j));
    if (m > best) {
      best = m;
      j_star = j;
    }
  }
  const double v_a = w.sigma_w_diag(j_star);
  const double v_b = w.sigma_w_diag(nmodes + j_star);
  w.state_purity = 1.0 / std::sqrt(v_a * v_b);
  return w;
}

double state_purity(const WilliamsonResult& w) { return w.state_purity; }

}  // namespace ringsq::gauss
