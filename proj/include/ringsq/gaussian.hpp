#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ringsq/cmat.hpp"
#include "ringsq/pair_solver.hpp"

// Gaussian quantum optics layer: complex symplectic form of S, covariance
// evolution, threshold-detector probabilities, Williamson and Bloch-Messiah
// decompositions of the bus-restricted state.
namespace ringsq::gauss {

// Operator ordering of the complex symplectic matrix and covariances:
// [a_s, a_i, f_s^(1), f_i^(1), ..., | creation counterparts]. P = (1+M)*2N.
struct ComplexSymplectic {
  int n_freq = 0;
  int channels = 1;
  CMat m;  // 2P x 2P

  int ports() const { return (1 + channels) * 2 * n_freq; }
};

// Rearranges the (full) scattering matrix into the annihilation/creation
// layout; throws if the symplectic defect exceeds 1e-8.
ComplexSymplectic build_symplectic(const ScatteringMatrix& s);

struct CovarianceState {
  int n_modes = 0;  // P
  CMat sigma;       // 2P x 2P complex Hermitian, vacuum = I
};

CovarianceState vacuum_covariance(const ComplexSymplectic& m);

// Bus-restricted vacuum covariance (modes [a_s, a_i]) computed from the bus
// rows of S alone; works for any channel count and the bus_row policy.
CovarianceState bus_vacuum_covariance(const ScatteringMatrix& s);

// Modes are indexed 0..P-1 in the covariance ordering. For the bus-restricted
// state: 0..N-1 signal, N..2N-1 idler.
std::vector<int> signal_ports(int n_freq);
std::vector<int> idler_ports(int n_freq);

// Probability that threshold detectors on `subset` all stay silent,
// det[(I + sigma_S)/2]^{-1/2}, evaluated in log space.
double p_no_click(const CovarianceState& state, const std::vector<int>& subset);

struct ClickProbabilities {
  double p_s = 0.0, p_i = 0.0, p_si = 0.0;
};

ClickProbabilities click_probabilities(const CovarianceState& state,
                                       const std::vector<int>& s_ports,
                                       const std::vector<int>& i_ports);

struct WilliamsonResult {
  Eigen::VectorXd nu;          // symplectic eigenvalues, by Bloch-Messiah mode order
  Eigen::MatrixXd s_w;         // V = S_w D_th S_w^T
  Eigen::MatrixXd o_l, o_r;    // S_w = O_l Lambda O_r
  Eigen::VectorXd r;           // Lambda = diag(e^r, e^-r), descending
  Eigen::VectorXd sigma_w_diag;  // diag of O_l^T V O_l
  std::vector<double> squeezing_db;      // per mode,, -10 log10 of the smaller variance
  std::vector<double> antisqueezing_db;  // per mode, +10 log10 of the larger variance
  double first_squeezing_db = 0.0;       // -10 log10(min diag)
  double first_antisqueezing_db = 0.0;   // +10 log10(max diag)
  double state_purity = 1.0;             // (V_sq V_asq)^{-1/2} of the first mode
  double williamson_defect = 0.0;
  double bloch_messiah_defect = 0.0;
};

// Williamson + Bloch-Messiah of the real covariance in the quadrature
// ordering [x..., p...] with Omega = ((0, I), (-I, 0)).
WilliamsonResult williamson(const CovarianceState& bus_state);

double state_purity(const WilliamsonResult& w);

// Real quadrature covariance of the given state (unit vacuum variance).
Eigen::MatrixXd real_covariance(const CovarianceState& state);

}  // namespace ringsq::gauss
