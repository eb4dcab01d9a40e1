#pragma once

#include <vector>

#include "ringsq/pair_solver.hpp"

// Ensemble photon statistics from the scattering-matrix blocks. All traces
// generalize over phantom channels by summing the S^af,(l) contributions.
namespace ringsq::stats {

struct PhotonStatistics {
  double n_s = 0.0;
  double n_i = 0.0;
  double g2_s = 0.0;       // normalized self-correlation (unheralded g2)
  double g2_si = 0.0;      // normalized cross-correlation
  double heralding_i = 0.0;  // <n_s n_i> / <n_s>
  double schmidt_K = 1.0;
  double purity_P = 1.0;
};

double mean_photon_signal(const ScatteringMatrix& s);
double mean_photon_idler(const ScatteringMatrix& s);
double g2_self(const ScatteringMatrix& s);    // throws on zero photon number
double g2_cross(const ScatteringMatrix& s);   // throws on zero photon numbers
double heralding(const ScatteringMatrix& s);

// Everything in one pass; correlation fields are 0 at zero photon number.
PhotonStatistics photon_statistics(const ScatteringMatrix& s);

// <n^c>(E) of the simplified SFWM model with per-mode slopes c_l = r_l / E
// fitted from one low-gain run.
double simplified_sfwm_mean(const std::vector<double>& c, double energy);

}  // namespace ringsq::stats
