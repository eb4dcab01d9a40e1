#pragma once

#include <vector>

#include "ringsq/cmat.hpp"
#include "ringsq/config.hpp"
#include "ringsq/pair_solver.hpp"

// Decompositions of the scattering matrix into loss beam-splitters around a
// lossless squeezer, and of the squeezer into Schmidt modes.
namespace ringsq::modal {

struct SandwichDecomposition {
  CMat u1, u2;            // 4N x 4N symplectic-unitary beam-splitters
  CMat c_aa;              // 2N x 2N active block of C
  std::vector<cplx> n;    // the normalizer diagonal, length 2N
  double reconstruction_defect = 0.0;
};

// Closed-form S = U2 C U1 factorization. Defined for one phantom channel.
SandwichDecomposition sandwich_decompose(const ScatteringMatrix& s);

struct SqueezerSpectrum {
  CMat p_s, p_i, q_s, q_i;     // N x N unitaries
  std::vector<double> r;       // squeezing parameters, descending
  double schmidt_number = 1.0;
  double spectral_purity = 1.0;
  double reconstruction_defect = 0.0;

  double mean_photon_lossless() const {  // <n^c> = sum sinh^2 r_l
    double s = 0.0;
    for (double v : r) s += std::sinh(v) * std::sinh(v);
    return s;
  }
};

// C^aa = blkdiag(P_s, P_i*) (cosh R, sinh R; sinh R, cosh R) blkdiag(Q_s, Q_i*)^H
// via SVD of the si block. Column phases are fixed by making the leading
// nonzero entry of each P_s column real positive so degenerate spectra stay
// deterministic.
SqueezerSpectrum squeezer_decompose(const CMat& c_aa);

// Schmidt weights straight from the cross-mode block of S (any channel
// count); equals the squeezer spectrum up to the uniform escape-efficiency
// scale on sinh r.
std::vector<double> schmidt_singular_values(const CMat& s_si);
double schmidt_number_from_singulars(const std::vector<double>& sv);

struct TemporalMode {
  std::vector<double> times;  // s, conjugate grid of the signal frequencies
  std::vector<cplx> values;   // unit discrete L2 norm
};

// Fourier transform of the selected P_s column onto the conjugate time grid.
TemporalMode temporal_schmidt_mode(const SqueezerSpectrum& spec, int which,
                                   const FrequencyGrid& grid);

// Output squeezing parameter after the escape-efficiency beam-splitter.
double effective_squeezing(double r_c, double eta_escape);

}  // namespace ringsq::modal
