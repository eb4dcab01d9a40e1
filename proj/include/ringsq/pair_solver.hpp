#pragma once

#include <vector>

#include "ringsq/cmat.hpp"
#include "ringsq/config.hpp"
#include "ringsq/pump.hpp"

namespace ringsq {

// State vector layout throughout: [a_s(w_s,0..N-1); a_i^dag(w_i,0..N-1)], so
// every 2N matrix has the signal block first and the conjugated idler block
// second, and the Bogoliubov metric is J = diag(I_N, -I_N).

// i * ((G, F), (-F^H, -H^H)) evaluated at position z inside the ring.
CMat build_generator(const PumpKernels& kernels, const RingConfig& cfg,
                     const FrequencyGrid& grid, double z, bool xpm_on = true);

struct RoundTripMatrix {
  CMat u;
  int z_steps = 0;
  double segment_length = 0.0;
  double z0 = 0.0;
  double symplectic_defect = 0.0;  // max-abs of U J U^H - J
};

// Fixed-step RK4 on dA/dz = generator(z) A over [z0, z0+segment_length].
// Throws IntegrationAccuracyError if the symplectic defect exceeds 1e-6.
RoundTripMatrix integrate_roundtrip(const PumpKernels& kernels, const RingConfig& cfg,
                                    const FrequencyGrid& grid, double segment_length,
                                    double z0, int z_steps, bool xpm_on = true);

// Coupler/phantom/phase diagonals of the boundary conditions, stored as
// length-2N diagonals. For M phantom channels the per-segment quantities are
// gamma_seg = e^{-alpha L / 2M}, kappa_seg = sqrt(1 - gamma_seg^2) and the
// accumulated phase split as E^{1/M}.
struct BoundaryMatrices {
  int n_freq = 0;
  int channels = 1;
  std::vector<cplx> t, r;                 // bus coupler
  std::vector<cplx> gamma_full, kappa_full, e_full;
  std::vector<cplx> gamma_seg, kappa_seg, e_seg;
};

BoundaryMatrices make_boundaries(const RingConfig& cfg, const FrequencyGrid& grid,
                                 int channels);

enum class SBlocks { bus_row, full };  // bus_row: only S^aa and S^af,(l)

struct ScatteringMatrix {
  int n_freq = 0;
  int channels = 1;
  bool full = false;
  CMat aa;               // 2N x 2N
  std::vector<CMat> af;  // channels entries
  std::vector<CMat> fa;  // filled when full
  std::vector<CMat> ff;  // channels*channels entries, row-major, when full
  CMat qinv;             // retained for the sandwich decomposition
  BoundaryMatrices bounds;

  const CMat& ff_block(int l, int j) const { return ff[size_t(l) * channels + j]; }
  int total_ports() const { return (1 + channels) * 2 * n_freq; }

  // Assembles the whole (1+M)2N square matrix; only sensible for small M.
  CMat dense() const;
};

// Closed-form Eq.-25 assembly at M = 1; per-segment composition for M > 1
// (which reduces to the former, exercised in tests). `pump_energy` is only
// used to annotate the above-threshold error.
ScatteringMatrix assemble_S(const std::vector<RoundTripMatrix>& segments,
                            const BoundaryMatrices& bounds, int channels,
                            SBlocks policy = SBlocks::full,
                            double pump_energy = 0.0);

// The per-segment composition (the M > 1 path) with the loop closed through
// the bus coupler; exposed so tests can verify its exact reduction to the
// closed form at M = 1.
ScatteringMatrix assemble_S_composed(const std::vector<RoundTripMatrix>& segments,
                                     const BoundaryMatrices& bounds, int channels,
                                     SBlocks policy = SBlocks::full,
                                     double pump_energy = 0.0);

enum class Sub { ss, si, is, ii };

// The paper-layout sub-block of a 2N block with the conjugation of the lower
// rows undone, i.e. the true S_uv. Needed by all Appendix-C traces.
CMat true_sub(const CMat& block, Sub which);

// max-abs defect of S J S^H = J over all ports.
double symplectic_defect(const ScatteringMatrix& s);

// Convenience pipeline: pump -> kernels -> U segments -> S.
struct SimOptions {
  int grid_n = 201;
  double span_fwhm = 32.0;
  int z_steps = 64;
  int channels = 1;
  bool spm = true;
  bool xpm = true;
  SBlocks policy = SBlocks::full;
};

struct SimPoint {
  RingConfig cfg;
  FrequencyGrid grid;
  PumpField pump;
  PumpKernels kernels;
  ScatteringMatrix S;
  DerivedRates rates;
  std::vector<std::string> warnings;
};

SimPoint simulate_point(const RingConfig& cfg, const PumpPulseSpec& pulse,
                        const SimOptions& opt);

}  // namespace ringsq
