#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringsq/config.hpp"
#include "ringsq/pair_solver.hpp"
#include "ringsq/photon_stats.hpp"

// Energy/detuning sweeps and the detuning optimizer over the full pipeline.
namespace ringsq::sweep {

enum class Objective { photon_number, purity };

struct Toggles {
  bool spm = true;
  bool xpm = true;  // SFWM is always on
};

struct SweepSpec {
  std::vector<double> energies;   // J, nonempty
  std::vector<double> detunings;  // rad/s; ignored when auto_optimal
  bool auto_optimal = false;      // track the optimal detuning per energy
  Objective auto_objective = Objective::purity;
  double bracket_lo = 0.0, bracket_hi = 0.0;  // rad/s, for auto_optimal
  Toggles toggles;
  std::vector<double> alpha_overrides;  // 1/m, applied to all modes; empty = config loss
  bool with_williamson = false;
  int threads = 0;  // 0: hardware concurrency
};

struct SweepRecord {
  double energy = 0.0;
  double detuning = 0.0;
  double alpha = 0.0;
  stats::PhotonStatistics photon;
  double squeezing_db = 0.0;
  double antisqueezing_db = 0.0;
  double state_purity = 1.0;
  double nu_max = 1.0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by (alpha, energy, detuning)
  double optimum_detuning_n = 0.0;   // filled in auto_optimal mode
  double optimum_detuning_p = 0.0;
};

// One full pipeline evaluation. Applies the toggles and the optional loss
// override on top of cfg, then pump -> kernels -> U -> S -> statistics.
SweepRecord evaluate_point(const RingConfig& cfg, const PumpPulseSpec& base_pulse,
                           const SimOptions& opt, double energy, double detuning,
                           std::optional<double> alpha_override, const Toggles& toggles,
                           bool with_williamson);

SweepResult run_sweep(const SweepSpec& spec, const RingConfig& cfg,
                      const PumpPulseSpec& base_pulse, const SimOptions& opt);

struct DetuningOptimum {
  double detuning = 0.0;
  double objective = 0.0;
  bool pinned_to_edge = false;
  bool flat = false;
  int evaluations = 0;
  std::vector<std::pair<double, double>> coarse_scan;  // (detuning, objective)
};

// 17-point coarse scan of [lo, hi] followed by golden-section refinement to
// `tol` (default 2 pi * 5 MHz), total evaluation budget <= 40. A flat
// objective reports detuning 0 by the tie-break rule; an optimum on the
// bracket edge is returned flagged.
DetuningOptimum find_optimal_detuning(Objective objective, double energy,
                                      const RingConfig& cfg, const PumpPulseSpec& base_pulse,
                                      const SimOptions& opt, double lo, double hi,
                                      const Toggles& toggles = {},
                                      std::optional<double> alpha_override = std::nullopt,
                                      double tol = 2.0 * M_PI * 5e6, int budget = 40);

}  // namespace ringsq::sweep
