#include "ringsq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ringsq/errors.hpp"
#include "ringsq/gaussian.hpp"

namespace ringsq::sweep {

SweepRecord evaluate_point(const RingConfig& cfg, const PumpPulseSpec& base_pulse,
                           const SimOptions& opt, double energy, double detuning,
                           std::optional<double> alpha_override, const Toggles& toggles,
                           bool with_williamson) {
  SweepRecord rec;
  rec.energy = energy;
  rec.detuning = detuning;
  RingConfig c = cfg;
  if (alpha_override) {
    c.pump.alpha = c.signal.alpha = c.idler.alpha = *alpha_override;
  }
  rec.alpha = c.signal.alpha;
  PumpPulseSpec pulse = base_pulse;
  pulse.energy = energy;
  pulse.detuning = detuning;
  SimOptions o = opt;
  o.spm = toggles.spm;
  o.xpm = toggles.xpm;
  o.policy = SBlocks::bus_row;
  try {
    const SimPoint pt = simulate_point(c, pulse, o);
    rec.photon = stats::photon_statistics(pt.S);
    if (with_williamson) {
      const auto cov = gauss::bus_vacuum_covariance(pt.S);
      const auto w = gauss::williamson(cov);
      rec.squeezing_db = w.first_squeezing_db;
      rec.antisqueezing_db = w.first_antisqueezing_db;
      rec.state_purity = w.state_purity;
      rec.nu_max = w.nu.size() > 0 ? w.nu.maxCoeff() : 1.0;
    }
  } catch (const SimulationError& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

namespace {

double objective_of(const SweepRecord& r, Objective obj) {
  if (r.failed) return -1e300;
  return obj == Objective::photon_number ? r.photon.n_s : r.photon.purity_P;
}

}  // namespace

DetuningOptimum find_optimal_detuning(Objective objective, double energy,
                                      const RingConfig& cfg, const PumpPulseSpec& base_pulse,
                                      const SimOptions& opt, double lo, double hi,
                                      const Toggles& toggles,
                                      std::optional<double> alpha_override, double tol,
                                      int budget) {
  if (!(hi > lo)) throw BracketError("find_optimal_detuning: empty bracket");
  DetuningOptimum out;
  auto eval = [&](double d) {
    const SweepRecord r =
        evaluate_point(cfg, base_pulse, opt, energy, d, alpha_override, toggles, false);
    ++out.evaluations;
    return objective_of(r, objective);
  };

  constexpr int kCoarse = 17;
  std::vector<double> xs(kCoarse), fs(kCoarse);
  for (int i = 0; i < kCoarse; ++i) {
    xs[i] = lo + (hi - lo) * i / double(kCoarse - 1);
    fs[i] = eval(xs[i]);
  }
  out.coarse_scan.resize(kCoarse);
  for (int i = 0; i < kCoarse; ++i) out.coarse_scan[i] = {xs[i], fs[i]};

  const auto it = std::max_element(fs.begin(), fs.end());
  const int imax = int(it - fs.begin());
  const double fmax = *it;
  const double fmin = *std::min_element(fs.begin(), fs.end());

  if (fmax - fmin <= 1e-12 * std::max(std::abs(fmax), 1e-300)) {
    out.flat = true;
    out.detuning = (lo <= 0.0 && hi >= 0.0) ? 0.0 : 0.5 * (lo + hi);
    out.objective = fmax;
    return out;
  }
  if (imax == 0 || imax == kCoarse - 1) {
    out.pinned_to_edge = true;
    out.detuning = xs[imax];
    out.objective = fmax;
    return out;
  }

  // Golden-section on [xs[imax-1], xs[imax+1]].
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[imax - 1], b = xs[imax + 1];
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > tol && out.evaluations < budget) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval(x1);
    }
  }
  if (f1 >= f2) {
    out.detuning = x1;
    out.objective = f1;
  } else {
    out.detuning = x2;
    out.objective = f2;
  }
  if (out.objective < fmax) {  // coarse point was better than the refinement
    out.detuning = xs[imax];
    out.objective = fmax;
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const RingConfig& cfg,
                      const PumpPulseSpec& base_pulse, const SimOptions& opt) {
  if (spec.energies.empty()) throw std::invalid_argument("run_sweep: no energies");
  SweepResult result;

  struct Task {
    double energy, detuning;
    std::optional<double> alpha;
  };
  std::vector<Task> tasks;

  if (spec.auto_optimal) {
    // Optimal detuning is tracked per (loss scenario, energy); the optimizer
    // itself runs sequentially per energy but energies fan out below.
    std::vector<std::optional<double>> alphas;
    if (spec.alpha_overrides.empty())
      alphas.push_back(std::nullopt);
    else
      for (double a : spec.alpha_overrides) alphas.push_back(a);
    for (const auto& a : alphas)
      for (double e : spec.energies) {
        const DetuningOptimum o =
            find_optimal_detuning(spec.auto_objective, e, cfg, base_pulse, opt, spec.bracket_lo,
                                  spec.bracket_hi, spec.toggles, a);
        tasks.push_back({e, o.detuning, a});
        if (spec.auto_objective == Objective::photon_number)
          result.optimum_detuning_n = o.detuning;
        else
          result.optimum_detuning_p = o.detuning;
      }
  } else {
    std::vector<std::optional<double>> alphas;
    if (spec.alpha_overrides.empty())
      alphas.push_back(std::nullopt);
    else
      for (double a : spec.alpha_overrides) alphas.push_back(a);
    for (const auto& a : alphas)
      for (double e : spec.energies)
        for (double d : spec.detunings) tasks.push_back({e, d, a});
  }

  result.records.resize(tasks.size());
  const int hw = int(std::thread::hardware_concurrency());
  const int n_threads =
      std::max(1, std::min<int>(spec.threads > 0 ? spec.threads : hw, int(tasks.size())));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      result.records[i] = evaluate_point(cfg, base_pulse, opt, t.energy, t.detuning, t.alpha,
                                         spec.toggles, spec.with_williamson);
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const SweepRecord& a, const SweepRecord& b) {
              if (a.alpha != b.alpha) return a.alpha < b.alpha;
              if (a.energy != b.energy) return a.energy < b.energy;
              return a.detuning < b.detuning;
            });
  return result;
}

}  // namespace ringsq::sweep
