#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringsq/detail/assemble_generic.hpp"
#include "ringsq/errors.hpp"
#include "ringsq/kernels.hpp"
#include "ringsq/low_gain.hpp"
#include "ringsq/pair_solver.hpp"
#include "ringsq/photon_stats.hpp"
#include "test_util.hpp"

using namespace ringsq;
using namespace ringsq::testutil;

namespace {

PumpKernels zero_kernels() {
  PumpKernels k;
  k.autocorr.x0 = -1.0;
  k.autocorr.dx = 2.0;
  k.autocorr.values = {cplx{}, cplx{}};
  k.effective_pump = k.autocorr;
  return k;
}

// Constant-value kernel over a huge support.
SampledKernel const_kernel(cplx v) {
  SampledKernel k;
  k.x0 = -1e15;
  k.dx = 2e15;
  k.values = {v, v};
  return k;
}

}  // namespace

TEST_CASE("generator: zero pump reduces to walk-off diagonal") {
  RingConfig cfg = paper_ring();
  cfg.signal.group_velocity *= 1.01;  // unequal velocities
  cfg.signal.round_trip_time = cfg.circumference / cfg.signal.group_velocity;
  const FrequencyGrid grid = build_grid(cfg, 11, 8.0 * resonance_fwhm(cfg));
  const CMat gen = build_generator(zero_kernels(), cfg, grid, 0.0);
  const double walk = 1.0 / cfg.signal.group_velocity - 1.0 / cfg.pump.group_velocity;
  for (int r = 0; r < 11; ++r) {
    for (int c = 0; c < 11; ++c) {
      if (r == c) {
        CHECK(std::abs(gen(r, c) - iu * grid.offset(r) * walk) < 1e-18);
        CHECK(std::abs(gen(11 + r, 11 + c)) < 1e-18);  // idler has equal velocities
      } else {
        CHECK(std::abs(gen(r, c)) == 0.0);
      }
      CHECK(std::abs(gen(r, 11 + c)) == 0.0);
      CHECK(std::abs(gen(11 + r, c)) == 0.0);
    }
  }
}

TEST_CASE("generator: z-independent when phase mismatch vanishes") {
  const RingConfig cfg = paper_ring();
  const FrequencyGrid grid = build_grid(cfg, 11, 8.0 * resonance_fwhm(cfg));
  const PumpKernels k = build_kernels(run_ikeda(paper_pulse(cfg, 5.0), cfg));
  const CMat g0 = build_generator(k, cfg, grid, 0.0);
  const CMat g1 = build_generator(k, cfg, grid, cfg.circumference / 3.0);
  CHECK((g0 - g1).max_abs() == 0.0);

  RingConfig mismatched = cfg;
  mismatched.phase_mismatch = 100.0;
  const CMat g2 = build_generator(k, mismatched, grid, 0.0);
  const CMat g3 = build_generator(k, mismatched, grid, cfg.circumference / 3.0);
  CHECK((g2 - g3).max_abs() > 0.0);
}

TEST_CASE("generator: equal velocities leave only XPM on the diagonal") {
  const RingConfig cfg = paper_ring();  // all velocities equal
  const FrequencyGrid grid = build_grid(cfg, 11, 8.0 * resonance_fwhm(cfg));
  const PumpKernels k = build_kernels(run_ikeda(paper_pulse(cfg, 5.0), cfg));
  const CMat gen = build_generator(k, cfg, grid, 0.0);
  const double dw = grid.spacing;
  const cplx expect =
      iu * 2.0 * cfg.signal.gamma_xpm / units::two_pi * k.autocorr.eval(0.0) * dw;
  for (int r = 0; r < 11; ++r) CHECK(std::abs(gen(r, r) - expect) < 1e-15 * std::abs(expect));
}

TEST_CASE("integrate: zero pump with equal velocities gives the identity") {
  const RingConfig cfg = paper_ring();
  const FrequencyGrid grid = build_grid(cfg, 11, 8.0 * resonance_fwhm(cfg));
  const RoundTripMatrix rt =
      integrate_roundtrip(zero_kernels(), cfg, grid, cfg.circumference, 0.0, 16);
  CHECK((rt.u - CMat::identity(22)).max_abs() == 0.0);
  CHECK(rt.symplectic_defect == 0.0);
}

TEST_CASE("integrate: single-frequency toy matches the two-mode squeezer closed form") {
  RingConfig cfg = paper_ring();
  cfg.signal.gamma_xpm = cfg.idler.gamma_xpm = 0.0;
  FrequencyGrid grid;  // hand-built single-point grid
  grid.n_points = 1;
  grid.spacing = 1.0;
  grid.signal_center = cfg.signal.center_freq;
  grid.idler_center = cfg.idler.center_freq;
  PumpKernels k;
  k.autocorr = const_kernel(cplx{});
  const cplx b{0.4e3, 0.3e3};  // J-scale kernel value
  k.effective_pump = const_kernel(b);

  const double g = cfg.gamma_sfwm * std::abs(b) * grid.spacing / units::two_pi;
  const double gl = g * cfg.circumference;
  REQUIRE(gl > 0.05);
  REQUIRE(gl < 0.3);
  const RoundTripMatrix rt = integrate_roundtrip(k, cfg, grid, cfg.circumference, 0.0, 64);
  const cplx phase = b / std::abs(b);
  CHECK(std::abs(rt.u(0, 0) - std::cosh(gl)) < 1e-9);
  CHECK(std::abs(rt.u(1, 1) - std::cosh(gl)) < 1e-9);
  CHECK(std::abs(rt.u(0, 1) - iu * phase * std::sinh(gl)) < 1e-9);
  CHECK(std::abs(rt.u(1, 0) + iu * std::conj(phase) * std::sinh(gl)) < 1e-9);
}

TEST_CASE("integrate: symplectic defect error path") {
  RingConfig cfg = paper_ring();
  cfg.signal.gamma_xpm = cfg.idler.gamma_xpm = 0.0;
  FrequencyGrid grid;
  grid.n_points = 1;
  grid.spacing = 1.0;
  grid.signal_center = cfg.signal.center_freq;
  grid.idler_center = cfg.idler.center_freq;
  PumpKernels k;
  k.autocorr = const_kernel(cplx{});
  k.effective_pump = const_kernel(cplx{12e3, 0.0});  // gL ~ 2.4 in a single step
  CHECK_THROWS_AS(integrate_roundtrip(k, cfg, grid, cfg.circumference, 0.0, 1),
                  IntegrationAccuracyError);
}

TEST_CASE("paper config at 1 pJ: U is near identity and cleanly symplectic") {
  const RingConfig cfg = paper_ring();
  const FrequencyGrid grid = build_grid(cfg, 61, 16.0 * resonance_fwhm(cfg));
  const PumpKernels k = build_kernels(run_ikeda(paper_pulse(cfg, 1.0), cfg));
  const RoundTripMatrix rt = integrate_roundtrip(k, cfg, grid, cfg.circumference, 0.0, 64);
  CHECK(rt.symplectic_defect < 1e-10);
  CHECK((rt.u - CMat::identity(2 * grid.n_points)).max_abs() < 0.1);
}

namespace {

SimPoint paper_point(double energy_pj, int n, double detuning_ghz = 0.0, int channels = 1,
                     bool xpm = true, bool spm = true) {
  const RingConfig cfg = paper_ring();
  SimOptions opt;
  opt.grid_n = n;
  opt.channels = channels;
  opt.spm = spm;
  opt.xpm = xpm;
  return simulate_point(cfg, paper_pulse(cfg, energy_pj, detuning_ghz), opt);
}

}  // namespace

TEST_CASE("zero pump: S_aa ss block is the Airy transmission, si block vanishes") {
  const SimPoint pt = paper_point(0.0, 61);
  const CMat s_ss = true_sub(pt.S.aa, Sub::ss);
  const CMat s_si = true_sub(pt.S.aa, Sub::si);
  CHECK(s_si.max_abs() == 0.0);
  double max_err = 0.0;
  for (int i = 0; i < pt.grid.n_points; ++i) {
    const cplx h =
        oracle::transmission(pt.cfg.signal, pt.cfg.circumference, pt.grid.signal_freq(i));
    max_err = std::max(max_err, std::abs(s_ss(i, i) - h));
    for (int j = 0; j < pt.grid.n_points; ++j)
      if (i != j) max_err = std::max(max_err, std::abs(s_ss(i, j)));
  }
  CHECK(max_err < 1e-10);
  const int c = pt.grid.center_index();
  CHECK(std::norm(s_ss(c, c)) == doctest::Approx(0.3057).epsilon(5e-4));
}

TEST_CASE("scattering matrix is symplectic at 1 and 300 pJ, M in {1, 2}") {
  for (const int channels : {1, 2}) {
    for (const double e : {1.0, 300.0}) {
      const SimPoint pt = paper_point(e, 41, 0.0, channels);
      CHECK(symplectic_defect(pt.S) < 1e-8);
    }
  }
}

TEST_CASE("composition path reduces exactly to the Eq.-25 closed form at M=1") {
  const RingConfig cfg = paper_ring();
  const FrequencyGrid grid = build_grid(cfg, 41, 32.0 * resonance_fwhm(cfg));
  const PumpKernels k = build_kernels(run_ikeda(paper_pulse(cfg, 50.0), cfg));
  std::vector<RoundTripMatrix> segs;
  segs.push_back(integrate_roundtrip(k, cfg, grid, cfg.circumference, 0.0, 64));
  const BoundaryMatrices b = make_boundaries(cfg, grid, 1);
  const ScatteringMatrix closed = assemble_S(segs, b, 1, SBlocks::full, 50e-12);
  const ScatteringMatrix composed = assemble_S_composed(segs, b, 1, SBlocks::full, 50e-12);
  CHECK((closed.aa - composed.aa).max_abs() < 1e-12);
  CHECK((closed.af[0] - composed.af[0]).max_abs() < 1e-12);
  CHECK((closed.fa[0] - composed.fa[0]).max_abs() < 1e-12);
  CHECK((closed.ff_block(0, 0) - composed.ff_block(0, 0)).max_abs() < 1e-12);
}

TEST_CASE("lossless multi-channel ring has silent phantom ports") {
  RingConfig cfg = paper_ring(0.0);
  SimOptions opt;
  opt.grid_n = 41;
  const PumpPulseSpec pulse = paper_pulse(cfg, 5.0);
  opt.channels = 5;
  const SimPoint b = simulate_point(cfg, pulse, opt);
  for (const auto& af : b.S.af) CHECK(af.max_abs() == 0.0);
  CHECK(symplectic_defect(b.S) < 1e-8);
  // lumped-phase (M=1) and distributed-phase (M=5) observables stay close
  opt.channels = 1;
  const SimPoint a = simulate_point(cfg, pulse, opt);
  const double na = stats::mean_photon_signal(a.S);
  const double nb = stats::mean_photon_signal(b.S);
  CHECK(std::abs(na - nb) / nb < 1e-3);
}

TEST_CASE("phantom convergence: M=1 vs M=8 mean photon number within 0.2%") {
  const SimPoint a = paper_point(1.0, 61, 0.0, 1);
  const SimPoint b = paper_point(1.0, 61, 0.0, 8);
  const double na = stats::mean_photon_signal(a.S);
  const double nb = stats::mean_photon_signal(b.S);
  CHECK(std::abs(na - nb) / nb < 0.002);
}

TEST_CASE("low-gain oracle equivalence at 1 pJ with SPM/XPM off") {
  const SimPoint pt = paper_point(1.0, 101, 0.0, 1, false, false);
  const CMat s_si = true_sub(pt.S.aa, Sub::si);
  const CMat jsa = oracle::first_order_jsa(paper_pulse(pt.cfg, 1.0), pt.cfg, pt.grid);
  cplx inner{};
  double n1 = 0.0, n2 = 0.0;
  for (int r = 0; r < pt.grid.n_points; ++r)
    for (int c = 0; c < pt.grid.n_points; ++c) {
      inner += std::conj(s_si(r, c)) * jsa(r, c);
      n1 += std::norm(s_si(r, c));
      n2 += std::norm(jsa(r, c));
    }
  const double overlap = std::abs(inner) / std::sqrt(n1 * n2);
  MESSAGE("low-gain overlap: ", overlap);
  CHECK(overlap > 0.99);
  double diff = 0.0;
  for (int r = 0; r < pt.grid.n_points; ++r)
    for (int c = 0; c < pt.grid.n_points; ++c) diff += std::norm(s_si(r, c) - jsa(r, c));
  CHECK(std::sqrt(diff / n2) < 0.1);
}

TEST_CASE("hermitian-kernel exchange symmetry with identical modes") {
  const SimPoint pt = paper_point(20.0, 61);
  const CMat s_si = true_sub(pt.S.aa, Sub::si);
  const CMat s_is = true_sub(pt.S.aa, Sub::is);
  double max_rel = 0.0;
  const double scale = s_si.max_abs();
  for (int r = 0; r < pt.grid.n_points; ++r)
    for (int c = 0; c < pt.grid.n_points; ++c)
      max_rel = std::max(max_rel,
                         std::abs(std::abs(s_si(r, c)) - std::abs(s_is(r, c))) / scale);
  CHECK(max_rel < 1e-10);
}

TEST_CASE("singular Q raises the above-threshold error") {
  RingConfig cfg = paper_ring(0.0);
  const double rho = 1e-7;
  cfg.signal.coupling_rho = cfg.idler.coupling_rho = rho;
  cfg.signal.coupling_tau = cfg.idler.coupling_tau = std::sqrt(1.0 - rho * rho);
  FrequencyGrid grid;
  grid.n_points = 3;
  grid.spacing = 1.0;
  grid.signal_center = cfg.signal.center_freq;
  grid.idler_center = cfg.idler.center_freq;
  BoundaryMatrices b = make_boundaries(cfg, grid, 1);
  for (auto& e : b.e_full) e = 1.0;  // kill residual grid phases
  std::vector<RoundTripMatrix> segs(1);
  segs[0].u = CMat::identity(6);
  segs[0].segment_length = cfg.circumference;
  CHECK_THROWS_AS(assemble_S(segs, b, 1, SBlocks::full, 1e-12), SingularQError);
}

TEST_CASE("grid convergence at 600 pJ: doubling N moves n_s by < 0.5%") {
  const SimPoint a = paper_point(600.0, 101);
  const SimPoint b = paper_point(600.0, 201);
  const double na = stats::mean_photon_signal(a.S);
  const double nb = stats::mean_photon_signal(b.S);
  MESSAGE("n_s at N=101: ", na, ", N=201: ", nb);
  CHECK(std::abs(na - nb) / nb < 0.005);
}

TEST_CASE("generic long-double mirror agrees with the production assembly") {
  // double-instantiated mirror must land on the production defect scale, and
  // the long-double instantiation must push it well below
  const RingConfig cfg = paper_ring();
  SimOptions opt;
  opt.grid_n = 41;
  opt.spm = false;
  opt.xpm = false;
  const SimPoint pt = simulate_point(cfg, paper_pulse(cfg, 300.0), opt);
  const double prod = symplectic_defect(pt.S);
  const double gen64 =
      ringsq::detail::symplectic_defect_generic<double>(pt.kernels, pt.cfg, pt.grid, 1, 64);
  const double gen80 = ringsq::detail::symplectic_defect_generic<long double>(
      pt.kernels, pt.cfg, pt.grid, 1, 64);
  MESSAGE("production ", prod, " generic64 ", gen64, " generic80 ", gen80);
  CHECK(gen64 < 1e-8);
  CHECK(prod < 1e-8);
  CHECK(gen80 < 0.5 * std::max(gen64, prod) + 1e-15);
}
