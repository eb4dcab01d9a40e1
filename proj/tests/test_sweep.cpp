#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringsq/errors.hpp"
#include "ringsq/sweep.hpp"
#include "ringsq/units.hpp"
#include "test_util.hpp"

using namespace ringsq;
using namespace ringsq::testutil;

namespace {

SimOptions small_opts(int n = 21) {
  SimOptions o;
  o.grid_n = n;
  o.z_steps = 16;
  return o;
}

}  // namespace

TEST_CASE("zero-energy objective is flat; tie-break reports zero detuning") {
  const RingConfig cfg = paper_ring();
  const auto o = sweep::find_optimal_detuning(
      sweep::Objective::photon_number, 0.0, cfg, paper_pulse(cfg, 0.0), small_opts(),
      units::rad_s_from_ghz(-0.4), units::rad_s_from_ghz(0.4));
  CHECK(o.flat);
  CHECK(o.detuning == 0.0);
  CHECK(o.coarse_scan.size() == 17);
}

TEST_CASE("empty bracket raises") {
  const RingConfig cfg = paper_ring();
  CHECK_THROWS_AS(sweep::find_optimal_detuning(sweep::Objective::purity, 1e-12, cfg,
                                               paper_pulse(cfg, 1.0), small_opts(), 0.0, 0.0),
                  BracketError);
}

TEST_CASE("edge-pinned optimum is flagged") {
  // photon number at low gain is maximized on resonance; a bracket strictly
  // red of resonance pins to its right edge
  const RingConfig cfg = paper_ring();
  const auto o = sweep::find_optimal_detuning(
      sweep::Objective::photon_number, 1e-12, cfg, paper_pulse(cfg, 1.0), small_opts(41),
      units::rad_s_from_ghz(-1.2), units::rad_s_from_ghz(-0.4));
  CHECK(o.pinned_to_edge);
  CHECK(o.detuning == doctest::Approx(units::rad_s_from_ghz(-0.4)));
}

TEST_CASE("interior optimum: low-gain photon number peaks at zero detuning") {
  const RingConfig cfg = paper_ring();
  const auto o = sweep::find_optimal_detuning(
      sweep::Objective::photon_number, 1e-12, cfg, paper_pulse(cfg, 1.0), small_opts(41),
      units::rad_s_from_ghz(-0.3), units::rad_s_from_ghz(0.3));
  CHECK_FALSE(o.pinned_to_edge);
  CHECK(std::abs(units::ghz_from_rad_s(o.detuning)) < 0.05);
  CHECK(o.evaluations <= 40);
}

TEST_CASE("run_sweep: records sorted, deterministic, failures flagged per point") {
  const RingConfig cfg = paper_ring();
  sweep::SweepSpec spec;
  spec.energies = {units::joule_from_pj(2.0), units::joule_from_pj(1.0)};
  spec.detunings = {units::rad_s_from_ghz(-0.2), 0.0};
  spec.threads = 2;
  const auto res = run_sweep(spec, cfg, paper_pulse(cfg, 1.0), small_opts());
  REQUIRE(res.records.size() == 4);
  for (size_t i = 1; i < res.records.size(); ++i) {
    const auto& a = res.records[i - 1];
    const auto& b = res.records[i];
    CHECK((a.energy < b.energy || (a.energy == b.energy && a.detuning <= b.detuning)));
  }
  // identical to a single-threaded run
  spec.threads = 1;
  const auto res1 = run_sweep(spec, cfg, paper_pulse(cfg, 1.0), small_opts());
  for (size_t i = 0; i < res.records.size(); ++i)
    CHECK(res.records[i].photon.n_s == res1.records[i].photon.n_s);
}

TEST_CASE("run_sweep: loss scenarios fan out") {
  const RingConfig cfg = paper_ring();
  sweep::SweepSpec spec;
  spec.energies = {units::joule_from_pj(1.0)};
  spec.detunings = {0.0};
  spec.alpha_overrides = {units::alpha_per_m_from_db_per_m(10.0),
                          units::alpha_per_m_from_db_per_m(1.08)};
  const auto res = run_sweep(spec, cfg, paper_pulse(cfg, 1.0), small_opts());
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].alpha < res.records[1].alpha);
  // lower loss -> more photons out
  CHECK(res.records[0].photon.n_s > res.records[1].photon.n_s);
}

TEST_CASE("toggles flow through the sweep") {
  const RingConfig cfg = paper_ring();
  sweep::SweepSpec spec;
  spec.energies = {units::joule_from_pj(200.0)};
  spec.detunings = {0.0};
  spec.toggles = {false, false};  // SFWM only
  const auto sfwm = run_sweep(spec, cfg, paper_pulse(cfg, 1.0), small_opts(41));
  spec.toggles = {true, true};
  const auto all = run_sweep(spec, cfg, paper_pulse(cfg, 1.0), small_opts(41));
  CHECK(sfwm.records[0].photon.n_s > 10.0 * all.records[0].photon.n_s);
}
