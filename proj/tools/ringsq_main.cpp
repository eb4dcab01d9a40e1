#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <thread>

#include "ringsq/errors.hpp"
#include "ringsq/gaussian.hpp"
#include "ringsq/io.hpp"
#include "ringsq/modal.hpp"
#include "ringsq/pair_solver.hpp"
#include "ringsq/photon_stats.hpp"
#include "ringsq/sweep.hpp"
#include "ringsq/units.hpp"

namespace fs = std::filesystem;
using namespace ringsq;

namespace {

std::string utc_now() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// "x", "lo:hi:n" (linear) or "log:lo:hi:n"
std::vector<double> parse_range(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  std::vector<double> out;
  if (parts.size() == 1) {
    out.push_back(std::stod(parts[0]));
  } else if (parts.size() == 3) {
    const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo + (hi - lo) * i / double(n - 1));
  } else if (parts.size() == 4 && parts[0] == "log") {
    const double lo = std::stod(parts[1]), hi = std::stod(parts[2]);
    const int n = std::stoi(parts[3]);
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo * std::pow(hi / lo, i / double(n - 1)));
  } else {
    throw std::invalid_argument("bad range '" + s + "'; use x, lo:hi:n or log:lo:hi:n");
  }
  return out;
}

int env_threads() {
  const char* v = std::getenv("RINGSQ_THREADS");
  return v != nullptr ? std::atoi(v) : 0;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  int grid_n = 0;
  double span_fwhm = 0.0;
  int z_steps = 0;
  std::string toggles;  // e.g. "spm=on,xpm=off"
  std::string channels;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "config JSON path")->required();
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--threads", a.threads, "worker threads (env RINGSQ_THREADS fallback)");
  cmd->add_option("--grid-n", a.grid_n, "frequency grid points (odd)");
  cmd->add_option("--grid-span-fwhm", a.span_fwhm, "grid span in resonance FWHMs");
  cmd->add_option("--z-steps", a.z_steps, "RK4 steps per ring segment");
  cmd->add_option("--toggles", a.toggles, "spm=on|off,xpm=on|off");
  cmd->add_option("--channels", a.channels, "phantom channel count or list, e.g. 1,2,5");
}

sweep::Toggles parse_toggles(const std::string& s) {
  sweep::Toggles t;
  std::string cur;
  auto apply = [&](const std::string& kv) {
    if (kv.empty()) return;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad toggle '" + kv + "'");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    const bool on = val == "on";
    if (!on && val != "off") throw std::invalid_argument("toggle value must be on|off");
    if (key == "spm")
      t.spm = on;
    else if (key == "xpm")
      t.xpm = on;
    else
      throw std::invalid_argument("unknown toggle '" + key + "'");
  };
  for (char c : s) {
    if (c == ',') {
      apply(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  apply(cur);
  return t;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

struct Setup {
  io::ParsedConfig cfg;
  sweep::Toggles toggles;
  int threads = 1;
  fs::path out;
  io::RunManifest manifest;
};

Setup prepare(const CommonArgs& a, const std::string& subcommand) {
  Setup s;
  s.cfg = io::parse_config_file(a.config_path);
  if (a.grid_n > 0) s.cfg.options.grid_n = a.grid_n;
  if (a.span_fwhm > 0) s.cfg.options.span_fwhm = a.span_fwhm;
  if (a.z_steps > 0) s.cfg.options.z_steps = a.z_steps;
  if (!a.channels.empty()) {
    const auto list = parse_int_list(a.channels);
    if (list.size() == 1) {
      s.cfg.options.channels = list[0];
      s.cfg.ring.phantom_channels = list[0];
    }
  }
  if (!a.toggles.empty()) s.toggles = parse_toggles(a.toggles);
  s.threads = a.threads > 0 ? a.threads : env_threads();
  if (s.threads <= 0) s.threads = int(std::thread::hardware_concurrency());
  s.out = a.out_dir;
  fs::create_directories(s.out);
  s.manifest.tool_version = io::kToolVersion;
  s.manifest.config_hash = io::config_hash(s.cfg);
  s.manifest.timestamp_utc = utc_now();
  s.manifest.subcommand = subcommand;
  s.manifest.grid_n = s.cfg.options.grid_n;
  s.manifest.span_fwhm = s.cfg.options.span_fwhm;
  s.manifest.z_steps = s.cfg.options.z_steps;
  s.manifest.channels = s.cfg.options.channels;
  s.manifest.spm = s.toggles.spm;
  s.manifest.xpm = s.toggles.xpm;
  s.manifest.threads = s.threads;
  return s;
}

void finish(Setup& s) {
  io::write_text((s.out / "manifest.json").string(), io::manifest_json(s.manifest));
}

std::string ghz_str(double rad_s) { return io::format_double(units::ghz_from_rad_s(rad_s)); }

int cmd_simulate(const CommonArgs& a, double energy_pj, double detuning_ghz, bool dump_pump,
                 bool dump_modes) {
  Setup s = prepare(a, "simulate");
  PumpPulseSpec pulse = s.cfg.pulse;
  pulse.energy = units::joule_from_pj(energy_pj);
  pulse.detuning = units::rad_s_from_ghz(detuning_ghz);
  SimOptions opt = s.cfg.options;
  opt.spm = s.toggles.spm;
  opt.xpm = s.toggles.xpm;
  const SimPoint pt = simulate_point(s.cfg.ring, pulse, opt);
  for (const auto& w : pt.warnings) s.manifest.warnings.push_back(w);

  sweep::SweepRecord rec;
  rec.energy = pulse.energy;
  rec.detuning = pulse.detuning;
  rec.photon = stats::photon_statistics(pt.S);
  if (pt.S.channels == 1) {
    const auto cov = gauss::bus_vacuum_covariance(pt.S);
    const auto w = gauss::williamson(cov);
    rec.squeezing_db = w.first_squeezing_db;
    rec.antisqueezing_db = w.first_antisqueezing_db;
    rec.state_purity = w.state_purity;
  }
  io::write_text((s.out / "stats.json").string(),
                 io::photon_record_json(rec, pt.S.channels == 1));

  if (pt.S.channels == 1) {
    // Gaussian-layer record: leading Williamson modes and click probabilities.
    const auto cov = gauss::bus_vacuum_covariance(pt.S);
    const auto w = gauss::williamson(cov);
    const auto clicks = gauss::click_probabilities(
        cov, gauss::signal_ports(pt.grid.n_points), gauss::idler_ports(pt.grid.n_points));
    nlohmann::json gj;
    const int nm = std::min<int>(10, int(w.squeezing_db.size()));
    for (int j = 0; j < nm; ++j) {
      gj["squeezing_db"].push_back(w.squeezing_db[j]);
      gj["antisqueezing_db"].push_back(w.antisqueezing_db[j]);
      gj["nu"].push_back(w.nu(j));
    }
    gj["p_s"] = clicks.p_s;
    gj["p_i"] = clicks.p_i;
    gj["p_si"] = clicks.p_si;
    gj["state_purity"] = w.state_purity;
    io::write_text((s.out / "gaussian.json").string(), gj.dump(2) + "\n");
  }

  // |S_si| heatmap, long format
  io::CsvTable jsa;
  jsa.header = {"signal_offset_GHz", "idler_offset_GHz", "abs_S_si"};
  const CMat s_si = true_sub(pt.S.aa, Sub::si);
  for (int r = 0; r < pt.grid.n_points; ++r)
    for (int c = 0; c < pt.grid.n_points; ++c)
      jsa.rows.push_back({ghz_str(pt.grid.offset(r)), ghz_str(pt.grid.offset(c)),
                          io::format_double(std::abs(s_si(r, c)))});
  io::write_csv((s.out / "jsa.csv").string(), jsa);

  if (dump_pump) {
    io::CsvTable t;
    t.header = {"t_or_omega", "re", "im"};
    for (size_t k = 0; k < pt.pump.intracavity.size(); ++k)
      t.rows.push_back({io::format_double(double(k) * pt.pump.dt),
                        io::format_double(pt.pump.intracavity[k].real()),
                        io::format_double(pt.pump.intracavity[k].imag())});
    io::write_csv((s.out / "pump_time.csv").string(), t);
    io::CsvTable f;
    f.header = {"t_or_omega", "re", "im"};
    for (size_t k = 0; k < pt.pump.spectrum.size(); ++k)
      f.rows.push_back({io::format_double(pt.pump.freq_offset(k)),
                        io::format_double(pt.pump.spectrum[k].real()),
                        io::format_double(pt.pump.spectrum[k].imag())});
    io::write_csv((s.out / "pump_freq.csv").string(), f);
  }
  if (dump_modes && pt.S.channels == 1) {
    const auto sandwich = modal::sandwich_decompose(pt.S);
    const auto sq = modal::squeezer_decompose(sandwich.c_aa);
    io::CsvTable rc;
    rc.header = {"mode", "r_c"};
    for (size_t l = 0; l < sq.r.size(); ++l)
      rc.rows.push_back({std::to_string(l), io::format_double(sq.r[l])});
    io::write_csv((s.out / "schmidt_rc.csv").string(), rc);
    const auto tm = modal::temporal_schmidt_mode(sq, 0, pt.grid);
    io::CsvTable tmt;
    tmt.header = {"time_ns", "abs_p1"};
    for (size_t j = 0; j < tm.times.size(); ++j)
      tmt.rows.push_back({io::format_double(tm.times[j] * 1e9),
                          io::format_double(std::abs(tm.values[j]))});
    io::write_csv((s.out / "temporal_mode.csv").string(), tmt);
  }
  finish(s);
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& figure, const std::string& energy_range,
              const std::string& detuning_range) {
  Setup s = prepare(a, "sweep");
  sweep::SweepSpec spec;
  spec.threads = s.threads;
  spec.toggles = s.toggles;
  io::CsvTable t;

  if (figure == "fig4") {
    // Three-scenario energy response at zero detuning.
    for (double e : parse_range(!energy_range.empty() ? energy_range : "log:1:600:13"))
      spec.energies.push_back(units::joule_from_pj(e));
    spec.detunings = {0.0};
    t.header = {"energy_pJ", "scenario", "n_s", "P", "g2_s", "g2_si"};
    const std::vector<std::pair<std::string, sweep::Toggles>> scen = {
        {"sfwm_only", {false, false}}, {"sfwm_spm", {true, false}}, {"all", {true, true}}};
    for (const auto& [name, tog] : scen) {
      spec.toggles = tog;
      const auto res = run_sweep(spec, s.cfg.ring, s.cfg.pulse, s.cfg.options);
      for (const auto& r : res.records)
        t.rows.push_back({io::format_double(units::pj_from_joule(r.energy)), name,
                          io::format_double(r.photon.n_s), io::format_double(r.photon.purity_P),
                          io::format_double(r.photon.g2_s), io::format_double(r.photon.g2_si)});
    }
    io::write_csv((s.out / "fig4.csv").string(), t);
  } else if (figure == "fig7" || figure == "fig8") {
    // detuning scan at fixed energy (defaults match the reference plots)
    for (double e : parse_range(!energy_range.empty() ? energy_range : "600"))
      spec.energies.push_back(units::joule_from_pj(e));
    for (double d : parse_range(!detuning_range.empty() ? detuning_range : "-0.8:0:33"))
      spec.detunings.push_back(units::rad_s_from_ghz(d));
    const auto res = run_sweep(spec, s.cfg.ring, s.cfg.pulse, s.cfg.options);
    t.header = {"energy_pJ", "detuning_GHz", "n_s", "P"};
    for (const auto& r : res.records)
      t.rows.push_back({io::format_double(units::pj_from_joule(r.energy)), ghz_str(r.detuning),
                        io::format_double(r.photon.n_s), io::format_double(r.photon.purity_P)});
    io::write_csv((s.out / (figure + ".csv")).string(), t);
  } else if (figure == "fig9") {
    // optimal-detuning envelope for both objectives
    t.header = {"energy_pJ", "optimal_detuning_n_GHz", "n_s_max", "optimal_detuning_P_GHz",
                "P_max"};
    for (double e : parse_range(!energy_range.empty() ? energy_range : "log:100:600:4")) {
      const auto on = sweep::find_optimal_detuning(
          sweep::Objective::photon_number, units::joule_from_pj(e), s.cfg.ring, s.cfg.pulse,
          s.cfg.options, units::rad_s_from_ghz(-0.8), 0.0, spec.toggles);
      const auto op = sweep::find_optimal_detuning(
          sweep::Objective::purity, units::joule_from_pj(e), s.cfg.ring, s.cfg.pulse,
          s.cfg.options, units::rad_s_from_ghz(-0.8), 0.0, spec.toggles);
      t.rows.push_back({io::format_double(e), ghz_str(on.detuning),
                        io::format_double(on.objective), ghz_str(op.detuning),
                        io::format_double(op.objective)});
    }
    io::write_csv((s.out / "fig9.csv").string(), t);
  } else if (!figure.empty()) {
    throw std::invalid_argument("unknown figure '" + figure +
                                "' (fig4, fig7, fig8, fig9; fig10/11 via the squeezing "
                                "subcommand, fig13 via convergence)");
  } else {
    for (double e : parse_range(!energy_range.empty() ? energy_range : "600"))
      spec.energies.push_back(units::joule_from_pj(e));
    for (double d : parse_range(!detuning_range.empty() ? detuning_range : "0"))
      spec.detunings.push_back(units::rad_s_from_ghz(d));
    spec.with_williamson = true;
    const auto res = run_sweep(spec, s.cfg.ring, s.cfg.pulse, s.cfg.options);
    t.header = {"energy_pJ", "detuning_GHz", "n_s",          "n_i",  "g2_s", "g2_si",
                "K",         "P",            "squeezing_db", "antisqueezing_db",
                "state_purity", "error"};
    for (const auto& r : res.records)
      t.rows.push_back({io::format_double(units::pj_from_joule(r.energy)), ghz_str(r.detuning),
                        io::format_double(r.photon.n_s), io::format_double(r.photon.n_i),
                        io::format_double(r.photon.g2_s), io::format_double(r.photon.g2_si),
                        io::format_double(r.photon.schmidt_K),
                        io::format_double(r.photon.purity_P),
                        io::format_double(r.squeezing_db),
                        io::format_double(r.antisqueezing_db),
                        io::format_double(r.state_purity), r.failed ? r.error : ""});
    io::write_csv((s.out / "sweep.csv").string(), t);
  }
  finish(s);
  return 0;
}

int cmd_optimal_detuning(const CommonArgs& a, const std::string& energy_range,
                         const std::string& objective, double lo_ghz, double hi_ghz) {
  Setup s = prepare(a, "optimal-detuning");
  const auto obj = objective == "photon_number" ? sweep::Objective::photon_number
                                                : sweep::Objective::purity;
  io::CsvTable t;
  t.header = {"energy_pJ", "objective", "optimal_detuning_GHz", "objective_value",
              "pinned_to_edge", "evaluations"};
  for (double e_pj : parse_range(energy_range)) {
    const auto o = sweep::find_optimal_detuning(
        obj, units::joule_from_pj(e_pj), s.cfg.ring, s.cfg.pulse, s.cfg.options,
        units::rad_s_from_ghz(lo_ghz), units::rad_s_from_ghz(hi_ghz), s.toggles);
    if (o.pinned_to_edge)
      s.manifest.warnings.push_back("optimum pinned to bracket edge at " +
                                    io::format_double(e_pj) + " pJ");
    t.rows.push_back({io::format_double(e_pj), objective, ghz_str(o.detuning),
                      io::format_double(o.objective), o.pinned_to_edge ? "1" : "0",
                      std::to_string(o.evaluations)});
  }
  io::write_csv((s.out / "optimal_detuning.csv").string(), t);
  finish(s);
  return 0;
}

int cmd_squeezing(const CommonArgs& a, const std::string& energy_range,
                  const std::string& detuning_range, const std::string& loss_list,
                  bool optimal) {
  Setup s = prepare(a, "squeezing");
  sweep::SweepSpec spec;
  spec.threads = s.threads;
  spec.toggles = s.toggles;
  spec.with_williamson = true;
  for (double e : parse_range(energy_range)) spec.energies.push_back(units::joule_from_pj(e));
  if (!loss_list.empty())
    for (double db : parse_range(loss_list))
      spec.alpha_overrides.push_back(units::alpha_per_m_from_db_per_m(db));
  if (optimal) {
    spec.auto_optimal = true;
    spec.auto_objective = sweep::Objective::purity;
    spec.bracket_lo = units::rad_s_from_ghz(-0.8);
    spec.bracket_hi = 0.0;
  } else {
    for (double d : parse_range(!detuning_range.empty() ? detuning_range : "0"))
      spec.detunings.push_back(units::rad_s_from_ghz(d));
  }
  const auto res = run_sweep(spec, s.cfg.ring, s.cfg.pulse, s.cfg.options);
  io::CsvTable t;
  t.header = {"loss_db_per_m", "energy_pJ",        "detuning_GHz", "squeezing_db",
              "antisqueezing_db", "state_purity",  "n_s",          "P",
              "error"};
  for (const auto& r : res.records)
    t.rows.push_back({io::format_double(units::db_per_m_from_alpha(r.alpha)),
                      io::format_double(units::pj_from_joule(r.energy)), ghz_str(r.detuning),
                      io::format_double(r.squeezing_db),
                      io::format_double(r.antisqueezing_db),
                      io::format_double(r.state_purity), io::format_double(r.photon.n_s),
                      io::format_double(r.photon.purity_P), r.failed ? r.error : ""});
  io::write_csv((s.out / "squeezing.csv").string(), t);
  finish(s);
  return 0;
}

int cmd_convergence(const CommonArgs& a, double energy_pj, double detuning_ghz) {
  Setup s = prepare(a, "convergence");
  const std::vector<int> channel_list =
      a.channels.empty() ? std::vector<int>{1, 2, 5, 10, 20} : parse_int_list(a.channels);
  PumpPulseSpec pulse = s.cfg.pulse;
  pulse.energy = units::joule_from_pj(energy_pj);
  pulse.detuning = units::rad_s_from_ghz(detuning_ghz);
  io::CsvTable t;
  t.header = {"channels", "n_s", "P"};
  for (int m : channel_list) {
    SimOptions opt = s.cfg.options;
    opt.spm = s.toggles.spm;
    opt.xpm = s.toggles.xpm;
    opt.channels = m;
    opt.policy = SBlocks::bus_row;
    const SimPoint pt = simulate_point(s.cfg.ring, pulse, opt);
    const auto ps = stats::photon_statistics(pt.S);
    t.rows.push_back({std::to_string(m), io::format_double(ps.n_s),
                      io::format_double(ps.purity_P)});
  }
  io::write_csv((s.out / "convergence.csv").string(), t);
  finish(s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"broadband quantum scattering of a pulsed-pump microring photon-pair source"};
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, od_args, sq_args, conv_args;
  double sim_energy = 1.0, sim_detuning = 0.0;
  bool dump_pump = false, dump_modes = false;
  auto* sim = app.add_subcommand("simulate", "single-point JSA and statistics");
  add_common(sim, sim_args);
  sim->add_option("--energy", sim_energy, "pump energy, pJ");
  sim->add_option("--detuning", sim_detuning, "pump detuning, GHz");
  sim->add_flag("--dump-pump", dump_pump, "write intracavity pump CSVs");
  sim->add_flag("--dump-modes", dump_modes, "write Schmidt spectrum and temporal mode CSVs");

  std::string figure, energy_range, detuning_range;
  auto* sw = app.add_subcommand("sweep", "energy/detuning sweeps");
  add_common(sw, sweep_args);
  sw->add_option("--figure", figure, "named sweep: fig4|fig7|fig8|fig9");
  sw->add_option("--energy", energy_range, "pJ scalar or range lo:hi:n or log:lo:hi:n");
  sw->add_option("--detuning", detuning_range, "GHz scalar or range");

  std::string od_energy = "600", od_objective = "purity";
  double od_lo = -0.8, od_hi = 0.0;
  auto* od = app.add_subcommand("optimal-detuning", "locate the optimal pump detuning");
  add_common(od, od_args);
  od->add_option("--energy", od_energy, "pJ scalar or range");
  od->add_option("--objective", od_objective, "purity|photon_number");
  od->add_option("--bracket-lo", od_lo, "GHz");
  od->add_option("--bracket-hi", od_hi, "GHz");

  std::string sq_energy = "log:10:600:10", sq_detuning, sq_loss;
  bool sq_optimal = false;
  auto* sq = app.add_subcommand("squeezing", "Williamson squeezing figures");
  add_common(sq, sq_args);
  sq->add_option("--energy", sq_energy, "pJ scalar or range");
  sq->add_option("--detuning", sq_detuning, "GHz scalar or range");
  sq->add_option("--loss", sq_loss, "dB/m scalar or range (loss scenarios)");
  sq->add_flag("--optimal", sq_optimal, "track the optimal detuning for purity");

  double conv_energy = 1.0, conv_detuning = 0.0;
  auto* conv = app.add_subcommand("convergence", "phantom-channel convergence table");
  add_common(conv, conv_args);
  conv->add_option("--energy", conv_energy, "pJ");
  conv->add_option("--detuning", conv_detuning, "GHz");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_args, sim_energy, sim_detuning, dump_pump, dump_modes);
    if (sw->parsed()) return cmd_sweep(sweep_args, figure, energy_range, detuning_range);
    if (od->parsed()) return cmd_optimal_detuning(od_args, od_energy, od_objective, od_lo, od_hi);
    if (sq->parsed()) return cmd_squeezing(sq_args, sq_energy, sq_detuning, sq_loss, sq_optimal);
    if (conv->parsed()) return cmd_convergence(conv_args, conv_energy, conv_detuning);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return 1;
}
