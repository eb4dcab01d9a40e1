#include "ringsq/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ringsq/units.hpp"

namespace ringsq::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (allowed.find(key) == allowed.end()) fail(path + "." + key, "unknown key");
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path, "missing required key '" + key + "'");
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? obj[key].get<double>() : fallback;
}

struct ModeIn {
  double wavelength_nm = 0.0;
  double rho_sq = 0.0;
  double alpha = 0.0;
  double fsr_ghz = 0.0;
  double gamma = 0.0;  // spm for pump, xpm otherwise
};

ModeIn parse_mode(const json& m, const std::string& path, bool is_pump) {
  std::set<std::string> allowed = {"wavelength_nm", "coupling_rho_sq", "fsr_ghz",
                                   "loss_db_per_m", "loss_db_per_cm", "loss_per_m"};
  allowed.insert(is_pump ? "gamma_spm_per_w_m" : "gamma_xpm_per_w_m");
  check_keys(m, path, allowed);
  ModeIn in;
  in.wavelength_nm = require_number(m, path, "wavelength_nm");
  in.rho_sq = require_number(m, path, "coupling_rho_sq");
  in.fsr_ghz = require_number(m, path, "fsr_ghz");
  const int loss_keys = int(m.contains("loss_db_per_m")) + int(m.contains("loss_db_per_cm")) +
                        int(m.contains("loss_per_m"));
  if (loss_keys != 1)
    fail(path, "exactly one of loss_db_per_m / loss_db_per_cm / loss_per_m required");
  if (m.contains("loss_db_per_m"))
    in.alpha = units::alpha_per_m_from_db_per_m(m["loss_db_per_m"].get<double>());
  else if (m.contains("loss_db_per_cm"))
    in.alpha = units::alpha_per_m_from_db_per_cm(m["loss_db_per_cm"].get<double>());
  else
    in.alpha = m["loss_per_m"].get<double>();
  in.gamma = require_number(m, path, is_pump ? "gamma_spm_per_w_m" : "gamma_xpm_per_w_m");
  if (in.rho_sq <= 0.0 || in.rho_sq >= 1.0) fail(path + ".coupling_rho_sq", "must be in (0,1)");
  if (in.alpha < 0.0) fail(path, "loss must be >= 0");
  if (in.fsr_ghz <= 0.0) fail(path + ".fsr_ghz", "must be > 0");
  return in;
}

ModeParams make_mode(const ModeIn& in, ModeLabel label, double circumference) {
  ModeParams m;
  m.label = label;
  m.resonance_freq = units::omega_from_wavelength_nm(in.wavelength_nm);
  m.center_freq = m.resonance_freq;
  m.round_trip_time = 1.0 / units::hz_from_ghz(in.fsr_ghz);
  m.group_velocity = circumference / m.round_trip_time;
  m.coupling_rho = std::sqrt(in.rho_sq);
  m.coupling_tau = std::sqrt(1.0 - in.rho_sq);
  m.alpha = in.alpha;
  if (label == ModeLabel::pump)
    m.gamma_spm = in.gamma;
  else
    m.gamma_xpm = in.gamma;
  return m;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(root, "$", {"ring", "pump_pulse", "grid", "solver"});
  if (!root.contains("ring")) fail("$", "missing required key 'ring'");
  if (!root.contains("pump_pulse")) fail("$", "missing required key 'pump_pulse'");

  const json& ring = root["ring"];
  check_keys(ring, "$.ring",
             {"circumference_mm", "radius_um", "phantom_channels", "gamma_sfwm_per_w_m",
              "phase_mismatch_per_m", "freq_mismatch_ghz", "modes"});
  ParsedConfig out;
  double circumference = 0.0;
  if (ring.contains("circumference_mm") == ring.contains("radius_um"))
    fail("$.ring", "exactly one of circumference_mm / radius_um required");
  if (ring.contains("circumference_mm"))
    circumference = ring["circumference_mm"].get<double>() * 1e-3;
  else
    circumference = units::two_pi * ring["radius_um"].get<double>() * 1e-6;
  out.ring.circumference = circumference;
  out.ring.gamma_sfwm = require_number(ring, "$.ring", "gamma_sfwm_per_w_m");
  out.ring.phase_mismatch = number_or(ring, "phase_mismatch_per_m", 0.0);
  out.ring.freq_mismatch = units::rad_s_from_ghz(number_or(ring, "freq_mismatch_ghz", 0.0));
  out.ring.phantom_channels = int(number_or(ring, "phantom_channels", 1.0));

  if (!ring.contains("modes")) fail("$.ring", "missing required key 'modes'");
  const json& modes = ring["modes"];
  check_keys(modes, "$.ring.modes", {"pump", "signal", "idler"});
  for (const char* k : {"pump", "signal", "idler"})
    if (!modes.contains(k)) fail("$.ring.modes", std::string("missing required key '") + k + "'");
  const ModeIn pump_in = parse_mode(modes["pump"], "$.ring.modes.pump", true);
  const ModeIn sig_in = parse_mode(modes["signal"], "$.ring.modes.signal", false);
  const ModeIn idl_in = parse_mode(modes["idler"], "$.ring.modes.idler", false);
  out.ring.pump = make_mode(pump_in, ModeLabel::pump, circumference);
  out.ring.signal = make_mode(sig_in, ModeLabel::signal, circumference);
  out.ring.idler = make_mode(idl_in, ModeLabel::idler, circumference);
  // The idler resonance is pinned to the exact frequency-matching condition;
  // the configured wavelength is a sanity cross-check only.
  const double idler_pinned =
      2.0 * out.ring.pump.resonance_freq - out.ring.signal.resonance_freq + out.ring.freq_mismatch;
  const double lam_m = idl_in.wavelength_nm * 1e-9;
  const double tol_02nm = units::two_pi * units::c_light / (lam_m * lam_m) * 0.2e-9;
  if (std::abs(idler_pinned - out.ring.idler.resonance_freq) > tol_02nm)
    fail("$.ring.modes.idler.wavelength_nm",
         "inconsistent with frequency matching by more than 0.2 nm");
  out.ring.idler.resonance_freq = idler_pinned;
  out.ring.idler.center_freq = idler_pinned;

  const json& pp = root["pump_pulse"];
  check_keys(pp, "$.pump_pulse",
             {"shape", "energy_pj", "intensity_fwhm_mhz", "detuning_ghz", "round_trips",
              "center_time_ns"});
  if (pp.contains("shape") && pp["shape"].get<std::string>() != "gaussian")
    fail("$.pump_pulse.shape", "only 'gaussian' is supported in config files");
  out.pulse.shape = PulseShape::gaussian;
  out.pulse.energy = units::joule_from_pj(require_number(pp, "$.pump_pulse", "energy_pj"));
  out.pulse.intensity_fwhm_hz =
      require_number(pp, "$.pump_pulse", "intensity_fwhm_mhz") * 1e6;
  out.pulse.detuning = units::rad_s_from_ghz(number_or(pp, "detuning_ghz", 0.0));
  out.pulse.n_round_trips = int(number_or(pp, "round_trips", 65536.0));
  out.pulse.center_time = number_or(pp, "center_time_ns", 0.0) * 1e-9;
  out.pulse.time_step = out.ring.pump.round_trip_time;

  if (root.contains("grid")) {
    check_keys(root["grid"], "$.grid", {"n_points", "span_fwhm"});
    out.options.grid_n = int(number_or(root["grid"], "n_points", 201.0));
    out.options.span_fwhm = number_or(root["grid"], "span_fwhm", 32.0);
  }
  if (root.contains("solver")) {
    check_keys(root["solver"], "$.solver", {"z_steps"});
    out.options.z_steps = int(number_or(root["solver"], "z_steps", 64.0));
  }
  out.options.channels = out.ring.phantom_channels;
  out.ring.validate();
  if (out.pulse.energy < 0.0) fail("$.pump_pulse.energy_pj", "must be >= 0");
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const ParsedConfig& cfg) {
  json root;
  json& ring = root["ring"];
  ring["circumference_mm"] = cfg.ring.circumference * 1e3;
  ring["phantom_channels"] = cfg.ring.phantom_channels;
  ring["gamma_sfwm_per_w_m"] = cfg.ring.gamma_sfwm;
  ring["phase_mismatch_per_m"] = cfg.ring.phase_mismatch;
  ring["freq_mismatch_ghz"] = units::ghz_from_rad_s(cfg.ring.freq_mismatch);
  auto mode_json = [&](const ModeParams& m) {
    json j;
    j["wavelength_nm"] = units::two_pi * units::c_light / m.resonance_freq * 1e9;
    j["coupling_rho_sq"] = m.coupling_rho * m.coupling_rho;
    j["loss_db_per_m"] = units::db_per_m_from_alpha(m.alpha);
    j["fsr_ghz"] = 1.0 / m.round_trip_time / 1e9;
    if (m.label == ModeLabel::pump)
      j["gamma_spm_per_w_m"] = m.gamma_spm;
    else
      j["gamma_xpm_per_w_m"] = m.gamma_xpm;
    return j;
  };
  ring["modes"]["pump"] = mode_json(cfg.ring.pump);
  ring["modes"]["signal"] = mode_json(cfg.ring.signal);
  ring["modes"]["idler"] = mode_json(cfg.ring.idler);
  json& pp = root["pump_pulse"];
  pp["shape"] = "gaussian";
  pp["energy_pj"] = units::pj_from_joule(cfg.pulse.energy);
  pp["intensity_fwhm_mhz"] = cfg.pulse.intensity_fwhm_hz / 1e6;
  pp["detuning_ghz"] = units::ghz_from_rad_s(cfg.pulse.detuning);
  pp["round_trips"] = cfg.pulse.n_round_trips;
  pp["center_time_ns"] = cfg.pulse.center_time * 1e9;
  root["grid"]["n_points"] = cfg.options.grid_n;
  root["grid"]["span_fwhm"] = cfg.options.span_fwhm;
  root["solver"]["z_steps"] = cfg.options.z_steps;
  return root.dump(2) + "\n";
}

std::string config_hash(const ParsedConfig& cfg) {
  const std::string canon = emit_config(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_double(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  return "0";
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["tool_version"] = m.tool_version;
  j["config_hash"] = m.config_hash;
  j["timestamp_utc"] = m.timestamp_utc;
  j["subcommand"] = m.subcommand;
  j["grid_n"] = m.grid_n;
  j["span_fwhm"] = m.span_fwhm;
  j["z_steps"] = m.z_steps;
  j["channels"] = m.channels;
  j["toggles"]["spm"] = m.spm;
  j["toggles"]["xpm"] = m.xpm;
  j["threads"] = m.threads;
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t i = 0; i < table.header.size(); ++i)
    out << table.header[i] << (i + 1 < table.header.size() ? "," : "\n");
  for (const auto& row : table.rows)
    for (size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string photon_record_json(const sweep::SweepRecord& r, bool with_williamson) {
  json j;
  j["energy_pJ"] = units::pj_from_joule(r.energy);
  j["detuning_GHz"] = units::ghz_from_rad_s(r.detuning);
  j["n_s"] = r.photon.n_s;
  j["n_i"] = r.photon.n_i;
  j["g2_s"] = r.photon.g2_s;
  j["g2_si"] = r.photon.g2_si;
  j["K"] = r.photon.schmidt_K;
  j["P"] = r.photon.purity_P;
  j["heralding"] = r.photon.heralding_i;
  if (with_williamson) {
    j["squeezing_db"] = r.squeezing_db;
    j["antisqueezing_db"] = r.antisqueezing_db;
    j["state_purity"] = r.state_purity;
  }
  if (r.failed) j["error"] = r.error;
  return j.dump(2) + "\n";
}

}  // namespace ringsq::io
