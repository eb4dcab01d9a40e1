#pragma once

#include <string>
#include <vector>

#include "ringsq/config.hpp"
#include "ringsq/pair_solver.hpp"
#include "ringsq/sweep.hpp"

// Configuration ingestion and result persistence. Configs and records are
// JSON, plot tables are CSV (UTF-8, comma, LF, mandatory headers, shortest
// round-trip floats). All headers carry explicit unit suffixes.
namespace ringsq::io {

struct ParsedConfig {
  RingConfig ring;
  PumpPulseSpec pulse;
  SimOptions options;
};

// Strict schema: unknown keys are rejected, all values validated, human units
// (nm, GHz, pJ, dB/m) converted to SI at this boundary.
ParsedConfig parse_config_file(const std::string& path);
ParsedConfig parse_config_text(const std::string& json_text);

// Canonical JSON of a parsed config; parse(emit(x)) == x.
std::string emit_config(const ParsedConfig& cfg);

// FNV-1a 64-bit over the canonical config text.
std::string config_hash(const ParsedConfig& cfg);

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  std::string timestamp_utc;
  std::string subcommand;
  int grid_n = 0;
  double span_fwhm = 0.0;
  int z_steps = 0;
  int channels = 1;
  bool spm = true, xpm = true;
  int threads = 1;
  std::vector<std::string> warnings;
};

std::string manifest_json(const RunManifest& m);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
void write_text(const std::string& path, const std::string& text);

std::string photon_record_json(const sweep::SweepRecord& r, bool with_williamson);

inline constexpr const char* kToolVersion = "ringsq 0.1.0";

}  // namespace ringsq::io
