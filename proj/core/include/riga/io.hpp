#ifndef RIGA_IO_HPP
#define RIGA_IO_HPP

#include <optional>
#include <string>

#include "riga/driver.hpp"
#include "riga/models.hpp"
#include "riga/spectra.hpp"

namespace riga {

// A fully resolved run: system, gate, driver config and output toggles.
struct RunSetup {
  SystemModel system;
  GateSpec gate;
  RigaConfig config;
  std::optional<Matrix> forbidden;  // populated for builtin systems with a truncation
  std::string builtin;              // builtin system name, empty for explicit matrices
  std::string gate_name;
  // Builtin parameters kept around so verification can rebuild at a higher
  // truncation.
  TransmonPairParams transmon_params{};
  CavityTransmonParams cavity_params{};
  QubitChainParams chain_params{};

  std::string out_dir = "out";
  bool write_pulses = true;
  bool write_report = true;
  bool write_spectra = true;
  bool write_convergence = true;
  std::optional<SeedCoefficients> seed_coefficients;

  PulseSet make_seed() const;
};

// Parse and cross-validate a JSON run configuration. Throws ConfigError with
// a message naming the offending field.
RunSetup load_run_config(const std::string& path);

// pulses.csv: header "t,u_1,...,u_m"; smooth pulses one row per node,
// piecewise one row per interval with the left-edge timestamp. 17 significant
// digits so parsing reproduces the doubles exactly.
void write_pulses_csv(const std::string& path, const PulseSet& pulses, const TimeGrid& grid);
PulseSet read_pulses_csv(const std::string& path, const TimeGrid& grid);

// convergence.csv: "step,infidelity,lyapunov,goal_index,max_pulse,wall_ms".
void write_convergence_csv(const std::string& path, const std::vector<StepRecord>& records);

// spectra.csv: "f,avg,u_1,...,u_m".
void write_spectra_csv(const std::string& path, const Spectrum& spectrum);

std::string report_to_json(const RunReport& report, const RunSetup& setup);
void write_report_json(const std::string& path, const RunReport& report, const RunSetup& setup);

// Structural validation of a serialized report (the keys and types the file
// contract promises). Returns an explanation when invalid.
bool validate_report_json(const std::string& text, std::string* why = nullptr);

// Write-temp-then-rename.
void atomic_write_file(const std::string& path, const std::string& contents);

// Run all artifact writers selected in `setup`.
void write_run_artifacts(const RunReport& report, const RunSetup& setup);

}  // namespace riga

#endif
