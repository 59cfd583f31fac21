#include "riga/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace riga {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path + ": " + err.what());
  }
  return j;
}

Matrix parse_complex_matrix(const json& rows, const std::string& field) {
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError(field + ": expected a nonempty array of rows");
  }
  const Index nr = static_cast<Index>(rows.size());
  const Index ncols = static_cast<Index>(rows.front().size());
  Matrix m(nr, ncols);
  for (Index r = 0; r < nr; ++r) {
    const json& row = rows[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != ncols) {
      throw ConfigError(field + ": ragged rows");
    }
    for (Index c = 0; c < ncols; ++c) {
      const json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_array() || cell.size() != 2) {
        throw ConfigError(field + ": entries must be [re, im] pairs");
      }
      m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

void parse_system(const json& j, RunSetup& setup) {
  if (!j.contains("system")) throw ConfigError("config: missing 'system'");
  const json& sys = j.at("system");
  if (sys.contains("builtin")) {
    setup.builtin = sys.at("builtin").get<std::string>();
    const json params = sys.contains("params") ? sys.at("params") : json::object();
    if (setup.builtin == "transmon_pair") {
      auto p = TransmonPairParams::defaults(get_or<int>(params, "levels", 7));
      const double two_pi = 2.0 * M_PI;
      if (params.contains("omega1")) p.omega1 = two_pi * params.at("omega1").get<double>();
      if (params.contains("omega2")) p.omega2 = two_pi * params.at("omega2").get<double>();
      if (params.contains("alpha")) {
        p.alpha1 = p.alpha2 = two_pi * params.at("alpha").get<double>();
      }
      if (params.contains("coupling")) p.coupling = two_pi * params.at("coupling").get<double>();
      if (params.contains("drive")) p.drive_strength = two_pi * params.at("drive").get<double>();
      setup.transmon_params = p;
      TransmonPairSystem built = build_transmon_pair(p);
      setup.system = built.system;
      setup.forbidden = built.forbidden;
    } else if (setup.builtin == "cavity_transmon") {
      auto p = CavityTransmonParams::defaults(get_or<int>(params, "cavity_levels", 20),
                                              get_or<int>(params, "transmon_levels", 4));
      p.coherent_amplitude = get_or<double>(params, "coherent_amplitude", 1.0);
      setup.cavity_params = p;
      CavityTransmonSystem built = build_cavity_transmon(p);
      setup.system = built.system;
      setup.forbidden = built.forbidden;
    } else if (setup.builtin == "qubit_chain") {
      auto p = QubitChainParams::defaults(get_required<int>(params, "qubits", "system.params"));
      setup.chain_params = p;
      setup.system = build_qubit_chain(p).system;
    } else {
      throw ConfigError("system.builtin: unknown system '" + setup.builtin + "'");
    }
  } else {
    setup.system.s0 = parse_complex_matrix(
        j.at("system").contains("s0") ? sys.at("s0") : json(), "system.s0");
    if (!sys.contains("s")) throw ConfigError("system: missing 's'");
    for (size_t k = 0; k < sys.at("s").size(); ++k) {
      setup.system.s.push_back(
          parse_complex_matrix(sys.at("s")[k], "system.s[" + std::to_string(k) + "]"));
    }
  }
  setup.system.validate();
}

void parse_gate(const json& j, RunSetup& setup) {
  if (!j.contains("gate")) throw ConfigError("config: missing 'gate'");
  const json& gate = j.at("gate");
  if (gate.contains("builtin")) {
    setup.gate_name = gate.at("builtin").get<std::string>();
    if (setup.builtin == "transmon_pair") {
      TransmonPairSystem built = build_transmon_pair(setup.transmon_params);
      if (setup.gate_name == "cnot") {
        setup.gate = built.cnot;
      } else if (setup.gate_name == "state_prep") {
        setup.gate = built.state_prep;
      } else {
        throw ConfigError("gate.builtin: transmon_pair offers 'cnot' or 'state_prep'");
      }
    } else if (setup.builtin == "cavity_transmon") {
      if (setup.gate_name != "hadamard") {
        throw ConfigError("gate.builtin: cavity_transmon offers 'hadamard'");
      }
      setup.gate = build_cavity_transmon(setup.cavity_params).hadamard;
    } else if (setup.builtin == "qubit_chain") {
      if (setup.gate_name != "chain_target") {
        throw ConfigError("gate.builtin: qubit_chain offers 'chain_target'");
      }
      setup.gate = build_qubit_chain(setup.chain_params).gate;
    } else {
      throw ConfigError("gate.builtin requires a builtin system");
    }
  } else {
    setup.gate_name = "explicit";
    setup.gate.e = parse_complex_matrix(get_required<json>(gate, "E", "gate"), "gate.E");
    setup.gate.f = parse_complex_matrix(get_required<json>(gate, "F", "gate"), "gate.F");
  }
  setup.gate.validate();
  if (setup.gate.space_dim() != setup.system.dim()) {
    throw ConfigError("gate: dimension does not match the system");
  }
}

void parse_riga(const json& j, RunSetup& setup, const std::string& config_dir) {
  if (!j.contains("riga")) throw ConfigError("config: missing 'riga'");
  const json& r = j.at("riga");
  RigaConfig& cfg = setup.config;
  cfg.gain = get_required<double>(r, "gain", "riga");
  cfg.t_final = get_required<double>(r, "t_final", "riga");
  cfg.steps = get_required<int>(r, "n_sim", "riga");
  cfg.target_infidelity = get_or<double>(r, "target_infidelity", 1e-3);
  cfg.max_steps = get_or<int>(r, "max_steps", 300);

  const std::string variant = get_or<std::string>(r, "variant", "smooth");
  if (variant == "smooth") {
    cfg.variant = Variant::smooth;
  } else if (variant == "piecewise") {
    cfg.variant = Variant::piecewise;
  } else {
    throw ConfigError("riga.variant: expected 'smooth' or 'piecewise'");
  }

  const std::string lyap = get_or<std::string>(r, "lyapunov", "auto");
  if (lyap == "auto") {
    cfg.lyapunov = LyapunovChoice::automatic;
  } else if (lyap == "partial") {
    cfg.lyapunov = LyapunovChoice::partial;
  } else if (lyap == "full") {
    cfg.lyapunov = LyapunovChoice::full;
  } else {
    throw ConfigError("riga.lyapunov: expected 'auto', 'partial' or 'full'");
  }

  const std::string strategy = get_or<std::string>(r, "strategy", "optimize_saturate");
  if (strategy == "fixed_goal") {
    cfg.strategy = GoalStrategy::fixed_goal;
  } else if (strategy == "optimize_saturate") {
    cfg.strategy = GoalStrategy::optimize_saturate;
  } else if (strategy == "goal_path") {
    cfg.strategy = GoalStrategy::goal_path;
  } else {
    throw ConfigError("riga.strategy: unknown strategy '" + strategy + "'");
  }
  cfg.path_alpha = get_or<double>(r, "path_alpha", 0.5);
  cfg.path_beta = get_or<double>(r, "path_beta", 1.0);
  cfg.theta_max = get_or<double>(r, "theta_max", M_PI / 4.0);
  cfg.allow_phase = get_or<bool>(r, "allow_phase", true);
  cfg.grape_step = get_or<double>(r, "grape_step", 0.0);
  cfg.stagnation_window = get_or<int>(r, "stagnation_window", 20);
  cfg.stagnation_rtol = get_or<double>(r, "stagnation_rtol", 1e-9);

  const std::string window = get_or<std::string>(r, "window", "none");
  if (window == "none") {
    cfg.shaping.window = WindowKind::none;
  } else if (window == "hamming") {
    cfg.shaping.window = WindowKind::hamming;
  } else {
    throw ConfigError("riga.window: expected 'none' or 'hamming'");
  }
  const std::string sat = get_or<std::string>(r, "saturation", "off");
  if (sat == "off") {
    cfg.shaping.saturation = SaturationKind::off;
  } else if (sat == "smooth") {
    cfg.shaping.saturation = SaturationKind::smooth;
  } else {
    throw ConfigError("riga.saturation: expected 'off' or 'smooth'");
  }
  cfg.shaping.u_max = get_or<double>(r, "u_max", 0.0);

  if (r.contains("seed")) {
    const json& s = r.at("seed");
    cfg.seed.harmonics = get_or<int>(s, "harmonics", 3);
    cfg.seed.period = get_or<double>(s, "period", cfg.t_final);
    cfg.seed.amplitude = get_or<double>(s, "amplitude", 0.1);
    cfg.seed.rng_seed = get_or<std::uint64_t>(s, "rng_seed", 0);
    cfg.seed.apply_window = get_or<bool>(s, "apply_window", true);
    if (s.contains("coefficients_file")) {
      fs::path file = s.at("coefficients_file").get<std::string>();
      if (file.is_relative()) file = fs::path(config_dir) / file;
      std::ifstream in(file);
      if (!in) throw ConfigError("seed.coefficients_file: cannot open " + file.string());
      std::stringstream buf;
      buf << in.rdbuf();
      setup.seed_coefficients = seed_coefficients_from_json(buf.str());
    }
  }
  cfg.validate(setup.gate);
}

}  // namespace

PulseSet RunSetup::make_seed() const {
  const PulseMode mode =
      config.variant == Variant::smooth ? PulseMode::smooth : PulseMode::piecewise;
  if (seed_coefficients) {
    return seed_from_coefficients(config.seed, *seed_coefficients, config.grid(), mode);
  }
  return generate_seed(config.seed, system.channels(), config.grid(), mode);
}

RunSetup load_run_config(const std::string& path) {
  const json j = load_json_file(path);
  RunSetup setup;
  parse_system(j, setup);
  parse_gate(j, setup);
  parse_riga(j, setup, fs::path(path).parent_path().string());
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    setup.out_dir = get_or<std::string>(o, "directory", "out");
    setup.write_pulses = get_or<bool>(o, "pulses", true);
    setup.write_report = get_or<bool>(o, "report", true);
    setup.write_spectra = get_or<bool>(o, "spectra", true);
    setup.write_convergence = get_or<bool>(o, "convergence", true);
  }
  return setup;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << contents;
  }
  fs::rename(tmp, path);
}

void write_pulses_csv(const std::string& path, const PulseSet& pulses, const TimeGrid& grid) {
  pulses.check_shape(grid);
  std::ostringstream out;
  out << "t";
  for (Index k = 0; k < pulses.channels(); ++k) out << ",u_" << (k + 1);
  out << "\n";
  for (Index s = 0; s < pulses.samples(); ++s) {
    // Piecewise rows are stamped with the interval's left edge.
    out << fmt17(grid.time(static_cast<int>(s)));
    for (Index k = 0; k < pulses.channels(); ++k) out << "," << fmt17(pulses.values(k, s));
    out << "\n";
  }
  atomic_write_file(path, out.str());
}

PulseSet read_pulses_csv(const std::string& path, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  Index channels = -1;
  {
    std::stringstream header(line);
    std::string cell;
    Index count = 0;
    while (std::getline(header, cell, ',')) ++count;
    channels = count - 1;
  }
  if (channels < 1) throw Error(path + ": no pulse columns");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<Index>(row.size()) != channels + 1) throw Error(path + ": ragged row");
    rows.push_back(std::move(row));
  }
  PulseSet out;
  if (static_cast<int>(rows.size()) == grid.steps + 1) {
    out.mode = PulseMode::smooth;
  } else if (static_cast<int>(rows.size()) == grid.steps) {
    out.mode = PulseMode::piecewise;
  } else {
    throw DimensionMismatch(path + ": row count matches neither smooth nor piecewise on this grid");
  }
  out.values.resize(channels, static_cast<Index>(rows.size()));
  for (size_t s = 0; s < rows.size(); ++s) {
    for (Index k = 0; k < channels; ++k) {
      out.values(k, static_cast<Index>(s)) = rows[s][static_cast<size_t>(k) + 1];
    }
  }
  return out;
}

void write_convergence_csv(const std::string& path, const std::vector<StepRecord>& records) {
  std::ostringstream out;
  out << "step,infidelity,lyapunov,goal_index,max_pulse,wall_ms\n";
  for (const StepRecord& r : records) {
    out << r.step << "," << fmt17(std::clamp(r.infidelity, 0.0, 1.0)) << ","
        << fmt17(r.lyapunov) << "," << r.goal_index << "," << fmt17(r.max_pulse) << ","
        << fmt17(r.wall_ms) << "\n";
  }
  atomic_write_file(path, out.str());
}

void write_spectra_csv(const std::string& path, const Spectrum& spectrum) {
  std::ostringstream out;
  out << "f,avg";
  for (Index k = 0; k < spectrum.magnitudes.rows(); ++k) out << ",u_" << (k + 1);
  out << "\n";
  for (Index bin = 0; bin < spectrum.frequencies.size(); ++bin) {
    out << fmt17(spectrum.frequencies(bin)) << "," << fmt17(spectrum.channel_average(bin));
    for (Index k = 0; k < spectrum.magnitudes.rows(); ++k) {
      out << "," << fmt17(spectrum.magnitudes(k, bin));
    }
    out << "\n";
  }
  atomic_write_file(path, out.str());
}

std::string report_to_json(const RunReport& report, const RunSetup& setup) {
  json j;
  j["schema"] = "riga-report-v1";
  j["termination"] = termination_name(report.termination);
  j["reached_target"] = report.reached_target();
  j["final_infidelity"] = std::clamp(report.final_infidelity, 0.0, 1.0);
  j["steps_completed"] = report.steps_completed;
  j["wall_seconds"] = report.wall_seconds;
  j["target_infidelity"] = setup.config.target_infidelity;
  j["gain"] = setup.config.gain;
  j["variant"] = setup.config.variant == Variant::smooth ? "smooth" : "piecewise";
  j["system"] = setup.builtin.empty() ? "explicit" : setup.builtin;
  j["gate"] = setup.gate_name;
  j["grid"] = {{"t_final", setup.config.t_final}, {"n_sim", setup.config.steps}};
  json records = json::array();
  for (const StepRecord& r : report.records) {
    records.push_back({{"step", r.step},
                       {"infidelity", std::clamp(r.infidelity, 0.0, 1.0)},
                       {"lyapunov", r.lyapunov},
                       {"goal_index", r.goal_index},
                       {"max_pulse", r.max_pulse},
                       {"wall_ms", r.wall_ms}});
  }
  j["records"] = std::move(records);
  return j.dump(2);
}

void write_report_json(const std::string& path, const RunReport& report, const RunSetup& setup) {
  atomic_write_file(path, report_to_json(report, setup));
}

bool validate_report_json(const std::string& text, std::string* why) {
  auto fail = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    return fail(err.what());
  }
  if (!j.is_object()) return fail("not an object");
  if (j.value("schema", "") != "riga-report-v1") return fail("bad schema tag");
  if (!j.contains("termination") || !j["termination"].is_string()) return fail("termination");
  if (!j.contains("final_infidelity") || !j["final_infidelity"].is_number()) {
    return fail("final_infidelity");
  }
  const double inf = j["final_infidelity"].get<double>();
  if (inf < 0.0 || inf > 1.0) return fail("final_infidelity out of [0, 1]");
  if (!j.contains("steps_completed") || !j["steps_completed"].is_number_integer()) {
    return fail("steps_completed");
  }
  if (!j.contains("wall_seconds") || !j["wall_seconds"].is_number()) return fail("wall_seconds");
  if (!j.contains("records") || !j["records"].is_array()) return fail("records");
  for (const json& r : j["records"]) {
    for (const char* key : {"step", "infidelity", "lyapunov", "goal_index", "max_pulse", "wall_ms"}) {
      if (!r.contains(key) || !r[key].is_number()) return fail(std::string("record.") + key);
    }
  }
  return true;
}

void write_run_artifacts(const RunReport& report, const RunSetup& setup) {
  fs::create_directories(setup.out_dir);
  const fs::path dir(setup.out_dir);
  const TimeGrid grid = setup.config.grid();
  if (setup.write_pulses) {
    write_pulses_csv((dir / "pulses.csv").string(), report.pulses, grid);
  }
  if (setup.write_convergence) {
    write_convergence_csv((dir / "convergence.csv").string(), report.records);
  }
  if (setup.write_spectra) {
    write_spectra_csv((dir / "spectra.csv").string(), pulse_spectrum(report.pulses, grid));
  }
  if (setup.write_report) {
    write_report_json((dir / "report.json").string(), report, setup);
  }
}

}  // namespace riga
