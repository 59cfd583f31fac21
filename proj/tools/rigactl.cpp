// Command-line front end: run the iterative synthesis, the GRAPE baseline, or
// verification passes over finished pulse files.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "riga/io.hpp"
#include "riga/unitary.hpp"

namespace fs = std::filesystem;
using namespace riga;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoConvergence = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> rng_seed;
  std::optional<int> max_steps;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "run configuration (JSON)")->required();
  cmd->add_option("--out", flags.out_dir, "output directory (overrides the config)");
  cmd->add_option("--seed", flags.rng_seed, "override the seed RNG value");
  cmd->add_option("--max-steps", flags.max_steps, "override the step limit");
  cmd->add_flag("--quiet", flags.quiet, "suppress per-step progress");
}

RunSetup load_setup(const CommonFlags& flags) {
  RunSetup setup = load_run_config(flags.config_path);
  if (!flags.out_dir.empty()) setup.out_dir = flags.out_dir;
  if (flags.rng_seed) {
    setup.config.seed.rng_seed = *flags.rng_seed;
    setup.seed_coefficients.reset();  // an explicit seed overrides a replay file
  }
  if (flags.max_steps) setup.config.max_steps = *flags.max_steps;
  return setup;
}

int exit_code_for(const RunReport& report) {
  switch (report.termination) {
    case Termination::target_reached:
      return kExitOk;
    case Termination::max_steps:
    case Termination::stagnation:
    case Termination::no_reachable_goal:
      return kExitNoConvergence;
    case Termination::cayley_blowup:
      return kExitError;
  }
  return kExitError;
}

void print_summary(const RunReport& report, bool quiet) {
  if (!quiet) {
    for (const StepRecord& r : report.records) {
      std::cout << "step " << r.step << "  infidelity " << r.infidelity << "  lyapunov "
                << r.lyapunov << "  goal " << r.goal_index << "  max|u| " << r.max_pulse
                << "\n";
    }
  }
  std::cout << "termination: " << termination_name(report.termination)
            << "  final infidelity: " << report.final_infidelity << "  steps: "
            << report.steps_completed << "  wall: " << report.wall_seconds << " s\n";
}

int cmd_run(const CommonFlags& flags, bool force_grape) {
  RunSetup setup = load_setup(flags);
  if (force_grape) setup.config.variant = Variant::piecewise;
  const PulseSet seed = setup.make_seed();
  const RunReport report = force_grape ? run_grape(setup.system, setup.gate, setup.config, seed)
                                       : run_riga(setup.system, setup.gate, setup.config, seed);
  write_run_artifacts(report, setup);
  print_summary(report, flags.quiet);
  return exit_code_for(report);
}

int cmd_verify(const CommonFlags& flags, const std::string& pulses_path) {
  RunSetup setup = load_setup(flags);
  const TimeGrid grid = setup.config.grid();
  const PulseSet pulses = read_pulses_csv(pulses_path, grid);
  const Matrix id = Matrix::Identity(setup.system.dim(), setup.system.dim());

  Trajectory traj;
  if (pulses.mode == PulseMode::smooth) {
    traj = propagate_smooth_open(setup.system, pulses, grid, id).trajectory;
  } else {
    traj = propagate_pc_forward(setup.system, pulses, grid, id);
  }
  const double base_infidelity = infidelity(traj.back(), setup.gate);

  const double h1 = halfstep_infidelity(setup.system, pulses, grid, 1);
  const double h2 = halfstep_infidelity(setup.system, pulses, grid, 2);

  nlohmann::json j;
  j["final_infidelity"] = std::clamp(base_infidelity, 0.0, 1.0);
  j["half_step_infidelity"] = h1;
  j["half_step_infidelity_refined"] = h2;
  // The infidelity is quadratic in the propagator increment, so the
  // order-of-accuracy ratio is read off its square root.
  j["order_ratio"] = h2 > 0.0 ? std::sqrt(h1 / h2) : 0.0;
  j["unitarity_defect"] = traj.max_unitarity_defect();

  if (setup.builtin == "transmon_pair") {
    TransmonPairParams bigger = setup.transmon_params;
    bigger.levels += 2;
    TransmonPairSystem big = build_transmon_pair(bigger);
    const GateSpec& embedded = setup.gate_name == "state_prep" ? big.state_prep : big.cnot;
    const double resim = resimulate(big.system, pulses, grid, embedded);
    j["resimulation"] = {{"levels", bigger.levels},
                         {"infidelity", std::clamp(resim, 0.0, 1.0)},
                         {"relative_change",
                          base_infidelity > 0.0 ? std::abs(resim - base_infidelity) / base_infidelity
                                                : 0.0}};
  } else if (setup.builtin == "cavity_transmon") {
    CavityTransmonParams bigger = setup.cavity_params;
    bigger.cavity_levels += 5;
    bigger.transmon_levels += 2;
    CavityTransmonSystem big = build_cavity_transmon(bigger);
    const double resim = resimulate(big.system, pulses, grid, big.hadamard);
    j["resimulation"] = {{"cavity_levels", bigger.cavity_levels},
                         {"transmon_levels", bigger.transmon_levels},
                         {"infidelity", std::clamp(resim, 0.0, 1.0)},
                         {"relative_change",
                          base_infidelity > 0.0 ? std::abs(resim - base_infidelity) / base_infidelity
                                                : 0.0}};
  }

  fs::create_directories(setup.out_dir);
  if (setup.forbidden) {
    std::ostringstream csv;
    csv << "t,forbidden,good\n";
    for (size_t s = 0; s < traj.samples.size(); ++s) {
      csv << grid.time(static_cast<int>(s)) << ","
          << forbidden_population(traj.samples[s], setup.gate.e, *setup.forbidden) << ","
          << good_population(traj.samples[s], setup.gate) << "\n";
    }
    atomic_write_file((fs::path(setup.out_dir) / "populations.csv").string(), csv.str());
    j["populations_csv"] = "populations.csv";
  }

  atomic_write_file((fs::path(setup.out_dir) / "verify.json").string(), j.dump(2));
  if (!flags.quiet) std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("RIGA_THREADS")) {
    Eigen::setNbThreads(std::atoi(threads));
  }

  CLI::App app{"Lyapunov-based pulse synthesis for encoded quantum gates"};
  app.require_subcommand(1);

  CommonFlags run_flags, grape_flags, verify_flags;
  std::string pulses_path;

  CLI::App* run = app.add_subcommand("run", "iterative closed-loop synthesis");
  add_common(run, run_flags);
  CLI::App* grape = app.add_subcommand("grape", "first-order gradient baseline");
  add_common(grape, grape_flags);
  CLI::App* verify = app.add_subcommand("verify", "numerical checks over finished pulses");
  add_common(verify, verify_flags);
  verify->add_option("--pulses", pulses_path, "pulses.csv from a completed run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags, /*force_grape=*/false);
    if (grape->parsed()) return cmd_run(grape_flags, /*force_grape=*/true);
    if (verify->parsed()) return cmd_verify(verify_flags, pulses_path);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
