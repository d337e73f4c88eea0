#include <cstdint>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nuimlc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multilevel coding for non-uniform inputs and rateless BSC transmission"};
  app.require_subcommand(1);

  using namespace nuimlc::cli;

  // rates-sweep-h
  double p1 = 0.25, h = 0.3, h_min = 0.01, h_max = 0.49;
  std::size_t levels = 2, steps = 49, reps = 4, frames = 100, trials = 20;
  std::uint64_t seed = 1;
  std::string config_path, out_path, mode = "ratio";
  std::vector<double> p_list, h_list;
  std::vector<std::size_t> n_list;
  long long mapper_k = -1;
  double mapper_p1 = -1.0;

  auto* sweep_h_cmd = app.add_subcommand("rates-sweep-h", "rate curves vs crossover h at fixed dyadic p1");
  sweep_h_cmd->add_option("--p1", p1, "input probability of a one (dyadic at --levels)");
  sweep_h_cmd->add_option("--levels", levels, "mapper bit levels m");
  sweep_h_cmd->add_option("--h-min", h_min, "first grid crossover");
  sweep_h_cmd->add_option("--h-max", h_max, "last grid crossover");
  sweep_h_cmd->add_option("--steps", steps, "grid size");
  sweep_h_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* sweep_p_cmd = app.add_subcommand("rates-sweep-p", "rate curves vs p1 at fixed h");
  sweep_p_cmd->add_option("--h", h, "channel crossover");
  sweep_p_cmd->add_option("--levels", levels, "mapper bit levels m");
  sweep_p_cmd->add_option("--steps", steps, "grid size over p1 in [0, 1/2]");
  sweep_p_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* rep_cmd = app.add_subcommand("repetition-scan", "repetition rate ratio or stacking-loss scan");
  rep_cmd->add_option("--h", h, "channel crossover");
  rep_cmd->add_option("--m", reps, "repetition count");
  rep_cmd->add_option("--mode", mode, "\"ratio\" or \"loss\"");
  rep_cmd->add_option("--p-list", p_list, "input probabilities (ratio mode)")->delimiter(',');
  rep_cmd->add_option("--N-list", n_list, "layer counts (loss mode)")->delimiter(',');
  rep_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* sim_mlc_cmd = app.add_subcommand("sim-mlc", "Monte Carlo MLC encode/decode over a BSC");
  sim_mlc_cmd->add_option("--config", config_path, "mlc config or build-recipe file")->required();
  sim_mlc_cmd->add_option("--h", h, "true channel crossover");
  sim_mlc_cmd->add_option("--frames", frames, "number of frames");
  sim_mlc_cmd->add_option("--seed", seed, "base seed");
  sim_mlc_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* sim_rl_cmd = app.add_subcommand("sim-rateless", "rateless layered-repetition trials");
  sim_rl_cmd->add_option("--config", config_path, "rateless config file")->required();
  sim_rl_cmd->add_option("--h-list", h_list, "true crossovers to sweep")->delimiter(',')->required();
  sim_rl_cmd->add_option("--trials", trials, "trials per crossover");
  sim_rl_cmd->add_option("--seed", seed, "base seed");
  sim_rl_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* mapper_cmd = app.add_subcommand("mapper-build", "build and print a threshold mapper");
  mapper_cmd->add_option("--levels", levels, "mapper bit levels m");
  mapper_cmd->add_option("--k", mapper_k, "threshold count (P(X=1) = k/2^m)");
  mapper_cmd->add_option("--p1", mapper_p1, "target probability, dyadically approximated");
  mapper_cmd->add_option("--out", out_path, "optional output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (sweep_h_cmd->parsed()) {
    return run_guarded("rates-sweep-h",
                       [&] { cmd_rates_sweep_h(p1, levels, h_min, h_max, steps, out_path); });
  }
  if (sweep_p_cmd->parsed()) {
    return run_guarded("rates-sweep-p", [&] { cmd_rates_sweep_p(h, levels, steps, out_path); });
  }
  if (rep_cmd->parsed()) {
    return run_guarded("repetition-scan",
                       [&] { cmd_repetition_scan(h, reps, p_list, n_list, mode, out_path); });
  }
  if (sim_mlc_cmd->parsed()) {
    return run_guarded("sim-mlc",
                       [&] { cmd_sim_mlc(config_path, h, frames, seed, out_path); });
  }
  if (sim_rl_cmd->parsed()) {
    return run_guarded("sim-rateless",
                       [&] { cmd_sim_rateless(config_path, h_list, trials, seed, out_path); });
  }
  if (mapper_cmd->parsed()) {
    return run_guarded("mapper-build",
                       [&] { cmd_mapper_build(levels, mapper_k, mapper_p1, out_path); });
  }
  return kExitValidation;
}
