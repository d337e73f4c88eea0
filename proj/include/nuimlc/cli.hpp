#ifndef NUIMLC_CLI_HPP
#define NUIMLC_CLI_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nuimlc::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

// exit codes: 0 success, 2 validation error, 1 runtime failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

// Every command writes its CSV to out_path plus a JSON manifest at
// <out_path>.manifest.json carrying the resolved parameters; re-running a
// command with the manifest's parameters reproduces the CSV byte-for-byte.

void cmd_rates_sweep_h(double p1, std::size_t levels, double h_min, double h_max,
                       std::size_t steps, const std::string& out_path);

void cmd_rates_sweep_p(double h, std::size_t levels, std::size_t steps,
                       const std::string& out_path);

// mode "ratio": rows over p_list with I(X;Y^m)/(m I(X;Y)).
// mode "loss": rows over n_list with the total stacking loss N Delta.
void cmd_repetition_scan(double h, std::size_t reps, const std::vector<double>& p_list,
                         const std::vector<std::size_t>& n_list, const std::string& mode,
                         const std::string& out_path);

void cmd_sim_mlc(const std::string& config_path, double true_h, std::size_t frames,
                 std::uint64_t base_seed, const std::string& out_path);

void cmd_sim_rateless(const std::string& config_path, const std::vector<double>& h_list,
                      std::size_t trials, std::uint64_t base_seed, const std::string& out_path);

// Prints the mapper line to stdout and, when out_path is nonempty, writes it
// there. Exactly one of k or p1 selects the threshold; p1 uses the dyadic
// approximation at the given number of levels.
void cmd_mapper_build(std::size_t levels, long long k, double p1, const std::string& out_path);

// maps exceptions from a command body onto the exit-code contract
int run_guarded(const char* command_name, const std::function<void()>& body);

}  // namespace nuimlc::cli

#endif  // NUIMLC_CLI_HPP
