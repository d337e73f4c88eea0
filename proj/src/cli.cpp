#include "nuimlc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "nuimlc/csv.hpp"
#include "nuimlc/infotheory.hpp"
#include "nuimlc/mapper.hpp"
#include "nuimlc/rate_analysis.hpp"
#include "nuimlc/rateless.hpp"
#include "nuimlc/repetition.hpp"
#include "nuimlc/rng.hpp"

namespace nuimlc::cli {

namespace {

void write_manifest(const std::string& command, const nlohmann::json& params,
                    std::uint64_t base_seed, const std::string& out_path) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["parameters"] = params;
  manifest["base_seed"] = base_seed;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["outputs"] = {out_path};
  std::ofstream f(out_path + ".manifest.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write manifest for " + out_path);
  f << manifest.dump(2) << '\n';
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return grid;
}

}  // namespace

void cmd_rates_sweep_h(double p1, std::size_t levels, double h_min, double h_max,
                       std::size_t steps, const std::string& out_path) {
  if (steps < 1) throw std::invalid_argument("rates-sweep-h: steps must be >= 1");
  if (!(h_min >= 0.0 && h_max <= 0.5 && h_min <= h_max)) {
    throw std::invalid_argument("rates-sweep-h: need 0 <= h_min <= h_max <= 1/2");
  }
  const auto rows = sweep_h(p1, levels, linspace(h_min, h_max, steps));

  CsvTable csv;
  csv.header = {"h", "mlc", "bicm", "ts_zeros"};
  for (const auto& row : rows) csv.rows.push_back({row.h, row.mlc, row.bicm, row.ts_zeros});
  csv.write(out_path);
  write_manifest("rates-sweep-h",
                 {{"p1", p1}, {"levels", levels}, {"h_min", h_min}, {"h_max", h_max}, {"steps", steps}},
                 0, out_path);
}

void cmd_rates_sweep_p(double h, std::size_t levels, std::size_t steps,
                       const std::string& out_path) {
  if (steps < 1) throw std::invalid_argument("rates-sweep-p: steps must be >= 1");
  const auto rows = sweep_p(h, levels, linspace(0.0, 0.5, steps));

  CsvTable csv;
  csv.header = {"p1", "mlc", "envelope", "ts_zeros"};
  for (const auto& row : rows) csv.rows.push_back({row.p1, row.mlc, row.envelope, row.ts_zeros});
  csv.write(out_path);
  write_manifest("rates-sweep-p", {{"h", h}, {"levels", levels}, {"steps", steps}}, 0, out_path);
}

void cmd_repetition_scan(double h, std::size_t reps, const std::vector<double>& p_list,
                         const std::vector<std::size_t>& n_list, const std::string& mode,
                         const std::string& out_path) {
  CsvTable csv;
  if (mode == "ratio") {
    if (p_list.empty()) throw std::invalid_argument("repetition-scan: empty p list");
    csv.header = {"p", "h", "m", "exact_rate", "m_times_single", "ratio"};
    for (double p : p_list) {
      const double exact = repetition_rate(p, h, reps);
      const double single = static_cast<double>(reps) * bsc_nui_rate(p, h);
      csv.rows.push_back(
          {p, h, static_cast<long long>(reps), exact, single, exact / single});
    }
  } else if (mode == "loss") {
    if (n_list.empty()) throw std::invalid_argument("repetition-scan: empty N list");
    const LossScanReport report = loss_scaling_scan(h, reps, n_list);
    csv.header = {"N", "p", "exact_rate", "m_times_single", "delta", "total_delta"};
    for (const auto& row : report.rows) {
      csv.rows.push_back({static_cast<long long>(row.num_layers), row.p, row.exact_rate,
                          row.m_times_single, row.delta, row.total_delta});
    }
  } else {
    throw std::invalid_argument("repetition-scan: mode must be \"ratio\" or \"loss\"");
  }
  csv.write(out_path);
  nlohmann::json params = {{"h", h}, {"m", reps}, {"mode", mode}};
  params["p_list"] = p_list;
  params["N_list"] = n_list;
  write_manifest("repetition-scan", params, 0, out_path);
}

void cmd_sim_mlc(const std::string& config_path, double true_h, std::size_t frames,
                 std::uint64_t base_seed, const std::string& out_path) {
  const MlcConfig config = mlc_config_load(config_path);
  const std::size_t m = config.levels();

  std::vector<long long> frame_errors(m, 0), bit_errors(m, 0);
  long long whole_frame_errors = 0;
  Rng rng(derive_seed(base_seed, 0xF0A3));
  for (std::size_t frame = 0; frame < frames; ++frame) {
    std::vector<std::vector<std::uint8_t>> messages(m);
    for (std::size_t level = 0; level < m; ++level) {
      messages[level].resize(config.level_k(level));
      for (auto& b : messages[level]) b = rng.next_bernoulli(0.5) ? 1 : 0;
    }
    const auto symbols = mlc_encode(config, messages);
    const auto received = transmit_bsc(symbols, true_h, derive_seed(base_seed, 0xC4A7, frame));
    const MsdResult result = msd_decode(config, received, true_h);

    bool frame_ok = true;
    for (std::size_t level = 0; level < m; ++level) {
      long long bits = 0;
      for (std::size_t i = 0; i < messages[level].size(); ++i) {
        bits += (messages[level][i] != result.messages[level][i]) ? 1 : 0;
      }
      bit_errors[level] += bits;
      if (bits > 0) {
        frame_errors[level]++;
        frame_ok = false;
      }
    }
    if (!frame_ok) whole_frame_errors++;
  }

  CsvTable csv;
  csv.header = {"level", "frames", "frame_errors", "bit_errors", "message_bits"};
  // level 0 row aggregates the whole frame
  csv.rows.push_back({static_cast<long long>(0), static_cast<long long>(frames),
                      whole_frame_errors, static_cast<long long>(0),
                      static_cast<long long>(config.total_k())});
  for (std::size_t level = 0; level < m; ++level) {
    csv.rows.push_back({static_cast<long long>(level + 1), static_cast<long long>(frames),
                        frame_errors[level], bit_errors[level],
                        static_cast<long long>(config.level_k(level))});
  }
  csv.write(out_path);
  write_manifest("sim-mlc", {{"config", config_path}, {"h", true_h}, {"frames", frames}},
                 base_seed, out_path);
}

void cmd_sim_rateless(const std::string& config_path, const std::vector<double>& h_list,
                      std::size_t trials, std::uint64_t base_seed, const std::string& out_path) {
  if (h_list.empty()) throw std::invalid_argument("sim-rateless: empty h list");
  const RatelessConfig config = rateless_config_load(config_path);
  for (double h : h_list) {
    if (h < config.h_min) {
      throw std::invalid_argument("sim-rateless: listed h below the configured h_min");
    }
  }
  CsvTable csv;
  csv.header = {"true_h", "seed", "blocks_used", "realized_rate", "ideal_m", "success"};
  for (double h : h_list) {
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(h * 1e9), t);
      const TrialRecord record = run_trial(config, h, seed);
      csv.rows.push_back({record.true_h, static_cast<long long>(record.seed),
                          static_cast<long long>(record.blocks_used), record.realized_rate,
                          static_cast<long long>(record.ideal_m),
                          static_cast<long long>(record.success ? 1 : 0)});
    }
  }
  csv.write(out_path);
  nlohmann::json params = {{"config", config_path}, {"trials", trials}};
  params["h_list"] = h_list;
  write_manifest("sim-rateless", params, base_seed, out_path);
}

void cmd_mapper_build(std::size_t levels, long long k, double p1, const std::string& out_path) {
  std::uint32_t chosen;
  if (k >= 0 && !(p1 >= 0.0)) {
    chosen = static_cast<std::uint32_t>(k);
  } else if (k < 0 && p1 >= 0.0) {
    chosen = dyadic_approximation(p1, levels);
  } else {
    throw std::invalid_argument("mapper-build: give exactly one of --k or --p1");
  }
  const auto mapper = build_threshold_mapper(levels, chosen);
  const std::string line = mapper_to_string(mapper);
  std::cout << line << '\n';
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << line << '\n';
    write_manifest("mapper-build", {{"levels", levels}, {"k", k}, {"p1", p1}}, 0, out_path);
  }
}

int run_guarded(const char* command_name, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << command_name << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << command_name << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << command_name << ": " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace nuimlc::cli
