#include "nuimlc/rate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nuimlc {

namespace {

void check_alphabets(const DeterministicMapper& mapper, const Dmc& channel) {
  if (mapper.output_alphabet_size() != channel.num_inputs()) {
    throw std::invalid_argument("mapper output alphabet does not match channel input alphabet");
  }
}

// Joint law of (X, Y) with X drawn from the mapper-induced distribution.
JointTable channel_joint(const DeterministicMapper& mapper, const Dmc& channel) {
  const std::size_t nx = channel.num_inputs();
  const std::size_t ny = channel.num_outputs();
  const auto px = induced_distribution(mapper);
  std::vector<double> probs(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) probs[x * ny + y] = px[x] * channel.transition(x, y);
  }
  return JointTable({nx, ny}, std::move(probs));
}

}  // namespace

LayerRateReport layer_rates(const DeterministicMapper& mapper, const Dmc& channel) {
  check_alphabets(mapper, channel);
  const std::size_t m = mapper.levels();
  const std::size_t words = mapper.num_words();
  const std::size_t ny = channel.num_outputs();
  const double pw = 1.0 / static_cast<double>(words);

  LayerRateReport report;
  report.channel_rate = mutual_information(channel_joint(mapper, channel));

  for (std::size_t level = 1; level <= m; ++level) {
    // joint over (W_level, Y, W_1..W_{level-1})
    const std::size_t nprefix = std::size_t{1} << (level - 1);
    std::vector<double> probs(2 * ny * nprefix, 0.0);
    for (std::size_t w = 0; w < words; ++w) {
      const std::size_t bit = DeterministicMapper::level_bit(w, level, m) ? 1 : 0;
      const std::size_t prefix = w >> (m - level + 1);
      const std::uint32_t x = mapper.map(w);
      for (std::size_t y = 0; y < ny; ++y) {
        probs[(bit * ny + y) * nprefix + prefix] += pw * channel.transition(x, y);
      }
    }
    report.per_layer_rates.push_back(
        conditional_mutual_information(JointTable({2, ny, nprefix}, std::move(probs))));
  }
  for (double r : report.per_layer_rates) report.total += r;
  return report;
}

double bicm_rate(const DeterministicMapper& mapper, const Dmc& channel) {
  check_alphabets(mapper, channel);
  const std::size_t m = mapper.levels();
  const std::size_t words = mapper.num_words();
  const std::size_t ny = channel.num_outputs();
  const double pw = 1.0 / static_cast<double>(words);

  double total = 0.0;
  for (std::size_t level = 1; level <= m; ++level) {
    std::vector<double> probs(2 * ny, 0.0);
    for (std::size_t w = 0; w < words; ++w) {
      const std::size_t bit = DeterministicMapper::level_bit(w, level, m) ? 1 : 0;
      const std::uint32_t x = mapper.map(w);
      for (std::size_t y = 0; y < ny; ++y) probs[bit * ny + y] += pw * channel.transition(x, y);
    }
    total += mutual_information(JointTable({2, ny}, std::move(probs)));
  }
  return total;
}

double timeshare_zeros_rate(double p1, double h) {
  if (!(p1 >= 0.0 && p1 <= 0.5)) {
    throw std::domain_error("timeshare_zeros_rate: p1 must lie in [0, 1/2]");
  }
  return 2.0 * p1 * (1.0 - binary_entropy(h));
}

std::vector<SweepHRow> sweep_h(double p1, std::size_t levels, const std::vector<double>& h_grid) {
  const double words = static_cast<double>(std::size_t{1} << levels);
  const double k_real = p1 * words;
  const double k_round = std::round(k_real);
  if (std::abs(k_real - k_round) > 1e-9 || p1 < 0.0 || p1 > 0.5) {
    throw std::invalid_argument("sweep_h: p1 must be dyadic at the given number of levels, in [0, 1/2]");
  }
  const auto mapper = build_threshold_mapper(levels, static_cast<std::uint32_t>(k_round));
  std::vector<SweepHRow> rows;
  rows.reserve(h_grid.size());
  for (double h : h_grid) {
    if (!(h >= 0.0 && h <= 0.5)) {
      throw std::domain_error("sweep_h: grid values must lie in [0, 1/2]");
    }
    const Dmc channel = Dmc::bsc(h);
    SweepHRow row;
    row.h = h;
    row.mlc = layer_rates(mapper, channel).total;
    row.bicm = bicm_rate(mapper, channel);
    row.ts_zeros = timeshare_zeros_rate(p1, h);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepPRow> sweep_p(double h, std::size_t levels, const std::vector<double>& p_grid) {
  const std::size_t words = std::size_t{1} << levels;
  // dyadic anchor rates for the time-share envelope
  std::vector<double> dyadic_rate(words + 1);
  for (std::size_t k = 0; k <= words; ++k) {
    dyadic_rate[k] = bsc_nui_rate(static_cast<double>(k) / static_cast<double>(words), h);
  }
  std::vector<SweepPRow> rows;
  rows.reserve(p_grid.size());
  for (double p1 : p_grid) {
    if (!(p1 >= 0.0 && p1 <= 0.5)) {
      throw std::domain_error("sweep_p: grid values must lie in [0, 1/2]");
    }
    SweepPRow row;
    row.p1 = p1;
    row.mlc = bsc_nui_rate(p1, h);
    const TimeShareSplit split = timeshare_split(p1, levels);
    row.envelope =
        split.lambda * dyadic_rate[split.k] + (1.0 - split.lambda) * dyadic_rate[split.k + 1];
    row.ts_zeros = timeshare_zeros_rate(p1, h);
    rows.push_back(row);
  }
  return rows;
}

LayeringChainReport layering_chain_identity(const std::vector<double>& p_list, double h) {
  const std::size_t n = p_list.size();
  if (n == 0 || n > 12) {
    throw std::invalid_argument("layering_chain_identity: need 1 <= layers <= 12");
  }
  for (double p : p_list) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("layering_chain_identity: bad p");
  }
  if (!(h >= 0.0 && h <= 1.0)) throw std::domain_error("layering_chain_identity: bad h");

  LayeringChainReport report;

  // direct route: layer i over effective crossover (p_1(+)...(+)p_{i-1})(+)h
  double interference = 0.0;  // XOR of layers below is Bernoulli(interference)
  for (std::size_t i = 0; i < n; ++i) {
    const double h_eff = binary_convolve(interference, h);
    report.per_layer_direct.push_back(bsc_nui_rate(p_list[i], h_eff));
    report.direct_sum += report.per_layer_direct.back();
    interference = binary_convolve(interference, p_list[i]);
  }

  // exact joint of (X_1..X_n, E) -> probabilities of every pattern
  const std::size_t patterns = std::size_t{1} << (n + 1);
  std::vector<double> prob(patterns);
  for (std::size_t pat = 0; pat < patterns; ++pat) {
    double pr = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool xi = (pat >> i) & 1u;
      pr *= xi ? p_list[i] : 1.0 - p_list[i];
    }
    const bool e = (pat >> n) & 1u;
    pr *= e ? h : 1.0 - h;
    prob[pat] = pr;
  }
  auto x_bit = [](std::size_t pat, std::size_t i) { return (pat >> i) & 1u; };
  auto y_n = [&](std::size_t pat) {
    std::size_t acc = (pat >> n) & 1u;
    for (std::size_t i = 0; i < n; ++i) acc ^= x_bit(pat, i);
    return acc;
  };

  // conditional chain: sum_i I(X_i; Y_n | X_{i+1},...,X_n)
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ncond = std::size_t{1} << (n - 1 - i);
    std::vector<double> joint(2 * 2 * ncond, 0.0);
    for (std::size_t pat = 0; pat < patterns; ++pat) {
      const std::size_t a = x_bit(pat, i);
      const std::size_t b = y_n(pat);
      std::size_t c = 0;
      for (std::size_t j = i + 1; j < n; ++j) c = (c << 1) | x_bit(pat, j);
      joint[(a * 2 + b) * ncond + c] += prob[pat];
    }
    report.conditional_chain +=
        conditional_mutual_information(JointTable({2, 2, ncond}, std::move(joint)));
  }

  // stack route: I(X_all; Y_n)
  std::vector<double> joint_all(4, 0.0);
  for (std::size_t pat = 0; pat < patterns; ++pat) {
    std::size_t x_all = 0;
    for (std::size_t i = 0; i < n; ++i) x_all ^= x_bit(pat, i);
    joint_all[x_all * 2 + y_n(pat)] += prob[pat];
  }
  report.stack_rate = mutual_information(JointTable({2, 2}, std::move(joint_all)));

  report.max_discrepancy =
      std::max({std::abs(report.direct_sum - report.conditional_chain),
                std::abs(report.direct_sum - report.stack_rate),
                std::abs(report.conditional_chain - report.stack_rate)});
  return report;
}

}  // namespace nuimlc
