#include "nuimlc/rateless.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nuimlc/infotheory.hpp"
#include "nuimlc/rate_analysis.hpp"
#include "nuimlc/repetition.hpp"
#include "nuimlc/rng.hpp"

namespace nuimlc {

namespace {

// seed-space tags so interleavers, messages, and channel noise never collide
constexpr std::uint64_t kSeedInterleaver = 0x496e746c;
constexpr std::uint64_t kSeedMessages = 0x4d736773;
constexpr std::uint64_t kSeedChannel = 0x4368616e;

// Largest capacity fraction at which flooding sum-product reliably decodes a
// near-regular column-weight-3 code of the given rate, measured against this
// module's own construction at n=4096 over the BSC and interpolated in the
// rate. The fraction collapses with the rate: near-(3,3)-regular graphs pass
// essentially no gain.
double bp_feasible_fraction(double rate) {
  static constexpr double kRates[] = {0.012, 0.03, 0.06, 0.11, 0.23, 0.35, 0.50};
  static constexpr double kFracs[] = {0.04, 0.12, 0.32, 0.43, 0.62, 0.72, 0.85};
  if (rate < 0.02) return 0.0;  // BP never engages; exhaustive ML territory
  if (rate <= kRates[0]) return kFracs[0];
  for (std::size_t i = 1; i < std::size(kRates); ++i) {
    if (rate <= kRates[i]) {
      const double t = (rate - kRates[i - 1]) / (kRates[i] - kRates[i - 1]);
      return kFracs[i - 1] + t * (kFracs[i] - kFracs[i - 1]);
    }
  }
  return kFracs[std::size(kFracs) - 1];
}

// Stand-off below the measured cliff; operating points at the cliff itself
// decode only about half the time.
constexpr double kCliffSafety = 0.85;

// Exact capacity of one mapper level under repetition: I(W_l; T | W_<l)
// where T counts ones among `reps` independent BSC(h) observations of the
// mapped symbol. Types are a sufficient statistic, so this is the soft
// information the combined demapper hands the level's decoder.
double level_repetition_capacity(const DeterministicMapper& mapper, std::size_t level, double h,
                                 std::size_t reps) {
  const std::size_t m = mapper.levels();
  const std::size_t free_levels = m - level;
  const std::size_t prefixes = std::size_t{1} << (level - 1);
  const double word_weight = 1.0 / static_cast<double>(mapper.num_words());

  // P(T=t | x) for the two symbols
  std::vector<std::array<double, 2>> type_given_x(reps + 1);
  for (std::size_t t = 0; t <= reps; ++t) {
    double lb = 0.0;  // log C(reps, t)
    for (std::size_t j = 0; j < t; ++j) {
      lb += std::log(static_cast<double>(reps - j)) - std::log(static_cast<double>(j + 1));
    }
    const double dt = static_cast<double>(t), dr = static_cast<double>(reps - t);
    type_given_x[t][0] = std::exp(lb + dt * std::log(h) + dr * std::log(1.0 - h));
    type_given_x[t][1] = std::exp(lb + dt * std::log(1.0 - h) + dr * std::log(h));
  }

  double info = 0.0;
  for (std::size_t prefix = 0; prefix < prefixes; ++prefix) {
    // mixture weights over the symbol for each value of this level's bit
    double weight[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double mass[2] = {0.0, 0.0};
    for (std::size_t bit = 0; bit < 2; ++bit) {
      const std::size_t head = ((prefix << 1) | bit) << free_levels;
      for (std::size_t tail = 0; tail < (std::size_t{1} << free_levels); ++tail) {
        weight[bit][mapper.map(head | tail)] += word_weight;
        mass[bit] += word_weight;
      }
    }
    const double p_prefix = mass[0] + mass[1];
    if (p_prefix < kProbFloor) continue;
    double h_t = 0.0, h_t_given_bit = 0.0;
    for (std::size_t t = 0; t <= reps; ++t) {
      double p_t = 0.0;
      for (std::size_t bit = 0; bit < 2; ++bit) {
        const double p_tb = (weight[bit][0] * type_given_x[t][0] +
                             weight[bit][1] * type_given_x[t][1]) / p_prefix;
        if (p_tb > kProbFloor) h_t_given_bit -= p_tb * std::log2(p_tb * 2.0);
        p_t += p_tb;
      }
      if (p_t > kProbFloor) h_t -= p_t * std::log2(p_t);
    }
    info += p_prefix * (h_t - h_t_given_bit);
  }
  return std::max(info, 0.0);
}

// Provision a level: the full (1-e) share when exhaustive ML covers it,
// otherwise the largest rate kept below the measured BP cliff at the
// reference capacity (the soft information available at the worst supported
// operating point), with the ML size as a floor when no BP point exists.
std::size_t provisioned_level_k(double level_rate, double reference_capacity, std::size_t n,
                                double backoff) {
  const double r0 = (1.0 - backoff) * level_rate;
  const auto k0 = static_cast<std::size_t>(std::floor(r0 * static_cast<double>(n)));
  if (k0 <= kMsdMlMaxK) return k0;
  const double budget = kCliffSafety * std::min(level_rate, reference_capacity);
  std::size_t k_bp = 0;
  for (std::size_t k = k0; k >= 40; --k) {
    const double rate = static_cast<double>(k) / static_cast<double>(n);
    if (rate <= bp_feasible_fraction(rate) * budget) {
      k_bp = k;
      break;
    }
  }
  return (k_bp >= 40) ? k_bp : kMsdMlMaxK;
}

std::vector<std::uint8_t> concat_layer_bits(const std::vector<std::vector<std::uint8_t>>& parts) {
  std::vector<std::uint8_t> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

// split a layer bit string into per-level messages matching the level sizes
std::vector<std::vector<std::uint8_t>> split_layer_bits(const MlcConfig& mlc,
                                                        const std::vector<std::uint8_t>& bits) {
  std::vector<std::vector<std::uint8_t>> messages(mlc.levels());
  std::size_t cursor = 0;
  for (std::size_t level = 0; level < mlc.levels(); ++level) {
    const std::size_t k = mlc.level_k(level);
    messages[level].assign(bits.begin() + cursor, bits.begin() + cursor + k);
    cursor += k;
  }
  return messages;
}

std::vector<std::uint8_t> symbols_from_codewords(
    const MlcConfig& mlc, const std::vector<std::vector<std::uint8_t>>& codewords) {
  const std::size_t n = mlc.block_length;
  std::vector<std::uint8_t> symbols(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t word = 0;
    for (std::size_t level = 0; level < mlc.levels(); ++level) {
      word = (word << 1) | codewords[level][t];
    }
    symbols[t] = static_cast<std::uint8_t>(mlc.mapper.map(word));
  }
  return symbols;
}

}  // namespace

std::uint16_t crc16(const std::vector<std::uint8_t>& bits) {
  std::uint16_t reg = 0xFFFF;
  for (std::uint8_t b : bits) {
    const bool top = (reg >> 15) & 1u;
    reg = static_cast<std::uint16_t>(reg << 1);
    if (top != ((b & 1u) != 0)) reg ^= 0x1021;
  }
  return reg;
}

RatelessConfig rateless_config_build(const RatelessBuildParams& params) {
  if (params.num_layers == 0) throw std::invalid_argument("rateless: need at least one layer");
  if (!(params.h_min > 0.0 && params.h_min < 0.5)) {
    throw std::invalid_argument("rateless: h_min must lie strictly inside (0, 1/2)");
  }
  if (params.crc_bits != 0 && params.crc_bits != 16) {
    throw std::invalid_argument("rateless: crc_bits must be 0 or 16");
  }

  const double p_layer_target =
      per_layer_probability(params.p_stack_target, params.num_layers);
  std::uint32_t k = dyadic_approximation(p_layer_target, params.mapper_levels);
  const std::uint32_t half = 1u << (params.mapper_levels - 1);
  if (k >= half) k = half - 1;  // every layer must keep p < 1/2
  if (k == 0) {
    throw std::invalid_argument("rateless: mapper_levels too small to represent the layer p");
  }
  const DeterministicMapper mapper = build_threshold_mapper(params.mapper_levels, k);
  const double p_layer = static_cast<double>(k) / static_cast<double>(1u << params.mapper_levels);

  RatelessConfig config;
  config.num_layers = params.num_layers;
  config.block_length = params.block_length;
  config.h_min = params.h_min;
  config.backoff = params.backoff;
  config.base_seed = params.base_seed;
  config.crc_bits = params.crc_bits;
  config.max_blocks = params.max_blocks;

  // mother rates and the repeat budget at the top of the supported range
  const double h_worst = std::max(params.h_min, params.supported_h_max);
  if (!(h_worst < 0.5)) {
    throw std::invalid_argument("rateless: supported_h_max must lie below 1/2");
  }
  const double p_all = stack_probability(p_layer, params.num_layers);
  double r_max = 0.0;
  {
    double interference = 0.0;
    for (std::size_t layer = 0; layer < params.num_layers; ++layer) {
      r_max += bsc_nui_rate(p_layer, binary_convolve(interference, params.h_min));
      interference = binary_convolve(interference, p_layer);
    }
  }
  const double worst_per_block = bsc_nui_rate(p_all, h_worst);
  const std::size_t worst_budget =
      2 + static_cast<std::size_t>(std::ceil(r_max / worst_per_block - 1e-9));

  double interference = 0.0;  // stack of layers below the one being provisioned
  for (std::size_t layer = 0; layer < params.num_layers; ++layer) {
    const double h_eff = binary_convolve(interference, params.h_min);
    const double h_eff_worst = binary_convolve(interference, h_worst);
    const LayerRateReport rates = layer_rates(mapper, Dmc::bsc(h_eff));

    MlcConfig mlc{mapper, {}, params.block_length, h_eff, params.backoff};
    for (std::size_t level = 0; level < mapper.levels(); ++level) {
      const double reference_capacity =
          level_repetition_capacity(mapper, level + 1, h_eff_worst, worst_budget);
      const std::size_t k = provisioned_level_k(rates.per_layer_rates[level], reference_capacity,
                                                params.block_length, params.backoff);
      if (k < 1) {
        throw std::invalid_argument(
            "rateless: a layer level froze; frozen levels would bias the layer distribution "
            "(increase block_length or reduce mapper_levels)");
      }
      std::optional<LinearCode> code;
      for (std::uint64_t attempt = 0; attempt < 24 && !code; ++attempt) {
        LinearCode candidate = make_regular_ldpc(
            params.block_length, static_cast<double>(k) / static_cast<double>(params.block_length),
            params.col_weight, derive_seed(params.base_seed, 7000 + layer, level * 100 + attempt));
        if (candidate.k() == k) code = std::move(candidate);
      }
      if (!code) throw std::runtime_error("rateless: could not reach a full-rank parity matrix");
      mlc.level_codes.emplace_back(std::move(code));
    }

    const std::size_t total_k = mlc.total_k();
    if (total_k <= params.crc_bits) {
      throw std::invalid_argument("rateless: layer payload too small for its CRC");
    }
    config.payload_bits.push_back(total_k - params.crc_bits);
    config.layer_p.push_back(p_layer);
    config.r_max += bsc_nui_rate(p_layer, h_eff);
    config.layer_mlc.push_back(std::move(mlc));
    interference = binary_convolve(interference, p_layer);
  }
  return config;
}

std::vector<std::uint32_t> interleaver_permutation(std::uint64_t base_seed, std::size_t layer,
                                                   std::size_t block, std::size_t n) {
  return random_permutation(n, derive_seed(base_seed ^ kSeedInterleaver, layer + 1, block + 1));
}

RatelessSession make_session(const RatelessConfig& config, std::uint64_t seed) {
  RatelessSession session;
  session.config = &config;
  session.seed = seed;
  Rng rng(derive_seed(seed ^ kSeedMessages, 1));
  for (std::size_t layer = 0; layer < config.num_layers; ++layer) {
    const MlcConfig& mlc = config.layer_mlc[layer];
    std::vector<std::uint8_t> payload(config.payload_bits[layer]);
    for (auto& b : payload) b = rng.next_bernoulli(0.5) ? 1 : 0;
    std::vector<std::uint8_t> layer_bits = payload;
    if (config.crc_bits == 16) {
      const std::uint16_t crc = crc16(payload);
      for (std::size_t i = 0; i < 16; ++i) layer_bits.push_back((crc >> (15 - i)) & 1u);
    }
    auto messages = split_layer_bits(mlc, layer_bits);
    session.layer_symbols.push_back(mlc_encode(mlc, messages));
    session.tx_messages.push_back(std::move(messages));
    session.tx_payload.push_back(std::move(payload));
  }
  return session;
}

std::vector<std::uint8_t> next_block(RatelessSession& session) {
  const RatelessConfig& config = *session.config;
  if (session.blocks_sent >= config.max_blocks) {
    throw std::runtime_error("next_block: block cap exceeded");
  }
  const std::size_t n = config.block_length;
  const std::size_t b = session.blocks_sent;
  std::vector<std::uint8_t> block(n, 0);
  for (std::size_t layer = 0; layer < config.num_layers; ++layer) {
    const auto perm = interleaver_permutation(config.base_seed, layer, b, n);
    const auto& symbols = session.layer_symbols[layer];
    for (std::size_t t = 0; t < n; ++t) block[t] ^= symbols[perm[t]];
  }
  session.blocks_sent++;
  return block;
}

std::vector<std::uint8_t> transmit_bsc(const std::vector<std::uint8_t>& block, double h,
                                       std::uint64_t seed) {
  if (!(h >= 0.0 && h <= 0.5)) throw std::domain_error("transmit_bsc: h must lie in [0, 1/2]");
  Rng rng(derive_seed(seed ^ kSeedChannel, 1));
  std::vector<std::uint8_t> out(block.size());
  for (std::size_t t = 0; t < block.size(); ++t) {
    out[t] = block[t] ^ (rng.next_bernoulli(h) ? 1u : 0u);
  }
  return out;
}

void receive_block(RatelessSession& session, std::vector<std::uint8_t> noisy_block) {
  if (session.received_blocks.size() >= session.blocks_sent) {
    throw std::runtime_error("receive_block: more blocks received than sent");
  }
  if (noisy_block.size() != session.config->block_length) {
    throw std::invalid_argument("receive_block: block length mismatch");
  }
  session.received_blocks.push_back(std::move(noisy_block));
}

bool stopping_check(std::size_t blocks, double h, const RatelessConfig& config) {
  if (blocks < 1) throw std::invalid_argument("stopping_check: need blocks >= 1");
  if (!(h >= 0.0 && h <= 0.5)) throw std::domain_error("stopping_check: h must lie in [0, 1/2]");
  double p_all = 0.0;
  for (double p : config.layer_p) p_all = binary_convolve(p_all, p);
  const double per_block = bsc_nui_rate(p_all, h);
  return static_cast<double>(blocks) * per_block >= config.r_max - 1e-12;
}

std::size_t ideal_stopping_blocks(double h, const RatelessConfig& config, std::size_t cap) {
  for (std::size_t m = 1; m <= cap; ++m) {
    if (stopping_check(m, h, config)) return m;
  }
  return 0;
}

namespace {

// One successive-cancellation pass over the still-undecoded layers.
// `working` holds the received blocks with every already-decoded layer
// XORed out; newly decoded layers are cancelled in place.
void cancellation_pass(const RatelessConfig& config, std::vector<std::vector<std::uint8_t>>& working,
                       std::vector<bool>& undecoded, double h, std::size_t bp_iters,
                       std::vector<LayerDecodeState>& layers,
                       std::vector<std::vector<std::uint8_t>>* decoded_symbols = nullptr) {
  const std::size_t n = config.block_length;
  const std::size_t num_blocks = working.size();

  for (std::size_t layer = config.num_layers; layer-- > 0;) {
    if (!undecoded[layer]) continue;
    // effective crossover: still-undecoded interference plus channel noise
    double interference = 0.0;
    for (std::size_t j = 0; j < config.num_layers; ++j) {
      if (undecoded[j] && j != layer) interference = binary_convolve(interference, config.layer_p[j]);
    }
    const double h_eff = binary_convolve(interference, h);
    if (!(h_eff > 0.0 && h_eff < 0.5)) continue;  // layer carries no information yet
    const double base_llr = std::log((1.0 - h_eff) / h_eff);

    std::vector<double> symbol_llrs(n, 0.0);
    for (std::size_t b = 0; b < num_blocks; ++b) {
      const auto perm = interleaver_permutation(config.base_seed, layer, b, n);
      const auto& block = working[b];
      for (std::size_t t = 0; t < n; ++t) {
        symbol_llrs[perm[t]] += block[t] ? -base_llr : base_llr;
      }
    }

    const MlcConfig& mlc = config.layer_mlc[layer];
    MsdResult msd = msd_decode_soft(mlc, symbol_llrs, bp_iters);
    std::vector<std::uint8_t> layer_bits = concat_layer_bits(msd.messages);

    bool ok = msd.all_converged;
    std::vector<std::uint8_t> payload;
    if (ok) {
      if (config.crc_bits == 16) {
        payload.assign(layer_bits.begin(), layer_bits.end() - 16);
        std::uint16_t rx_crc = 0;
        for (std::size_t i = 0; i < 16; ++i) {
          rx_crc = static_cast<std::uint16_t>((rx_crc << 1) | layer_bits[layer_bits.size() - 16 + i]);
        }
        ok = (crc16(payload) == rx_crc);
      } else {
        payload = layer_bits;
      }
    }

    if (ok) {
      layers[layer].success = true;
      layers[layer].payload = std::move(payload);
      // cancel this layer out of every received block
      auto symbols = symbols_from_codewords(mlc, msd.codewords);
      for (std::size_t b = 0; b < num_blocks; ++b) {
        const auto perm = interleaver_permutation(config.base_seed, layer, b, n);
        for (std::size_t t = 0; t < n; ++t) working[b][t] ^= symbols[perm[t]];
      }
      undecoded[layer] = false;
      if (decoded_symbols) (*decoded_symbols)[layer] = std::move(symbols);
    }
  }
}

double decoded_payload_rate(const RatelessConfig& config, const std::vector<LayerDecodeState>& layers,
                            std::size_t num_blocks) {
  std::size_t decoded_bits = 0;
  for (std::size_t layer = 0; layer < config.num_layers; ++layer) {
    if (layers[layer].success) decoded_bits += config.payload_bits[layer];
  }
  return static_cast<double>(decoded_bits) /
         (static_cast<double>(config.block_length) * static_cast<double>(num_blocks));
}

}  // namespace

DecodeReport combine_and_decode(const RatelessSession& session, double h, std::size_t bp_iters) {
  const RatelessConfig& config = *session.config;
  const std::size_t num_blocks = session.received_blocks.size();
  if (num_blocks == 0) throw std::runtime_error("combine_and_decode: no blocks received");

  DecodeReport report;
  report.layers.resize(config.num_layers);
  report.blocks_used = num_blocks;

  std::vector<std::vector<std::uint8_t>> working = session.received_blocks;
  std::vector<bool> undecoded(config.num_layers, true);
  cancellation_pass(config, working, undecoded, h, bp_iters, report.layers);

  report.all_success = true;
  for (const auto& layer : report.layers) report.all_success = report.all_success && layer.success;
  report.realized_rate = decoded_payload_rate(config, report.layers, num_blocks);
  return report;
}

TrialRecord run_trial(const RatelessConfig& config, double true_h, std::uint64_t seed) {
  if (true_h < config.h_min) {
    throw std::invalid_argument("run_trial: true_h must satisfy true_h >= h_min");
  }
  RatelessSession session = make_session(config, seed);
  TrialRecord record;
  record.true_h = true_h;
  record.seed = seed;
  record.ideal_m = ideal_stopping_blocks(true_h, config, config.max_blocks * 128);

  // incremental receiver: layers already CRC-verified stay cancelled, each
  // new block is cleaned of them on arrival and only the remainder re-decoded
  std::vector<std::vector<std::uint8_t>> working;
  std::vector<bool> undecoded(config.num_layers, true);
  std::vector<LayerDecodeState> layers(config.num_layers);
  std::vector<std::vector<std::uint8_t>> decoded_symbols(config.num_layers);
  bool all_success = false;

  while (session.blocks_sent < config.max_blocks && !all_success) {
    auto block = next_block(session);
    receive_block(session, transmit_bsc(block, true_h, derive_seed(seed, 2000, session.blocks_sent)));

    const std::size_t b = session.received_blocks.size() - 1;
    working.push_back(session.received_blocks.back());
    for (std::size_t layer = 0; layer < config.num_layers; ++layer) {
      if (undecoded[layer]) continue;
      const auto perm = interleaver_permutation(config.base_seed, layer, b, config.block_length);
      for (std::size_t t = 0; t < config.block_length; ++t) {
        working[b][t] ^= decoded_symbols[layer][perm[t]];
      }
    }

    cancellation_pass(config, working, undecoded, true_h, 100, layers, &decoded_symbols);
    all_success = true;
    for (const auto& layer : layers) all_success = all_success && layer.success;
  }

  record.blocks_used = session.received_blocks.size();
  record.success = all_success;
  record.realized_rate = decoded_payload_rate(config, layers, record.blocks_used);
  record.all_correct = record.success;
  for (std::size_t layer = 0; layer < config.num_layers && record.all_correct; ++layer) {
    record.all_correct = layers[layer].success && layers[layer].payload == session.tx_payload[layer];
  }
  return record;
}

std::string rateless_params_to_string(const RatelessBuildParams& params) {
  std::ostringstream out;
  out << "rateless_config v1\n";
  out << "layers " << params.num_layers << '\n';
  out << "n " << params.block_length << '\n';
  out << "h_min " << params.h_min << '\n';
  out << "backoff " << params.backoff << '\n';
  out << "mapper_levels " << params.mapper_levels << '\n';
  out << "col_weight " << params.col_weight << '\n';
  out << "crc_bits " << params.crc_bits << '\n';
  out << "max_blocks " << params.max_blocks << '\n';
  out << "base_seed " << params.base_seed << '\n';
  out << "p_stack_target " << params.p_stack_target << '\n';
  out << "supported_h_max " << params.supported_h_max << '\n';
  return out.str();
}

RatelessBuildParams rateless_params_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "rateless_config v1") {
    throw std::invalid_argument("rateless config: bad magic line");
  }
  RatelessBuildParams params;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    bool ok = true;
    if (key == "layers") ok = static_cast<bool>(ls >> params.num_layers);
    else if (key == "n") ok = static_cast<bool>(ls >> params.block_length);
    else if (key == "h_min") ok = static_cast<bool>(ls >> params.h_min);
    else if (key == "backoff") ok = static_cast<bool>(ls >> params.backoff);
    else if (key == "mapper_levels") ok = static_cast<bool>(ls >> params.mapper_levels);
    else if (key == "col_weight") ok = static_cast<bool>(ls >> params.col_weight);
    else if (key == "crc_bits") ok = static_cast<bool>(ls >> params.crc_bits);
    else if (key == "max_blocks") ok = static_cast<bool>(ls >> params.max_blocks);
    else if (key == "base_seed") ok = static_cast<bool>(ls >> params.base_seed);
    else if (key == "p_stack_target") ok = static_cast<bool>(ls >> params.p_stack_target);
    else if (key == "supported_h_max") ok = static_cast<bool>(ls >> params.supported_h_max);
    else throw std::invalid_argument("rateless config: unknown key " + key);
    if (!ok) throw std::invalid_argument("rateless config: bad value for " + key);
  }
  return params;
}

RatelessConfig rateless_config_load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return rateless_config_build(rateless_params_from_string(buf.str()));
}

}  // namespace nuimlc
