#ifndef NUIMLC_RATELESS_HPP
#define NUIMLC_RATELESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nuimlc/mlc.hpp"

namespace nuimlc {

// Rateless layered-repetition scheme: N shaped MLC layers, each interleaved
// with a fresh per-block permutation, XOR-stacked, and repeated until the
// receiver decodes. Layer i (0-based) is provisioned for the channel it sees
// when all layers above it (larger index) have been cancelled, i.e. crossover
// (p_0 (+) ... (+) p_{i-1}) (+) h_min; decoding runs from layer N-1 down to 0.
struct RatelessConfig {
  std::size_t num_layers = 0;
  std::size_t block_length = 0;
  double h_min = 0.0;
  double backoff = 0.25;
  std::vector<double> layer_p;          // induced P(symbol=1) per layer, all < 1/2
  std::vector<MlcConfig> layer_mlc;     // one shaped codec per layer
  std::vector<std::size_t> payload_bits;  // per-layer message bits net of CRC
  double r_max = 0.0;                   // sum of mother information rates
  std::uint64_t base_seed = 0;
  std::size_t crc_bits = 16;
  std::size_t max_blocks = 32;
};

struct RatelessBuildParams {
  std::size_t num_layers = 4;
  std::size_t block_length = 4096;
  double h_min = 0.05;
  double backoff = 0.25;
  std::size_t mapper_levels = 2;
  std::size_t col_weight = 3;
  std::size_t crc_bits = 16;
  std::size_t max_blocks = 16;
  std::uint64_t base_seed = 1;
  double p_stack_target = 0.4;   // stack probability the layer p_i are sized for
  double supported_h_max = 0.25; // level codes sized to decode within the
                                 // repeat budget up to this crossover
};

RatelessConfig rateless_config_build(const RatelessBuildParams& params);

// Structured text config for the trial batch runner.
RatelessBuildParams rateless_params_from_string(const std::string& text);
std::string rateless_params_to_string(const RatelessBuildParams& params);
RatelessConfig rateless_config_load(const std::string& path);

// Seeded pseudo-random interleaver for (layer, block); position t of the
// emitted block carries the layer's symbol perm[t].
std::vector<std::uint32_t> interleaver_permutation(std::uint64_t base_seed, std::size_t layer,
                                                   std::size_t block, std::size_t n);

// Transmitter and receiver state for one session. The config must outlive
// the session.
struct RatelessSession {
  const RatelessConfig* config = nullptr;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<std::uint8_t>>> tx_messages;  // [layer][level]
  std::vector<std::vector<std::uint8_t>> tx_payload;                // [layer] payload bits
  std::vector<std::vector<std::uint8_t>> layer_symbols;             // [layer][n]
  std::size_t blocks_sent = 0;
  std::vector<std::vector<std::uint8_t>> received_blocks;
};

RatelessSession make_session(const RatelessConfig& config, std::uint64_t seed);

// Interleave every layer with its block-b permutation and XOR-stack them.
std::vector<std::uint8_t> next_block(RatelessSession& session);

// Independent bit flips with probability h, seeded.
std::vector<std::uint8_t> transmit_bsc(const std::vector<std::uint8_t>& block, double h,
                                       std::uint64_t seed);

void receive_block(RatelessSession& session, std::vector<std::uint8_t> noisy_block);

// Analytical stopping rule: m bsc_nui_rate(p_all, h) >= R_max with p_all the
// stack of the layer probabilities.
bool stopping_check(std::size_t blocks, double h, const RatelessConfig& config);

// Smallest m for which stopping_check holds, or 0 if none up to the cap.
std::size_t ideal_stopping_blocks(double h, const RatelessConfig& config, std::size_t cap = 4096);

struct LayerDecodeState {
  bool success = false;
  std::vector<std::uint8_t> payload;
};

struct DecodeReport {
  std::vector<LayerDecodeState> layers;
  bool all_success = false;
  std::size_t blocks_used = 0;
  double realized_rate = 0.0;  // decoded payload bits / (n * blocks_used)
};

// Successive cancellation from the top layer down: combine per-block LLRs
// under the effective BSC of the still-undecoded stack, decode the layer's
// MLC, verify its CRC, and on success XOR the re-encoded layer out of every
// block. Failed layers are recorded and stay in as interference.
DecodeReport combine_and_decode(const RatelessSession& session, double h,
                                std::size_t bp_iters = 100);

struct TrialRecord {
  double true_h = 0.0;
  std::uint64_t seed = 0;
  std::size_t blocks_used = 0;
  double realized_rate = 0.0;
  std::size_t ideal_m = 0;
  bool success = false;      // receiver view: every layer CRC-verified
  bool all_correct = false;  // genie view: every decoded payload matches
};

// Send/receive/attempt loop until every layer decodes or max_blocks is hit.
TrialRecord run_trial(const RatelessConfig& config, double true_h, std::uint64_t seed);

// CRC-CCITT (poly 0x1021, init 0xFFFF) over a bit vector, MSB-first.
std::uint16_t crc16(const std::vector<std::uint8_t>& bits);

}  // namespace nuimlc

#endif  // NUIMLC_RATELESS_HPP
