#ifndef NUIMLC_MLC_HPP
#define NUIMLC_MLC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nuimlc/codes.hpp"
#include "nuimlc/mapper.hpp"

namespace nuimlc {

// Multilevel code: one binary linear code per mapper level, all sharing the
// block length. Levels whose provisioned rate falls below 1/n carry no code
// and are frozen to known zeros.
struct MlcConfig {
  DeterministicMapper mapper;
  std::vector<std::optional<LinearCode>> level_codes;  // nullopt = frozen level
  std::size_t block_length = 0;
  double design_h = 0.0;
  double backoff = 0.25;

  std::size_t levels() const { return mapper.levels(); }
  std::size_t level_k(std::size_t level) const {
    return level_codes[level] ? level_codes[level]->k() : 0;
  }
  std::size_t total_k() const;
};

// Provisions per-level codes at rate (1-backoff) R_i with R_i from
// layer_rates(mapper, BSC(design_h)). Per-level LDPC seeds derive from seed.
MlcConfig mlc_config_build(const DeterministicMapper& mapper, std::size_t block_length,
                           double design_h, double backoff, std::size_t col_weight,
                           std::uint64_t seed);

// Encodes one message per level and maps codeword columns through f.
std::vector<std::uint8_t> mlc_encode(const MlcConfig& config,
                                     const std::vector<std::vector<std::uint8_t>>& messages);

// Bit-level LLR for one level given hard decisions for all lower levels,
// marginalizing uniformly over the undecided higher levels. The channel
// evidence enters as the symbol LLR log(P(obs|X=0)/P(obs|X=1)), which for a
// hard BSC observation is +-log((1-h)/h).
double demap_level_llr(const DeterministicMapper& mapper, double symbol_llr, std::size_t level,
                       const std::vector<std::uint8_t>& decided);

// Hard-observation form over a BSC(h).
double demap_llr(const DeterministicMapper& mapper, std::uint8_t received, double h,
                 std::size_t level, const std::vector<std::uint8_t>& decided);

struct MsdResult {
  std::vector<std::vector<std::uint8_t>> messages;   // one per level (empty if frozen)
  std::vector<std::vector<std::uint8_t>> codewords;  // decoded level codewords
  std::vector<bool> level_converged;
  bool all_converged = false;
};

// Levels this small are decoded by exhaustive ML instead of BP: sum-product
// passes carry no gain on near-(3,3)-regular graphs, while 2^k enumeration
// is cheap and optimal.
inline constexpr std::size_t kMsdMlMaxK = 14;

// Multistage decoding from per-position symbol LLRs: level by level, each
// conditioned on the hard decisions of the levels before it. Decoding
// continues through non-converged levels; flags are reported per level. If
// genie_codewords is given, conditioning uses those bits instead of the
// decoded estimates.
MsdResult msd_decode_soft(const MlcConfig& config, const std::vector<double>& symbol_llrs,
                          std::size_t max_iters = 100,
                          const std::vector<std::vector<std::uint8_t>>* genie_codewords = nullptr);

// Hard-symbol form over a BSC(h).
MsdResult msd_decode(const MlcConfig& config, const std::vector<std::uint8_t>& received, double h,
                     std::size_t max_iters = 100,
                     const std::vector<std::vector<std::uint8_t>>* genie_codewords = nullptr);

// Structured text serialization. Codes are stored inline as alist blocks so a
// config file is self-contained.
std::string mlc_config_to_string(const MlcConfig& config);
MlcConfig mlc_config_from_string(const std::string& text);
void mlc_config_save(const MlcConfig& config, const std::string& path);

// Compact build recipe ("mlc_build v1" files): mapper (levels, k), block
// length, design_h, backoff, col_weight, code_seed. Deterministic to load.
struct MlcBuildParams {
  std::size_t mapper_levels = 2;
  std::uint32_t mapper_k = 1;
  std::size_t block_length = 4096;
  double design_h = 0.11;
  double backoff = 0.25;
  std::size_t col_weight = 3;
  std::uint64_t code_seed = 1;
};
MlcBuildParams mlc_build_params_from_string(const std::string& text);
std::string mlc_build_params_to_string(const MlcBuildParams& params);

// Loads either serialized ("mlc_config v1") or recipe ("mlc_build v1") files.
MlcConfig mlc_config_load(const std::string& path);

// Frame I/O for CLI pipelines: one byte per bit, values 0x00/0x01.
void write_bits(const std::string& path, const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> read_bits(const std::string& path);

}  // namespace nuimlc

#endif  // NUIMLC_MLC_HPP
