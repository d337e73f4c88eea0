#include "nuimlc/mlc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nuimlc/infotheory.hpp"
#include "nuimlc/rate_analysis.hpp"
#include "nuimlc/rng.hpp"

namespace nuimlc {

namespace {

void check_binary_mapper(const DeterministicMapper& mapper) {
  if (mapper.output_alphabet_size() != 2) {
    throw std::invalid_argument("mlc: only binary-output mappers are supported");
  }
}

void check_demap_h(double h) {
  if (!(h > 0.0 && h < 0.5)) {
    throw std::domain_error("demap: h must lie strictly inside (0, 1/2)");
  }
}

}  // namespace

std::size_t MlcConfig::total_k() const {
  std::size_t k = 0;
  for (std::size_t l = 0; l < level_codes.size(); ++l) k += level_k(l);
  return k;
}

MlcConfig mlc_config_build(const DeterministicMapper& mapper, std::size_t block_length,
                           double design_h, double backoff, std::size_t col_weight,
                           std::uint64_t seed) {
  check_binary_mapper(mapper);
  if (!(backoff > 0.0 && backoff < 1.0)) {
    throw std::invalid_argument("mlc_config_build: backoff must lie in (0,1)");
  }
  const LayerRateReport rates = layer_rates(mapper, Dmc::bsc(design_h));

  MlcConfig config{mapper, {}, block_length, design_h, backoff};
  for (std::size_t level = 0; level < mapper.levels(); ++level) {
    const double target_rate = (1.0 - backoff) * rates.per_layer_rates[level];
    const auto k_target = static_cast<std::size_t>(
        std::floor(target_rate * static_cast<double>(block_length)));
    if (k_target < 1) {
      config.level_codes.emplace_back(std::nullopt);
      continue;
    }
    // resample seeds until the parity matrix has full row rank, so the code
    // dimension equals the provisioned k and the rate budget holds
    std::optional<LinearCode> code;
    for (std::uint64_t attempt = 0; attempt < 24; ++attempt) {
      LinearCode candidate = make_regular_ldpc(
          block_length, static_cast<double>(k_target) / static_cast<double>(block_length),
          col_weight, derive_seed(seed, level, attempt));
      if (candidate.k() == k_target) {
        code = std::move(candidate);
        break;
      }
    }
    if (!code) {
      throw std::runtime_error("mlc_config_build: could not reach a full-rank parity matrix");
    }
    config.level_codes.emplace_back(std::move(code));
  }
  return config;
}

std::vector<std::uint8_t> mlc_encode(const MlcConfig& config,
                                     const std::vector<std::vector<std::uint8_t>>& messages) {
  check_binary_mapper(config.mapper);
  const std::size_t m = config.levels();
  const std::size_t n = config.block_length;
  if (messages.size() != m) throw std::invalid_argument("mlc_encode: need one message per level");

  std::vector<std::vector<std::uint8_t>> codewords(m);
  for (std::size_t level = 0; level < m; ++level) {
    if (!config.level_codes[level]) {
      if (!messages[level].empty()) {
        throw std::invalid_argument("mlc_encode: frozen level takes an empty message");
      }
      codewords[level].assign(n, 0);
    } else {
      codewords[level] = encode(*config.level_codes[level], messages[level]);
    }
  }
  std::vector<std::uint8_t> symbols(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t word = 0;
    for (std::size_t level = 0; level < m; ++level) word = (word << 1) | codewords[level][t];
    symbols[t] = static_cast<std::uint8_t>(config.mapper.map(word));
  }
  return symbols;
}

double demap_level_llr(const DeterministicMapper& mapper, double symbol_llr, std::size_t level,
                       const std::vector<std::uint8_t>& decided) {
  check_binary_mapper(mapper);
  const std::size_t m = mapper.levels();
  if (level < 1 || level > m) throw std::invalid_argument("demap: level out of range");
  if (decided.size() != level - 1) {
    throw std::invalid_argument("demap: need exactly level-1 decided bits");
  }
  // count words matching the decided prefix, split by this level's bit and f
  double count[2][2] = {{0, 0}, {0, 0}};  // [bit][f(word)]
  std::size_t prefix = 0;
  for (std::uint8_t b : decided) prefix = (prefix << 1) | (b & 1u);
  const std::size_t free_levels = m - level;
  for (std::size_t bit = 0; bit < 2; ++bit) {
    const std::size_t head = ((prefix << 1) | bit) << free_levels;
    for (std::size_t tail = 0; tail < (std::size_t{1} << free_levels); ++tail) {
      count[bit][mapper.map(head | tail)] += 1.0;
    }
  }
  // P(obs|bit) ~ count[bit][0] e^{L/2} + count[bit][1] e^{-L/2}
  const double half = 0.5 * symbol_llr;
  const double w0 = std::exp(half - std::abs(half));   // e^{L/2} scaled by e^{-|L|/2}
  const double w1 = std::exp(-half - std::abs(half));
  const double num = count[0][0] * w0 + count[0][1] * w1;
  const double den = count[1][0] * w0 + count[1][1] * w1;
  if (num == 0.0 && den == 0.0) return 0.0;
  if (num == 0.0) return -kLlrClamp;
  if (den == 0.0) return kLlrClamp;
  return std::log(num / den);
}

double demap_llr(const DeterministicMapper& mapper, std::uint8_t received, double h,
                 std::size_t level, const std::vector<std::uint8_t>& decided) {
  check_demap_h(h);
  const double base = std::log((1.0 - h) / h);
  const double symbol_llr = (received & 1u) ? -base : base;
  return demap_level_llr(mapper, symbol_llr, level, decided);
}

MsdResult msd_decode_soft(const MlcConfig& config, const std::vector<double>& symbol_llrs,
                          std::size_t max_iters,
                          const std::vector<std::vector<std::uint8_t>>* genie_codewords) {
  check_binary_mapper(config.mapper);
  const std::size_t m = config.levels();
  const std::size_t n = config.block_length;
  if (symbol_llrs.size() != n) throw std::invalid_argument("msd_decode: length mismatch");
  if (genie_codewords && genie_codewords->size() != m) {
    throw std::invalid_argument("msd_decode: genie must provide every level");
  }

  MsdResult result;
  result.messages.resize(m);
  result.codewords.resize(m);
  result.level_converged.assign(m, false);

  // decided[t] accumulates hard bits of levels decoded so far, per position
  std::vector<std::vector<std::uint8_t>> decided(n);
  for (auto& d : decided) d.reserve(m);

  for (std::size_t level = 0; level < m; ++level) {
    if (!config.level_codes[level]) {
      result.codewords[level].assign(n, 0);
      result.level_converged[level] = true;
    } else {
      const LinearCode& code = *config.level_codes[level];
      SoftObservation obs;
      obs.llrs.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        obs.llrs[t] = demap_level_llr(config.mapper, symbol_llrs[t], level + 1, decided[t]);
      }
      if (code.k() <= kMsdMlMaxK) {
        result.codewords[level] = ml_decode_exact(code, obs);
        result.level_converged[level] = true;
      } else {
        BpResult bp = bp_decode(code, obs, max_iters);
        result.codewords[level] = std::move(bp.codeword);
        result.level_converged[level] = bp.converged;
      }
      result.messages[level] = code.extract_message(result.codewords[level]);
    }
    const std::vector<std::uint8_t>& feedback =
        genie_codewords ? (*genie_codewords)[level] : result.codewords[level];
    for (std::size_t t = 0; t < n; ++t) decided[t].push_back(feedback[t]);
  }
  result.all_converged = true;
  for (bool ok : result.level_converged) result.all_converged = result.all_converged && ok;
  return result;
}

MsdResult msd_decode(const MlcConfig& config, const std::vector<std::uint8_t>& received, double h,
                     std::size_t max_iters,
                     const std::vector<std::vector<std::uint8_t>>* genie_codewords) {
  check_demap_h(h);
  const double base = std::log((1.0 - h) / h);
  std::vector<double> symbol_llrs(received.size());
  for (std::size_t t = 0; t < received.size(); ++t) {
    symbol_llrs[t] = (received[t] & 1u) ? -base : base;
  }
  return msd_decode_soft(config, symbol_llrs, max_iters, genie_codewords);
}

std::string mlc_config_to_string(const MlcConfig& config) {
  std::ostringstream out;
  out << "mlc_config v1\n";
  out << "mapper " << mapper_to_string(config.mapper) << '\n';
  out << "n " << config.block_length << '\n';
  out << "design_h " << config.design_h << '\n';
  out << "backoff " << config.backoff << '\n';
  for (std::size_t level = 0; level < config.levels(); ++level) {
    if (!config.level_codes[level]) {
      out << "level " << level + 1 << " frozen\n";
    } else {
      const std::string alist = parity_to_alist(config.level_codes[level]->parity());
      out << "level " << level + 1 << " alist " << std::count(alist.begin(), alist.end(), '\n')
          << '\n'
          << alist;
    }
  }
  return out.str();
}

MlcConfig mlc_config_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "mlc_config v1") {
    throw std::invalid_argument("mlc config: bad magic line");
  }
  std::optional<DeterministicMapper> mapper;
  std::size_t n = 0;
  double design_h = -1.0, backoff = -1.0;
  std::vector<std::optional<LinearCode>> level_codes;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "mapper") {
      std::string rest;
      std::getline(ls, rest);
      mapper = mapper_from_string(rest.substr(rest.find_first_not_of(' ')));
    } else if (key == "n") {
      ls >> n;
    } else if (key == "design_h") {
      ls >> design_h;
    } else if (key == "backoff") {
      ls >> backoff;
    } else if (key == "level") {
      std::size_t index = 0;
      std::string kind;
      ls >> index >> kind;
      if (index != level_codes.size() + 1) {
        throw std::invalid_argument("mlc config: levels must appear in order");
      }
      if (kind == "frozen") {
        level_codes.emplace_back(std::nullopt);
      } else if (kind == "alist") {
        std::size_t lines = 0;
        ls >> lines;
        std::string alist;
        for (std::size_t i = 0; i < lines; ++i) {
          if (!std::getline(in, line)) throw std::invalid_argument("mlc config: truncated alist");
          alist += line;
          alist += '\n';
        }
        level_codes.emplace_back(LinearCode::from_parity(parity_from_alist(alist)));
      } else {
        throw std::invalid_argument("mlc config: unknown level kind " + kind);
      }
    } else {
      throw std::invalid_argument("mlc config: unknown key " + key);
    }
  }
  if (!mapper || n == 0 || design_h < 0.0 || backoff < 0.0) {
    throw std::invalid_argument("mlc config: missing required fields");
  }
  if (level_codes.size() != mapper->levels()) {
    throw std::invalid_argument("mlc config: level count does not match mapper");
  }
  for (const auto& code : level_codes) {
    if (code && code->n() != n) throw std::invalid_argument("mlc config: code length mismatch");
  }
  return MlcConfig{std::move(*mapper), std::move(level_codes), n, design_h, backoff};
}

MlcBuildParams mlc_build_params_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "mlc_build v1") {
    throw std::invalid_argument("mlc build recipe: bad magic line");
  }
  MlcBuildParams params;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    bool ok = true;
    if (key == "mapper_levels") ok = static_cast<bool>(ls >> params.mapper_levels);
    else if (key == "mapper_k") ok = static_cast<bool>(ls >> params.mapper_k);
    else if (key == "n") ok = static_cast<bool>(ls >> params.block_length);
    else if (key == "design_h") ok = static_cast<bool>(ls >> params.design_h);
    else if (key == "backoff") ok = static_cast<bool>(ls >> params.backoff);
    else if (key == "col_weight") ok = static_cast<bool>(ls >> params.col_weight);
    else if (key == "code_seed") ok = static_cast<bool>(ls >> params.code_seed);
    else throw std::invalid_argument("mlc build recipe: unknown key " + key);
    if (!ok) throw std::invalid_argument("mlc build recipe: bad value for " + key);
  }
  return params;
}

std::string mlc_build_params_to_string(const MlcBuildParams& params) {
  std::ostringstream out;
  out << "mlc_build v1\n";
  out << "mapper_levels " << params.mapper_levels << '\n';
  out << "mapper_k " << params.mapper_k << '\n';
  out << "n " << params.block_length << '\n';
  out << "design_h " << params.design_h << '\n';
  out << "backoff " << params.backoff << '\n';
  out << "col_weight " << params.col_weight << '\n';
  out << "code_seed " << params.code_seed << '\n';
  return out.str();
}

MlcConfig mlc_config_load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (text.rfind("mlc_build v1", 0) == 0) {
    const MlcBuildParams params = mlc_build_params_from_string(text);
    return mlc_config_build(build_threshold_mapper(params.mapper_levels, params.mapper_k),
                            params.block_length, params.design_h, params.backoff,
                            params.col_weight, params.code_seed);
  }
  return mlc_config_from_string(text);
}

void mlc_config_save(const MlcConfig& config, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config file for writing: " + path);
  f << mlc_config_to_string(config);
  if (!f) throw std::runtime_error("write failure: " + path);
}

void write_bits(const std::string& path, const std::vector<std::uint8_t>& bits) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open bit file for writing: " + path);
  for (std::uint8_t b : bits) f.put(static_cast<char>(b & 1u));
  if (!f) throw std::runtime_error("write failure: " + path);
}

std::vector<std::uint8_t> read_bits(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open bit file: " + path);
  std::vector<std::uint8_t> bits;
  char c;
  while (f.get(c)) bits.push_back(static_cast<std::uint8_t>(c) & 1u);
  return bits;
}

}  // namespace nuimlc
