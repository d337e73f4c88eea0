#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "nuimlc/infotheory.hpp"
#include "nuimlc/mlc.hpp"
#include "nuimlc/rate_analysis.hpp"
#include "nuimlc/rateless.hpp"
#include "nuimlc/rng.hpp"

using namespace nuimlc;

namespace {

std::vector<std::vector<std::uint8_t>> random_messages(const MlcConfig& config, Rng& rng) {
  std::vector<std::vector<std::uint8_t>> messages(config.levels());
  for (std::size_t level = 0; level < config.levels(); ++level) {
    messages[level].resize(config.level_k(level));
    for (auto& b : messages[level]) b = rng.next_bernoulli(0.5) ? 1 : 0;
  }
  return messages;
}

DeterministicMapper identity_mapper() { return DeterministicMapper(1, {0, 1}, 2); }

// exact posterior P(W_level = 0 | evidence) by enumerating the mapper table
double posterior_bit0(const DeterministicMapper& mapper, double symbol_llr, std::size_t level,
                      const std::vector<std::uint8_t>& decided) {
  const std::size_t m = mapper.levels();
  double weight[2] = {0.0, 0.0};
  for (std::size_t w = 0; w < mapper.num_words(); ++w) {
    bool consistent = true;
    for (std::size_t l = 1; l < level; ++l) {
      if (DeterministicMapper::level_bit(w, l, m) != (decided[l - 1] != 0)) consistent = false;
    }
    if (!consistent) continue;
    const double like = mapper.map(w) == 0 ? std::exp(0.5 * symbol_llr) : std::exp(-0.5 * symbol_llr);
    weight[DeterministicMapper::level_bit(w, level, m) ? 1 : 0] += like;
  }
  return weight[0] / (weight[0] + weight[1]);
}

}  // namespace

TEST_CASE("config builder provisions rates with back-off") {
  const auto mapper = build_threshold_mapper(2, 1);
  const MlcConfig config = mlc_config_build(mapper, 512, 0.11, 0.25, 3, 42);
  REQUIRE(config.levels() == 2);

  const auto rates = layer_rates(mapper, Dmc::bsc(0.11));
  for (std::size_t level = 0; level < 2; ++level) {
    REQUIRE(config.level_codes[level].has_value());
    const double code_rate = static_cast<double>(config.level_k(level)) / 512.0;
    CHECK(code_rate <= rates.per_layer_rates[level]);
    CHECK(config.level_codes[level]->n() == 512);
  }
  // rate accounting: total payload stays under the backed-off channel rate
  const double total_rate = static_cast<double>(config.total_k()) / 512.0;
  CHECK(total_rate <= 0.75 * bsc_nui_rate(0.25, 0.11) + 1e-9);
}

TEST_CASE("levels with zero rate are frozen") {
  // k = 2: X depends only on the first word bit, the second level carries 0
  const MlcConfig config = mlc_config_build(build_threshold_mapper(2, 2), 256, 0.1, 0.25, 3, 7);
  CHECK(config.level_codes[0].has_value());
  CHECK(!config.level_codes[1].has_value());
  CHECK(config.level_k(1) == 0);

  Rng rng(5);
  auto messages = random_messages(config, rng);
  CHECK(messages[1].empty());
  const auto symbols = mlc_encode(config, messages);
  // X = 1 - W1 here, so the symbols are the complement of level 1's codeword
  const auto cw = encode(*config.level_codes[0], messages[0]);
  for (std::size_t t = 0; t < symbols.size(); ++t) CHECK(symbols[t] == (cw[t] ^ 1u));
}

TEST_CASE("mlc_encode zero propagation and identity reduction") {
  const MlcConfig config = mlc_config_build(build_threshold_mapper(2, 1), 256, 0.11, 0.25, 3, 9);
  std::vector<std::vector<std::uint8_t>> zeros(2);
  zeros[0].assign(config.level_k(0), 0);
  zeros[1].assign(config.level_k(1), 0);
  const auto symbols = mlc_encode(config, zeros);
  // all-zero codewords feed word 0 everywhere; the threshold rule sends it to 1
  for (auto s : symbols) CHECK(s == config.mapper.map(0));

  // one identity level: the symbol stream is the codeword itself
  const MlcConfig plain = mlc_config_build(identity_mapper(), 256, 0.11, 0.25, 3, 9);
  Rng rng(6);
  auto messages = random_messages(plain, rng);
  CHECK(mlc_encode(plain, messages) == encode(*plain.level_codes[0], messages[0]));

  CHECK_THROWS_AS(mlc_encode(config, zeros[0].empty() ? zeros : std::vector<std::vector<std::uint8_t>>{zeros[0]}),
                  std::invalid_argument);
}

TEST_CASE("encoded symbol distribution concentrates at the induced p1") {
  const MlcConfig config = mlc_config_build(build_threshold_mapper(2, 1), 4096, 0.11, 0.25, 3, 13);
  Rng rng(17);
  const auto symbols = mlc_encode(config, random_messages(config, rng));
  double ones = 0;
  for (auto s : symbols) ones += s;
  const double frac = ones / 4096.0;
  const double sigma = std::sqrt(0.25 * 0.75 / 4096.0);
  CHECK(std::abs(frac - 0.25) <= 3.0 * sigma);
}

TEST_CASE("demap_llr closed forms") {
  const double h = 0.3;
  const double base = std::log((1.0 - h) / h);
  // classical BSC with the identity mapper
  CHECK(demap_llr(identity_mapper(), 0, h, 1, {}) == doctest::Approx(base).epsilon(1e-13));
  CHECK(demap_llr(identity_mapper(), 1, h, 1, {}) == doctest::Approx(-base).epsilon(1e-13));

  // threshold(2,1), level 1, no decisions, y=1:
  // P(y=1|W1=0) = 1/2, P(y=1|W1=1) = h  ->  log((1/2)/h) = log(5/3) at h=0.3
  CHECK(demap_llr(build_threshold_mapper(2, 1), 1, h, 1, {}) ==
        doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-12));

  // a level that cannot change the symbol is uninformative
  const DeterministicMapper first_bit_only(2, {0, 0, 1, 1}, 2);
  CHECK(demap_llr(first_bit_only, 1, h, 2, {1}) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(demap_llr(identity_mapper(), 0, 0.0, 1, {}), std::domain_error);
  CHECK_THROWS_AS(demap_llr(identity_mapper(), 0, 0.6, 1, {}), std::domain_error);
  CHECK_THROWS_AS(demap_llr(build_threshold_mapper(2, 1), 0, h, 2, {}), std::invalid_argument);
}

TEST_CASE("demap_llr reproduces the exact posterior") {
  const std::vector<DeterministicMapper> mappers = {
      build_threshold_mapper(2, 1), build_threshold_mapper(3, 3),
      DeterministicMapper(3, {0, 1, 1, 0, 1, 0, 0, 1}, 2)};
  const double h = 0.23;
  const double base = std::log((1.0 - h) / h);
  for (const auto& mapper : mappers) {
    const std::size_t m = mapper.levels();
    for (std::size_t level = 1; level <= m; ++level) {
      const std::size_t prefixes = std::size_t{1} << (level - 1);
      for (std::size_t prefix = 0; prefix < prefixes; ++prefix) {
        std::vector<std::uint8_t> decided(level - 1);
        for (std::size_t i = 0; i < level - 1; ++i) decided[i] = (prefix >> (level - 2 - i)) & 1u;
        for (std::uint8_t y : {0, 1}) {
          const double symbol_llr = y ? -base : base;
          const double llr = demap_llr(mapper, y, h, level, decided);
          const double from_llr = 1.0 / (1.0 + std::exp(-llr));
          const double exact = posterior_bit0(mapper, symbol_llr, level, decided);
          CHECK(std::abs(from_llr - exact) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("msd_decode round-trips at vanishing noise") {
  // p1 = 1/4 at one, two, and three levels (the three-level mapper leaves
  // its last bit unused, which exercises the frozen-level path end to end)
  Rng rng(31);
  for (std::size_t m = 1; m <= 3; ++m) {
    const std::uint32_t k = (m == 1) ? 1 : (1u << (m - 2));
    const MlcConfig config =
        mlc_config_build(build_threshold_mapper(m, k), 512, 0.08, 0.25, 3, 100 + m);
    const auto messages = random_messages(config, rng);
    const auto symbols = mlc_encode(config, messages);
    const MsdResult result = msd_decode(config, symbols, 1e-6);
    CHECK(result.all_converged);
    for (std::size_t level = 0; level < m; ++level) {
      if (config.level_codes[level]) CHECK(result.messages[level] == messages[level]);
    }
  }
}

TEST_CASE("msd_decode with one level matches plain bp_decode") {
  const MlcConfig config = mlc_config_build(identity_mapper(), 512, 0.11, 0.25, 3, 19);
  Rng rng(23);
  const auto messages = random_messages(config, rng);
  const auto symbols = mlc_encode(config, messages);
  const double h = 0.08;
  const auto received = transmit_bsc(symbols, h, 99);

  const MsdResult via_msd = msd_decode(config, received, h);

  SoftObservation obs;
  obs.llrs.resize(512);
  const double base = std::log((1.0 - h) / h);
  for (std::size_t t = 0; t < 512; ++t) obs.llrs[t] = received[t] ? -base : base;
  const BpResult via_bp = bp_decode(*config.level_codes[0], obs, 100);

  CHECK(via_msd.codewords[0] == via_bp.codeword);
  CHECK(via_msd.level_converged[0] == via_bp.converged);
}

TEST_CASE("genie feedback never hurts the second level") {
  // run well above the design crossover so level 1 fails regularly
  const MlcConfig config = mlc_config_build(build_threshold_mapper(2, 1), 512, 0.11, 0.25, 3, 3);
  const double stress_h = 0.2;
  Rng rng(47);
  std::size_t genie_bit_errors = 0, estimated_bit_errors = 0;
  for (int frame = 0; frame < 40; ++frame) {
    const auto messages = random_messages(config, rng);
    const auto symbols = mlc_encode(config, messages);
    const auto received = transmit_bsc(symbols, stress_h, derive_seed(1234, frame));

    std::vector<std::vector<std::uint8_t>> true_codewords(2);
    for (std::size_t level = 0; level < 2; ++level) {
      true_codewords[level] = encode(*config.level_codes[level], messages[level]);
    }
    const MsdResult estimated = msd_decode(config, received, stress_h, 60);
    const MsdResult genie = msd_decode(config, received, stress_h, 60, &true_codewords);
    for (std::size_t i = 0; i < messages[1].size(); ++i) {
      estimated_bit_errors += (estimated.messages[1][i] != messages[1][i]);
      genie_bit_errors += (genie.messages[1][i] != messages[1][i]);
    }
  }
  CHECK(genie_bit_errors <= estimated_bit_errors);
}

TEST_CASE("config serialization round trip") {
  const MlcConfig config = mlc_config_build(build_threshold_mapper(2, 1), 256, 0.11, 0.25, 3, 51);
  const std::string text = mlc_config_to_string(config);
  const MlcConfig parsed = mlc_config_from_string(text);
  CHECK(parsed.block_length == 256);
  CHECK(parsed.design_h == doctest::Approx(0.11));
  CHECK(parsed.backoff == doctest::Approx(0.25));
  CHECK(parsed.mapper.table() == config.mapper.table());
  REQUIRE(parsed.levels() == config.levels());
  for (std::size_t level = 0; level < config.levels(); ++level) {
    REQUIRE(parsed.level_codes[level].has_value() == config.level_codes[level].has_value());
    if (config.level_codes[level]) {
      CHECK(parsed.level_codes[level]->parity() == config.level_codes[level]->parity());
      CHECK(parsed.level_codes[level]->generator() == config.level_codes[level]->generator());
    }
  }
  CHECK_THROWS_AS(mlc_config_from_string("garbage"), std::invalid_argument);

  // build recipes load into the same config as a direct build
  const std::string recipe =
      "mlc_build v1\nmapper_levels 2\nmapper_k 1\nn 256\ndesign_h 0.11\nbackoff 0.25\n"
      "col_weight 3\ncode_seed 51\n";
  const MlcBuildParams params = mlc_build_params_from_string(recipe);
  CHECK(params.mapper_k == 1);
  CHECK(params.block_length == 256);
}

TEST_CASE("bit file round trip") {
  const std::string path = "/tmp/nuimlc_test_bits.bin";
  const std::vector<std::uint8_t> bits = {1, 0, 0, 1, 1, 1, 0};
  write_bits(path, bits);
  CHECK(read_bits(path) == bits);
  std::remove(path.c_str());
}
