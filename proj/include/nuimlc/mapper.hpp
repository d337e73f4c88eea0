#ifndef NUIMLC_MAPPER_HPP
#define NUIMLC_MAPPER_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace nuimlc {

// Deterministic many-to-one map from m uniform bits to a channel symbol.
// Word value convention: level 1 is the most significant bit, so the word
// (w_1,...,w_m) has integer value sum_i w_i 2^(m-i) and indexes the table
// directly. Immutable after construction.
class DeterministicMapper {
 public:
  DeterministicMapper(std::size_t levels, std::vector<std::uint32_t> table,
                      std::uint32_t output_alphabet_size);

  std::size_t levels() const { return levels_; }
  std::size_t num_words() const { return table_.size(); }
  std::uint32_t output_alphabet_size() const { return output_alphabet_size_; }
  std::uint32_t map(std::size_t word) const { return table_[word]; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  // bit of the word at a given level (1-based, level 1 = MSB)
  static bool level_bit(std::size_t word, std::size_t level, std::size_t levels) {
    return (word >> (levels - level)) & 1u;
  }

 private:
  std::size_t levels_;
  std::vector<std::uint32_t> table_;
  std::uint32_t output_alphabet_size_;
};

// Time-sharing fraction between the k/2^m and (k+1)/2^m threshold mappers.
struct TimeShareSplit {
  std::uint32_t k = 0;
  std::size_t levels = 0;
  double lambda = 1.0;  // fraction of symbols on the k/2^m scheme
};

// Binary-output mapper with f(w) = 1 iff value(w) < k, so P(X=1) = k/2^m.
DeterministicMapper build_threshold_mapper(std::size_t levels, std::uint32_t k);

// P(x) = |f^{-1}(x)| / 2^m; exact dyadic values.
std::vector<double> induced_distribution(const DeterministicMapper& mapper);

// k minimizing |p_target - k/2^m|, ties toward smaller k.
std::uint32_t dyadic_approximation(double p_target, std::size_t levels);

// Fraction split so that lambda k/2^m + (1-lambda)(k+1)/2^m = p_target.
// Exactly dyadic targets give lambda = 1 (p_target = 1 is represented as
// k = 2^m - 1, lambda = 0 to keep k < 2^m).
TimeShareSplit timeshare_split(double p_target, std::size_t levels);

// Text form "m=<m> table=<comma-separated symbol indices>".
std::string mapper_to_string(const DeterministicMapper& mapper);
DeterministicMapper mapper_from_string(const std::string& line);

}  // namespace nuimlc

#endif  // NUIMLC_MAPPER_HPP
