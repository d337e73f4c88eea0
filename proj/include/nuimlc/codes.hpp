#ifndef NUIMLC_CODES_HPP
#define NUIMLC_CODES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nuimlc/gf2.hpp"

namespace nuimlc {

// Log-likelihood ratios log(P(bit=0)/P(bit=1)), natural log. Magnitudes are
// clamped to kLlrClamp before decoding to keep tanh-domain updates finite.
inline constexpr double kLlrClamp = 30.0;

struct SoftObservation {
  std::vector<double> llrs;
};

// Binary linear block code. The generator rows form a null-space basis of the
// parity matrix; message bit j appears verbatim at codeword position
// message_positions[j], which makes message extraction from a decoded
// codeword trivial. The parity matrix may carry redundant rows (its rank is
// n - k regardless).
class LinearCode {
 public:
  LinearCode(BitMatrix parity, BitMatrix generator, std::vector<std::size_t> message_positions);

  // Derives the generator from the parity matrix's null space.
  static LinearCode from_parity(BitMatrix parity);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  const BitMatrix& generator() const { return generator_; }
  const BitMatrix& parity() const { return parity_; }
  const std::vector<std::size_t>& message_positions() const { return message_positions_; }

  // sparse adjacency for message passing
  const std::vector<std::vector<std::uint32_t>>& check_to_vars() const { return check_vars_; }
  const std::vector<std::vector<std::uint32_t>>& var_to_checks() const { return var_checks_; }

  std::vector<std::uint8_t> extract_message(const std::vector<std::uint8_t>& codeword) const;
  bool parity_ok(const std::vector<std::uint8_t>& word) const;

 private:
  std::size_t n_ = 0, k_ = 0;
  BitMatrix parity_;
  BitMatrix generator_;
  std::vector<std::size_t> message_positions_;
  std::vector<std::vector<std::uint32_t>> check_vars_;
  std::vector<std::vector<std::uint32_t>> var_checks_;
};

// Column-regular LDPC code with row weights as even as possible, sampled by
// socket matching with duplicate-edge repair and bounded 4-cycle reduction.
// Deterministic for a fixed seed. Throws if no duplicate-free assignment is
// found within the retry budget. n(1-rate) must be integral.
LinearCode make_regular_ldpc(std::size_t n, double rate, std::size_t col_weight,
                             std::uint64_t seed);

std::vector<std::uint8_t> encode(const LinearCode& code, const std::vector<std::uint8_t>& message);

struct BpResult {
  std::vector<std::uint8_t> codeword;
  bool converged = false;
  std::size_t iterations = 0;
};

// Flooding-schedule sum-product decoding. Ties in the hard decision go to
// bit 0. Non-convergence is reported through the flag, never thrown.
BpResult bp_decode(const LinearCode& code, const SoftObservation& obs, std::size_t max_iters);

// Exhaustive maximum-likelihood decoding for k <= 20; ties broken by the
// lexicographically smallest message.
std::vector<std::uint8_t> ml_decode_exact(const LinearCode& code, const SoftObservation& obs);

// alist-style sparse text form of a parity matrix.
std::string parity_to_alist(const BitMatrix& parity);
BitMatrix parity_from_alist(const std::string& text);

}  // namespace nuimlc

#endif  // NUIMLC_CODES_HPP
