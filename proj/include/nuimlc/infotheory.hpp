#ifndef NUIMLC_INFOTHEORY_HPP
#define NUIMLC_INFOTHEORY_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace nuimlc {

// All rates and entropies are in bits (log base 2). Probabilities below
// kProbFloor are treated as exact zeros (0 log 0 = 0 convention).
inline constexpr double kProbFloor = 1e-300;
inline constexpr double kProbTol = 1e-12;

// Joint probability table over a tuple of discrete variables. Entries are
// stored flat in row-major order (first variable slowest). Construction
// validates non-negativity and total mass; a total within kProbTol of 1 is
// renormalized, anything further off is rejected.
class JointTable {
 public:
  JointTable(std::vector<std::size_t> dims, std::vector<double> probs);

  std::size_t num_vars() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& probs() const { return probs_; }

  double at(std::span<const std::size_t> index) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> probs_;
};

// Discrete memoryless channel: row-stochastic transition table P(y|x).
class Dmc {
 public:
  Dmc(std::size_t num_inputs, std::size_t num_outputs, std::vector<double> transition);

  static Dmc bsc(double crossover);

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_outputs() const { return num_outputs_; }
  double transition(std::size_t x, std::size_t y) const {
    return transition_[x * num_outputs_ + y];
  }

 private:
  std::size_t num_inputs_;
  std::size_t num_outputs_;
  std::vector<double> transition_;
};

// H(p) of a probability vector, in bits.
double entropy(std::span<const double> probs);

// H(q) of a Bernoulli(q) variable. Domain error outside [0,1] (tolerance kProbTol).
double binary_entropy(double q);

// p (+) h: probability that the XOR of independent Bernoulli(p) and
// Bernoulli(h) bits is 1.
double binary_convolve(double p, double h);

// I(A;B) of a 2-variable joint table.
double mutual_information(const JointTable& joint);

// I(A;B|C) of a 3-variable joint table, as sum_c P(c) I(A;B|C=c).
double conditional_mutual_information(const JointTable& joint);

// I(X;Y) of a BSC with crossover h and input P(X=1)=p: H(p (+) h) - H(h).
double bsc_nui_rate(double p, double h);

// First-order expansion of bsc_nui_rate in p: p (1-2h) log2((1-h)/h).
// Requires 0 < h < 1/2.
double low_rate_asymptote(double p, double h);

}  // namespace nuimlc

#endif  // NUIMLC_INFOTHEORY_HPP
