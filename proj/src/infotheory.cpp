#include "nuimlc/infotheory.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nuimlc {

namespace {

double xlog2x(double p) {
  if (p < kProbFloor) return 0.0;
  return p * std::log2(p);
}

void check_probability(double q, const char* name) {
  if (!(q >= -kProbTol && q <= 1.0 + kProbTol)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1], got " + std::to_string(q));
  }
}

double clamp01(double q) {
  if (q < 0.0) return 0.0;
  if (q > 1.0) return 1.0;
  return q;
}

}  // namespace

JointTable::JointTable(std::vector<std::size_t> dims, std::vector<double> probs)
    : dims_(std::move(dims)), probs_(std::move(probs)) {
  if (dims_.empty()) throw std::invalid_argument("JointTable: dims must be nonempty");
  std::size_t expected = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("JointTable: zero-sized alphabet");
    expected *= d;
  }
  if (probs_.size() != expected) {
    throw std::invalid_argument("JointTable: table size does not match dims");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (p < 0.0) {
      if (p < -kProbTol) throw std::invalid_argument("JointTable: negative probability");
      p = 0.0;
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw std::invalid_argument("JointTable: entries sum to " + std::to_string(total));
  }
  for (double& p : probs_) p = std::max(p, 0.0) / total;
}

double JointTable::at(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw std::invalid_argument("JointTable::at: bad index rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (index[i] >= dims_[i]) throw std::out_of_range("JointTable::at: index out of range");
    flat = flat * dims_[i] + index[i];
  }
  return probs_[flat];
}

Dmc::Dmc(std::size_t num_inputs, std::size_t num_outputs, std::vector<double> transition)
    : num_inputs_(num_inputs), num_outputs_(num_outputs), transition_(std::move(transition)) {
  if (num_inputs_ == 0 || num_outputs_ == 0) {
    throw std::invalid_argument("Dmc: alphabets must be nonempty");
  }
  if (transition_.size() != num_inputs_ * num_outputs_) {
    throw std::invalid_argument("Dmc: transition table size mismatch");
  }
  for (std::size_t x = 0; x < num_inputs_; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < num_outputs_; ++y) {
      double p = transition_[x * num_outputs_ + y];
      if (p < -kProbTol || p > 1.0 + kProbTol) {
        throw std::invalid_argument("Dmc: entry outside [0,1]");
      }
      row += p;
    }
    if (std::abs(row - 1.0) > kProbTol) {
      throw std::invalid_argument("Dmc: row " + std::to_string(x) + " sums to " + std::to_string(row));
    }
    for (std::size_t y = 0; y < num_outputs_; ++y) {
      double& p = transition_[x * num_outputs_ + y];
      p = clamp01(p) / row;
    }
  }
}

Dmc Dmc::bsc(double crossover) {
  check_probability(crossover, "crossover");
  double h = clamp01(crossover);
  return Dmc(2, 2, {1.0 - h, h, h, 1.0 - h});
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= xlog2x(p);
  return h;
}

double binary_entropy(double q) {
  check_probability(q, "q");
  q = clamp01(q);
  return -xlog2x(q) - xlog2x(1.0 - q);
}

double binary_convolve(double p, double h) {
  check_probability(p, "p");
  check_probability(h, "h");
  p = clamp01(p);
  h = clamp01(h);
  return p * (1.0 - h) + (1.0 - p) * h;
}

double mutual_information(const JointTable& joint) {
  if (joint.num_vars() != 2) {
    throw std::invalid_argument("mutual_information: joint must have exactly 2 variables");
  }
  const std::size_t na = joint.dims()[0];
  const std::size_t nb = joint.dims()[1];
  const auto& p = joint.probs();
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      pa[a] += p[a * nb + b];
      pb[b] += p[a * nb + b];
    }
  }
  double info = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      double pab = p[a * nb + b];
      if (pab < kProbFloor) continue;
      info += pab * std::log2(pab / (pa[a] * pb[b]));
    }
  }
  return std::max(info, 0.0);
}

double conditional_mutual_information(const JointTable& joint) {
  if (joint.num_vars() != 3) {
    throw std::invalid_argument(
        "conditional_mutual_information: joint must have exactly 3 variables");
  }
  const std::size_t na = joint.dims()[0];
  const std::size_t nb = joint.dims()[1];
  const std::size_t nc = joint.dims()[2];
  const auto& p = joint.probs();
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) {
    return p[(a * nb + b) * nc + c];
  };
  double info = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    double pc = 0.0;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b) pc += at(a, b, c);
    if (pc < kProbFloor) continue;
    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        pa[a] += at(a, b, c);
        pb[b] += at(a, b, c);
      }
    }
    double slice = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        double pab = at(a, b, c);
        if (pab < kProbFloor) continue;
        // conditional ratio: (pab/pc) / ((pa/pc)(pb/pc)) = pab*pc/(pa*pb)
        slice += pab * std::log2(pab * pc / (pa[a] * pb[b]));
      }
    }
    info += slice;
  }
  return std::max(info, 0.0);
}

double bsc_nui_rate(double p, double h) {
  return binary_entropy(binary_convolve(p, h)) - binary_entropy(h);
}

double low_rate_asymptote(double p, double h) {
  check_probability(p, "p");
  if (!(h > kProbTol && h < 0.5 - kProbTol)) {
    throw std::domain_error("low_rate_asymptote: h must lie strictly inside (0, 1/2)");
  }
  return p * (1.0 - 2.0 * h) * std::log2((1.0 - h) / h);
}

}  // namespace nuimlc
