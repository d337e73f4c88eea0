#include "nuimlc/repetition.hpp"

#include <cmath>
#include <stdexcept>

#include "nuimlc/infotheory.hpp"

namespace nuimlc {

namespace {

void check_h_open(double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw std::domain_error("repetition: h must lie strictly inside (0, 1)");
  }
}

double log_binomial(std::size_t m, std::size_t i) {
  return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
         std::lgamma(static_cast<double>(m - i) + 1.0);
}

}  // namespace

TypeCoefficients type_coefficients(std::size_t reps, double h) {
  if (reps == 0) throw std::invalid_argument("type_coefficients: reps must be >= 1");
  check_h_open(h);
  TypeCoefficients tc;
  tc.reps = reps;
  tc.a.resize(reps + 1);
  tc.b.resize(reps + 1);
  const double lh = std::log(h), l1h = std::log(1.0 - h);
  for (std::size_t i = 0; i <= reps; ++i) {
    const double di = static_cast<double>(i);
    const double dmi = static_cast<double>(reps - i);
    const double hi_1hmi = std::exp(di * lh + dmi * l1h);    // h^i (1-h)^(m-i)
    const double hmi_1hi = std::exp(dmi * lh + di * l1h);    // h^(m-i) (1-h)^i
    tc.a[i] = hi_1hmi - hmi_1hi;
    tc.b[i] = hmi_1hi;
  }
  return tc;
}

double repetition_rate(double p, double h, std::size_t reps) {
  if (reps == 0) throw std::invalid_argument("repetition_rate: reps must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("repetition_rate: p must lie in [0,1]");
  check_h_open(h);

  // Aggregated types T = number of disagreements with the all-ones word form
  // a sufficient statistic: P(T=i|X=1) and P(T=i|X=0) are binomial.
  const double lh = std::log(h), l1h = std::log(1.0 - h);
  double h_y = 0.0;       // entropy of the type distribution
  double h_y_given = 0.0; // p H(T|X=1) + (1-p) H(T|X=0)
  for (std::size_t i = 0; i <= reps; ++i) {
    const double lb = log_binomial(reps, i);
    const double di = static_cast<double>(i);
    const double dmi = static_cast<double>(reps - i);
    const double p_given_1 = std::exp(lb + di * lh + dmi * l1h);
    const double p_given_0 = std::exp(lb + dmi * lh + di * l1h);
    const double p_type = p * p_given_1 + (1.0 - p) * p_given_0;
    if (p_type > kProbFloor) h_y -= p_type * std::log2(p_type);
    if (p_given_1 > kProbFloor) h_y_given -= p * p_given_1 * std::log2(p_given_1);
    if (p_given_0 > kProbFloor) h_y_given -= (1.0 - p) * p_given_0 * std::log2(p_given_0);
  }
  return std::max(h_y - h_y_given, 0.0);
}

double rate_loss(double p, double h, std::size_t reps) {
  const double loss =
      static_cast<double>(reps) * bsc_nui_rate(p, h) - repetition_rate(p, h, reps);
  if (loss < -1e-12) {
    throw std::logic_error("rate_loss: repetition exceeded the data-processing bound");
  }
  return loss;
}

double stack_probability(double p, std::size_t num_layers) {
  if (!(p >= 0.0 && p <= 0.5)) {
    throw std::domain_error("stack_probability: p must lie in [0, 1/2]");
  }
  if (num_layers == 0) throw std::invalid_argument("stack_probability: need >= 1 layer");
  const double q = 1.0 - 2.0 * p;
  return (1.0 - std::pow(q, static_cast<double>(num_layers))) / 2.0;
}

double per_layer_probability(double p_stack, std::size_t num_layers) {
  if (!(p_stack >= 0.0 && p_stack < 0.5)) {
    throw std::domain_error("per_layer_probability: stack probability must lie in [0, 1/2)");
  }
  if (num_layers == 0) throw std::invalid_argument("per_layer_probability: need >= 1 layer");
  const double q = 1.0 - 2.0 * p_stack;
  return (1.0 - std::pow(q, 1.0 / static_cast<double>(num_layers))) / 2.0;
}

LossScanReport loss_scaling_scan(double h, std::size_t reps,
                                 const std::vector<std::size_t>& n_list, double p_stack_target) {
  if (!(h > 0.0 && h < 0.5)) {
    throw std::domain_error("loss_scaling_scan: h must lie strictly inside (0, 1/2)");
  }
  LossScanReport report;
  report.h = h;
  report.reps = reps;
  report.p_stack_target = p_stack_target;
  for (std::size_t n : n_list) {
    LossScanRow row;
    row.num_layers = n;
    row.p = per_layer_probability(p_stack_target, n);
    row.exact_rate = repetition_rate(row.p, h, reps);
    row.m_times_single = static_cast<double>(reps) * bsc_nui_rate(row.p, h);
    row.delta = rate_loss(row.p, h, reps);
    row.delta_over_mp2 = row.delta / (static_cast<double>(reps) * row.p * row.p);
    row.total_delta = static_cast<double>(n) * row.delta;
    report.rows.push_back(row);
  }
  return report;
}

bool taylor_bound_check(double b, double a, const std::vector<double>& x_grid) {
  if (!(b > 0.0)) throw std::domain_error("taylor_bound_check: b must be positive");
  for (double x : x_grid) {
    if (!(b + a * x > 0.0)) {
      throw std::domain_error("taylor_bound_check: b + a x must stay positive on the grid");
    }
    const double u = a * x / b;
    const double exact = std::log(b + a * x);
    const double upper = std::log(b) + u;
    if (exact > upper + 1e-15) return false;
    if (std::abs(u) <= 1.0) {
      const double lower = std::log(b) + u - 0.5 * u * u;
      // the quadratic truncation undershoots only to cubic order when u < 0
      const double allowance = (u >= 0.0) ? 1e-15 : std::abs(u * u * u) + 1e-15;
      if (exact < lower - allowance) return false;
    }
  }
  return true;
}

}  // namespace nuimlc
