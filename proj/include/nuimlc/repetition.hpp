#ifndef NUIMLC_REPETITION_HPP
#define NUIMLC_REPETITION_HPP

#include <cstddef>
#include <vector>

namespace nuimlc {

// Coefficients of the affine type probabilities p_i(p) = A_i p + B_i for the
// m-fold repetition of a Bernoulli(p) bit over a BSC(h). Index i counts
// disagreements with the all-ones transmission, i = 0..m.
struct TypeCoefficients {
  std::size_t reps = 0;
  std::vector<double> a;
  std::vector<double> b;
};

TypeCoefficients type_coefficients(std::size_t reps, double h);

// Exact I(X;Y^m) of the m-fold repetition, via the (m+1)-type sufficient
// statistic with binomial multiplicities (log-domain, stable for large m).
double repetition_rate(double p, double h, std::size_t reps);

// m I(X;Y) - I(X;Y^m), the per-layer repetition penalty. Non-negative.
double rate_loss(double p, double h, std::size_t reps);

// P(XOR of N independent Bernoulli(p) bits = 1) = (1 - (1-2p)^N)/2.
double stack_probability(double p, std::size_t num_layers);

// Inverse of stack_probability in p: (1 - (1-2 p_N)^(1/N))/2.
double per_layer_probability(double p_stack, std::size_t num_layers);

struct LossScanRow {
  std::size_t num_layers = 0;
  double p = 0.0;                // per-layer probability hitting the stack target
  double exact_rate = 0.0;       // I(X;Y^m)
  double m_times_single = 0.0;   // m I(X;Y)
  double delta = 0.0;            // rate_loss
  double delta_over_mp2 = 0.0;   // delta / (m p^2)
  double total_delta = 0.0;      // N * delta
};

struct LossScanReport {
  double h = 0.0;
  std::size_t reps = 0;
  double p_stack_target = 0.0;
  std::vector<LossScanRow> rows;
};

// Total repetition loss N * Delta(p_N) along a layer-count schedule, with the
// per-layer probability chosen so the stack probability stays at the target.
LossScanReport loss_scaling_scan(double h, std::size_t reps, const std::vector<std::size_t>& n_list,
                                 double p_stack_target = 0.4);

// Checks log b + (a/b)x - ((a/b)x)^2/2 <= log(b+ax) <= log b + (a/b)x
// (natural log) at each grid point. The quadratic lower bound is exact for
// ax/b >= 0; for negative ax/b it holds only to cubic order, so it is checked
// with a |ax/b|^3 allowance there. Upper bound is checked exactly.
bool taylor_bound_check(double b, double a, const std::vector<double>& x_grid);

}  // namespace nuimlc

#endif  // NUIMLC_REPETITION_HPP
