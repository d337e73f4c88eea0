#ifndef NUIMLC_RATE_ANALYSIS_HPP
#define NUIMLC_RATE_ANALYSIS_HPP

#include <vector>

#include "nuimlc/infotheory.hpp"
#include "nuimlc/mapper.hpp"

namespace nuimlc {

// Per-level code rates R_i = I(W_i;Y|W_1..W_{i-1}) plus the end-to-end
// channel rate they must sum to.
struct LayerRateReport {
  std::vector<double> per_layer_rates;
  double total = 0.0;
  double channel_rate = 0.0;
};

// Exact per-level conditional mutual informations from the joint law of
// (W_1..W_m, Y) with uniform W and the given channel.
LayerRateReport layer_rates(const DeterministicMapper& mapper, const Dmc& channel);

// sum_i I(W_i;Y) with per-level marginal demapping (inter-level correlation
// ignored).
double bicm_rate(const DeterministicMapper& mapper, const Dmc& channel);

// Baseline: duty-cycle a uniform capacity-achieving code over a 2 p1
// fraction of symbols, zeros elsewhere: 2 p1 (1 - H(h)). Requires p1 <= 1/2.
double timeshare_zeros_rate(double p1, double h);

struct SweepHRow {
  double h = 0.0;
  double mlc = 0.0;
  double bicm = 0.0;
  double ts_zeros = 0.0;
};

struct SweepPRow {
  double p1 = 0.0;
  double mlc = 0.0;       // exact channel rate
  double envelope = 0.0;  // m-level dyadic time-share envelope
  double ts_zeros = 0.0;
};

// Rate curves vs crossover h at fixed dyadic p1 = k/2^m.
std::vector<SweepHRow> sweep_h(double p1, std::size_t levels, const std::vector<double>& h_grid);

// Rate curves vs p1 at fixed h; the envelope is the chord between adjacent
// dyadic rates (exact time sharing of two schemes).
std::vector<SweepPRow> sweep_p(double h, std::size_t levels, const std::vector<double>& p_grid);

// Three routes to the layered-stack rate that must coincide:
//   direct_sum        sum_i I(X_i;Y_i) with layer i on crossover (p_1(+)...(+)p_{i-1})(+)h
//   conditional_chain sum_i I(X_i;Y_n|X_{i+1},...,X_n) from the exact joint
//   stack_rate        I(X_all;Y_n) with X_all the XOR of all layers
struct LayeringChainReport {
  std::vector<double> per_layer_direct;
  double direct_sum = 0.0;
  double conditional_chain = 0.0;
  double stack_rate = 0.0;
  double max_discrepancy = 0.0;
};

LayeringChainReport layering_chain_identity(const std::vector<double>& p_list, double h);

}  // namespace nuimlc

#endif  // NUIMLC_RATE_ANALYSIS_HPP
