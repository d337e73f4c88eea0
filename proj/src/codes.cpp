#include "nuimlc/codes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nuimlc/rng.hpp"

namespace nuimlc {

namespace {

double clamp_llr(double v) {
  if (v > kLlrClamp) return kLlrClamp;
  if (v < -kLlrClamp) return -kLlrClamp;
  return v;
}

}  // namespace

LinearCode::LinearCode(BitMatrix parity, BitMatrix generator,
                       std::vector<std::size_t> message_positions)
    : n_(parity.cols()), k_(generator.rows()), parity_(std::move(parity)),
      generator_(std::move(generator)), message_positions_(std::move(message_positions)) {
  if (generator_.cols() != n_) throw std::invalid_argument("LinearCode: width mismatch");
  if (message_positions_.size() != k_) {
    throw std::invalid_argument("LinearCode: message position count must equal k");
  }
  if (gf2_rank(parity_) != n_ - k_) {
    throw std::invalid_argument("LinearCode: parity rank must equal n - k");
  }
  // every generator row must satisfy every check
  for (std::size_t r = 0; r < k_; ++r) {
    std::vector<std::uint8_t> row(n_);
    for (std::size_t c = 0; c < n_; ++c) row[c] = generator_.get(r, c);
    for (std::uint8_t s : gf2_matvec(parity_, row)) {
      if (s) throw std::invalid_argument("LinearCode: generator is not in the parity null space");
    }
  }
  check_vars_.resize(parity_.rows());
  var_checks_.resize(n_);
  for (std::size_t r = 0; r < parity_.rows(); ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (parity_.get(r, c)) {
        check_vars_[r].push_back(static_cast<std::uint32_t>(c));
        var_checks_[c].push_back(static_cast<std::uint32_t>(r));
      }
    }
  }
}

LinearCode LinearCode::from_parity(BitMatrix parity) {
  NullSpace ns = gf2_null_space(parity);
  return LinearCode(std::move(parity), std::move(ns.basis), std::move(ns.free_columns));
}

std::vector<std::uint8_t> LinearCode::extract_message(
    const std::vector<std::uint8_t>& codeword) const {
  std::vector<std::uint8_t> msg(k_);
  for (std::size_t j = 0; j < k_; ++j) msg[j] = codeword[message_positions_[j]] & 1u;
  return msg;
}

bool LinearCode::parity_ok(const std::vector<std::uint8_t>& word) const {
  for (const auto& vars : check_vars_) {
    std::uint8_t acc = 0;
    for (std::uint32_t v : vars) acc ^= word[v];
    if (acc) return false;
  }
  return true;
}

LinearCode make_regular_ldpc(std::size_t n, double rate, std::size_t col_weight,
                             std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("make_regular_ldpc: n must be positive");
  const double checks_real = static_cast<double>(n) * (1.0 - rate);
  const double checks_round = std::round(checks_real);
  if (std::abs(checks_real - checks_round) > 1e-6 || checks_round < 1.0) {
    throw std::invalid_argument("make_regular_ldpc: n(1-rate) must be a positive integer");
  }
  const std::size_t num_checks = static_cast<std::size_t>(checks_round);
  if (col_weight < 2 || col_weight > num_checks) {
    throw std::invalid_argument("make_regular_ldpc: col_weight must lie in [2, n(1-rate)]");
  }

  const std::size_t num_edges = n * col_weight;
  Rng rng(seed);

  // check-socket multiset with row weights as even as possible
  std::vector<std::uint32_t> check_of_socket;
  check_of_socket.reserve(num_edges);
  const std::size_t base_w = num_edges / num_checks;
  const std::size_t extra = num_edges % num_checks;
  for (std::size_t c = 0; c < num_checks; ++c) {
    const std::size_t w = base_w + (c < extra ? 1 : 0);
    for (std::size_t j = 0; j < w; ++j) check_of_socket.push_back(static_cast<std::uint32_t>(c));
  }

  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // random matching of variable sockets to check sockets
    std::vector<std::uint32_t> sockets = check_of_socket;
    for (std::size_t i = sockets.size(); i > 1; --i) {
      std::swap(sockets[i - 1], sockets[rng.next_below(i)]);
    }
    // edges[v] = sorted set of checks attached to variable v
    std::vector<std::vector<std::uint32_t>> var_checks(n);
    for (std::size_t v = 0; v < n; ++v) {
      var_checks[v].assign(sockets.begin() + v * col_weight,
                           sockets.begin() + (v + 1) * col_weight);
    }

    // repair duplicate edges by swapping one endpoint with a random other edge
    auto has_dup = [](std::vector<std::uint32_t>& cs) {
      std::sort(cs.begin(), cs.end());
      return std::adjacent_find(cs.begin(), cs.end()) != cs.end();
    };
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      std::size_t guard = 0;
      while (has_dup(var_checks[v])) {
        if (++guard > 1000) { ok = false; break; }
        // pick the duplicated entry and a random edge elsewhere
        std::size_t dup_pos = 0;
        for (std::size_t j = 1; j < col_weight; ++j) {
          if (var_checks[v][j] == var_checks[v][j - 1]) { dup_pos = j; break; }
        }
        const std::size_t v2 = rng.next_below(n);
        if (v2 == v) continue;
        const std::size_t j2 = rng.next_below(col_weight);
        const std::uint32_t mine = var_checks[v][dup_pos];
        const std::uint32_t theirs = var_checks[v2][j2];
        if (mine == theirs) continue;
        if (std::find(var_checks[v].begin(), var_checks[v].end(), theirs) != var_checks[v].end())
          continue;
        if (std::find(var_checks[v2].begin(), var_checks[v2].end(), mine) != var_checks[v2].end())
          continue;
        var_checks[v][dup_pos] = theirs;
        var_checks[v2][j2] = mine;
      }
    }
    if (!ok) continue;

    // bounded 4-cycle reduction: whenever two variables share a pair of
    // checks, swap one offending edge with a random edge elsewhere; repeat
    // passes until the graph stops improving or reaches girth >= 6
    const std::size_t reduction_passes = 64;
    for (std::size_t pass = 0; pass < reduction_passes; ++pass) {
      std::set<std::uint64_t> seen;  // (min_check, max_check) pairs across variables
      bool any_cycle = false;
      bool improved = false;
      for (std::size_t v = 0; v < n; ++v) {
        std::sort(var_checks[v].begin(), var_checks[v].end());
        bool swapped = false;
        for (std::size_t a = 0; a < col_weight && !swapped; ++a) {
          for (std::size_t b = a + 1; b < col_weight && !swapped; ++b) {
            const std::uint64_t key =
                (std::uint64_t{var_checks[v][a]} << 32) | var_checks[v][b];
            if (!seen.insert(key).second) {
              any_cycle = true;
              for (std::size_t guard = 0; guard < 200; ++guard) {
                const std::size_t v2 = rng.next_below(n);
                const std::size_t j2 = rng.next_below(col_weight);
                const std::uint32_t mine = var_checks[v][b];
                const std::uint32_t theirs = var_checks[v2][j2];
                if (v2 == v || mine == theirs) continue;
                if (std::find(var_checks[v].begin(), var_checks[v].end(), theirs) !=
                    var_checks[v].end())
                  continue;
                if (std::find(var_checks[v2].begin(), var_checks[v2].end(), mine) !=
                    var_checks[v2].end())
                  continue;
                var_checks[v][b] = theirs;
                var_checks[v2][j2] = mine;
                swapped = true;
                improved = true;
                break;
              }
            }
          }
        }
      }
      if (!any_cycle || !improved) break;
    }

    BitMatrix parity(num_checks, n);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::uint32_t c : var_checks[v]) parity.set(c, v, true);
    }
    return LinearCode::from_parity(std::move(parity));
  }
  throw std::runtime_error("make_regular_ldpc: failed to sample a duplicate-free graph");
}

std::vector<std::uint8_t> encode(const LinearCode& code, const std::vector<std::uint8_t>& message) {
  if (message.size() != code.k()) throw std::invalid_argument("encode: message length mismatch");
  return gf2_vecmat(message, code.generator());
}

BpResult bp_decode(const LinearCode& code, const SoftObservation& obs, std::size_t max_iters) {
  if (obs.llrs.size() != code.n()) throw std::invalid_argument("bp_decode: observation length mismatch");
  if (max_iters < 1) throw std::invalid_argument("bp_decode: max_iters must be >= 1");

  const auto& check_vars = code.check_to_vars();
  const auto& var_checks = code.var_to_checks();
  const std::size_t num_checks = check_vars.size();

  std::vector<double> channel(code.n());
  for (std::size_t v = 0; v < code.n(); ++v) channel[v] = clamp_llr(obs.llrs[v]);

  BpResult result;
  result.codeword.resize(code.n());
  auto harden = [&](const std::vector<double>& totals) {
    for (std::size_t v = 0; v < code.n(); ++v) result.codeword[v] = totals[v] < 0.0 ? 1 : 0;
  };

  harden(channel);
  if (code.parity_ok(result.codeword)) {
    result.converged = true;
    return result;
  }

  // edge storage: per check, messages to/from each adjacent variable
  std::vector<std::vector<double>> check_msg(num_checks);  // check -> var
  for (std::size_t c = 0; c < num_checks; ++c) check_msg[c].assign(check_vars[c].size(), 0.0);
  // position of check c in var v's adjacency, for gathering
  std::vector<std::vector<std::uint32_t>> edge_slot(num_checks);
  {
    std::vector<std::uint32_t> cursor(code.n(), 0);
    for (std::size_t c = 0; c < num_checks; ++c) {
      edge_slot[c].resize(check_vars[c].size());
      for (std::size_t j = 0; j < check_vars[c].size(); ++j) {
        edge_slot[c][j] = cursor[check_vars[c][j]]++;
      }
    }
  }
  std::vector<std::vector<double>> var_msg(code.n());  // var -> check, indexed like var_checks
  for (std::size_t v = 0; v < code.n(); ++v) var_msg[v].assign(var_checks[v].size(), channel[v]);

  std::vector<double> totals(code.n());
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    // check update (tanh rule with self-exclusion via forward/backward products)
    for (std::size_t c = 0; c < num_checks; ++c) {
      const auto& vars = check_vars[c];
      const std::size_t deg = vars.size();
      if (deg == 0) continue;
      static thread_local std::vector<double> t, fwd, bwd;
      t.resize(deg); fwd.resize(deg + 1); bwd.resize(deg + 1);
      for (std::size_t j = 0; j < deg; ++j) {
        const std::uint32_t v = vars[j];
        // locate message from v to c
        const auto& vc = var_checks[v];
        std::size_t slot = 0;
        while (vc[slot] != c) ++slot;
        t[j] = std::tanh(0.5 * clamp_llr(var_msg[v][slot]));
      }
      fwd[0] = 1.0; bwd[deg] = 1.0;
      for (std::size_t j = 0; j < deg; ++j) fwd[j + 1] = fwd[j] * t[j];
      for (std::size_t j = deg; j > 0; --j) bwd[j - 1] = bwd[j] * t[j - 1];
      for (std::size_t j = 0; j < deg; ++j) {
        double prod = fwd[j] * bwd[j + 1];
        if (prod > 0.999999999999) prod = 0.999999999999;
        if (prod < -0.999999999999) prod = -0.999999999999;
        check_msg[c][j] = 2.0 * std::atanh(prod);
      }
    }
    // variable update and posterior
    for (std::size_t v = 0; v < code.n(); ++v) totals[v] = channel[v];
    for (std::size_t c = 0; c < num_checks; ++c) {
      for (std::size_t j = 0; j < check_vars[c].size(); ++j) totals[check_vars[c][j]] += check_msg[c][j];
    }
    for (std::size_t v = 0; v < code.n(); ++v) {
      const auto& vc = var_checks[v];
      for (std::size_t s = 0; s < vc.size(); ++s) {
        // subtract this check's own contribution
        const std::uint32_t c = vc[s];
        const auto& vars = check_vars[c];
        std::size_t j = 0;
        while (vars[j] != v) ++j;
        var_msg[v][s] = clamp_llr(totals[v] - check_msg[c][j]);
      }
    }
    harden(totals);
    result.iterations = iter;
    if (code.parity_ok(result.codeword)) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

std::vector<std::uint8_t> ml_decode_exact(const LinearCode& code, const SoftObservation& obs) {
  if (obs.llrs.size() != code.n()) throw std::invalid_argument("ml_decode_exact: length mismatch");
  if (code.k() > 20) throw std::invalid_argument("ml_decode_exact: k must be <= 20");

  const std::size_t k = code.k();
  std::vector<std::uint8_t> best_codeword;
  double best_score = 0.0;
  std::vector<std::uint8_t> message(k);
  // big-endian message bits: increasing j enumerates messages in lex order
  for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
    for (std::size_t i = 0; i < k; ++i) message[i] = (j >> (k - 1 - i)) & 1u;
    std::vector<std::uint8_t> cw = encode(code, message);
    double score = 0.0;  // log P(obs|cw) up to a constant: sum of llrs where bit = 0
    for (std::size_t t = 0; t < cw.size(); ++t) {
      if (!cw[t]) score += obs.llrs[t];
    }
    if (j == 0 || score > best_score) {
      best_score = score;
      best_codeword = std::move(cw);
    }
  }
  return best_codeword;
}

std::string parity_to_alist(const BitMatrix& parity) {
  const std::size_t n = parity.cols(), m = parity.rows();
  std::vector<std::vector<std::size_t>> col_list(n), row_list(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (parity.get(r, c)) {
        col_list[c].push_back(r + 1);  // alist indices are 1-based
        row_list[r].push_back(c + 1);
      }
    }
  }
  std::size_t max_col = 0, max_row = 0;
  for (const auto& l : col_list) max_col = std::max(max_col, l.size());
  for (const auto& l : row_list) max_row = std::max(max_row, l.size());

  std::ostringstream out;
  out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
  for (std::size_t c = 0; c < n; ++c) out << col_list[c].size() << (c + 1 < n ? ' ' : '\n');
  for (std::size_t r = 0; r < m; ++r) out << row_list[r].size() << (r + 1 < m ? ' ' : '\n');
  for (const auto& l : col_list) {
    for (std::size_t i = 0; i < l.size(); ++i) out << l[i] << (i + 1 < l.size() ? ' ' : '\n');
    if (l.empty()) out << '\n';
  }
  for (const auto& l : row_list) {
    for (std::size_t i = 0; i < l.size(); ++i) out << l[i] << (i + 1 < l.size() ? ' ' : '\n');
    if (l.empty()) out << '\n';
  }
  return out.str();
}

BitMatrix parity_from_alist(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0, m = 0, max_col = 0, max_row = 0;
  if (!(in >> n >> m >> max_col >> max_row) || n == 0 || m == 0) {
    throw std::invalid_argument("parity_from_alist: bad header");
  }
  std::vector<std::size_t> col_deg(n), row_deg(m);
  for (auto& d : col_deg) in >> d;
  for (auto& d : row_deg) in >> d;
  BitMatrix parity(m, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < col_deg[c]; ++i) {
      std::size_t r = 0;
      if (!(in >> r) || r == 0 || r > m) throw std::invalid_argument("parity_from_alist: bad column entry");
      parity.set(r - 1, c, true);
    }
  }
  // row lists are redundant with the column lists; consume if present
  return parity;
}

}  // namespace nuimlc
