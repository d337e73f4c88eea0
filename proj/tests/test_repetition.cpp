#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nuimlc/infotheory.hpp"
#include "nuimlc/repetition.hpp"

using namespace nuimlc;

namespace {

double binomial(std::size_t m, std::size_t i) {
  double b = 1.0;
  for (std::size_t j = 0; j < i; ++j) b = b * static_cast<double>(m - j) / static_cast<double>(j + 1);
  return b;
}

// brute-force I(X;Y^m) over all 2^m output vectors
double repetition_rate_bruteforce(double p, double h, std::size_t m) {
  double info = 0.0;
  for (std::size_t y = 0; y < (std::size_t{1} << m); ++y) {
    double p_given_1 = 1.0, p_given_0 = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const bool bit = (y >> j) & 1u;
      p_given_1 *= bit ? 1.0 - h : h;
      p_given_0 *= bit ? h : 1.0 - h;
    }
    const double p_y = p * p_given_1 + (1.0 - p) * p_given_0;
    if (p_given_1 > 0.0 && p > 0.0) info += p * p_given_1 * std::log2(p_given_1 / p_y);
    if (p_given_0 > 0.0 && p < 1.0) info += (1.0 - p) * p_given_0 * std::log2(p_given_0 / p_y);
  }
  return info;
}

// double-precision error budget of the round trip through the stack value:
// storing s = (1-q^N)/2 quantizes q^N at about one ulp of 1, which the N-th
// root maps back to a q (and hence p) perturbation of q^(1-N)/N ulps
double roundtrip_tolerance(double p, std::size_t num_layers) {
  const double q = 1.0 - 2.0 * p;
  const double bound = 3e-16 * std::pow(q, 1.0 - static_cast<double>(num_layers)) /
                       static_cast<double>(num_layers);
  return std::max(1e-14, bound);
}

}  // namespace

TEST_CASE("type_coefficients values") {
  const auto tc = type_coefficients(2, 0.1);
  REQUIRE(tc.a.size() == 3);
  CHECK(tc.a[0] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(tc.a[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(tc.a[2] == doctest::Approx(-0.8).epsilon(1e-14));
  CHECK(tc.b[0] == doctest::Approx(0.01).epsilon(1e-13));
  CHECK(tc.b[1] == doctest::Approx(0.09).epsilon(1e-13));
  CHECK(tc.b[2] == doctest::Approx(0.81).epsilon(1e-13));

  for (double h : {0.05, 0.3, 0.45}) {
    const auto one = type_coefficients(1, h);
    CHECK(one.a[0] == doctest::Approx(1.0 - 2.0 * h).epsilon(1e-14));
    CHECK(one.a[1] == doctest::Approx(2.0 * h - 1.0).epsilon(1e-14));
    CHECK(one.b[0] == doctest::Approx(h).epsilon(1e-14));
    CHECK(one.b[1] == doctest::Approx(1.0 - h).epsilon(1e-14));
  }
  for (std::size_t m : {1u, 3u, 8u}) {
    for (double a : type_coefficients(m, 0.5).a) CHECK(a == doctest::Approx(0.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(type_coefficients(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(type_coefficients(2, 1.0), std::domain_error);
  CHECK_THROWS_AS(type_coefficients(0, 0.1), std::invalid_argument);
}

TEST_CASE("type coefficient identities") {
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
    for (double h = 0.05; h < 0.46; h += 0.05) {
      const auto tc = type_coefficients(m, h);
      double sum_b = 0.0, sum_a = 0.0;
      for (std::size_t i = 0; i <= m; ++i) {
        sum_b += binomial(m, i) * tc.b[i];
        sum_a += binomial(m, i) * tc.a[i];
        CHECK(tc.a[i] == doctest::Approx(-tc.a[m - i]).epsilon(1e-12));
        // p_i(p) stays a probability across the whole range
        for (double p : {0.0, 0.5, 1.0}) {
          const double pi = tc.a[i] * p + tc.b[i];
          CHECK(pi >= -1e-15);
          CHECK(pi <= 1.0 + 1e-15);
        }
      }
      CHECK(std::abs(sum_b - 1.0) <= 1e-12);
      CHECK(std::abs(sum_a) <= 1e-12);
    }
  }
}

TEST_CASE("repetition_rate reductions and oracle") {
  for (double p : {0.1, 0.35}) {
    for (double h : {0.05, 0.3}) {
      CHECK(repetition_rate(p, h, 1) == doctest::Approx(bsc_nui_rate(p, h)).epsilon(1e-13));
    }
  }
  CHECK(repetition_rate(0.5, 0.1, 2) == doctest::Approx(0.7420858585497174).epsilon(1e-12));
  CHECK(repetition_rate(0.5, 0.1, 2) ==
        doctest::Approx(repetition_rate_bruteforce(0.5, 0.1, 2)).epsilon(1e-12));

  const double ratio = repetition_rate(1e-4, 0.3, 4) / (4.0 * bsc_nui_rate(1e-4, 0.3));
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.0);
}

TEST_CASE("type-based rate equals brute force up to m = 6") {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (double p : {0.05, 0.25, 0.5}) {
      for (double h : {0.1, 0.3, 0.45}) {
        CHECK(std::abs(repetition_rate(p, h, m) - repetition_rate_bruteforce(p, h, m)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("repetition_rate respects data processing and monotonicity") {
  for (double p : {0.05, 0.2, 0.5}) {
    for (double h : {0.1, 0.3}) {
      double prev = 0.0;
      for (std::size_t m = 1; m <= 10; ++m) {
        const double rate = repetition_rate(p, h, m);
        CHECK(rate <= static_cast<double>(m) * bsc_nui_rate(p, h) + 1e-12);
        CHECK(rate <= binary_entropy(p) + 1e-12);
        CHECK(rate >= prev - 1e-12);
        prev = rate;
      }
    }
  }
}

TEST_CASE("deficiency vanishes as p shrinks, one decade ratio toward 0.1") {
  // The first-order agreement of I(X;Y^m) with m I(X;Y) shows up as the
  // deficiency dropping roughly tenfold per decade of p -- once p is small
  // enough that the H(p) source-entropy ceiling no longer binds, i.e.
  // m (1-2h) log2((1-h)/h) < log2(1/p). Outside that regime the decade
  // ratio sits well above 0.1 (e.g. 0.69 for h=0.1, m=8 at p=1e-3).
  for (double h : {0.1, 0.2, 0.3, 0.4}) {
    for (std::size_t m : {2u, 4u, 8u}) {
      auto deficiency = [&](double p) {
        return 1.0 - repetition_rate(p, h, m) / (static_cast<double>(m) * bsc_nui_rate(p, h));
      };
      double prev_def = deficiency(1e-2);
      double prev_ratio = 1.0;
      for (double p : {1e-3, 1e-4, 1e-5}) {
        const double def = deficiency(p);
        CHECK(def > 0.0);
        CHECK(def < prev_def);
        const double ratio = def / prev_def;
        CHECK(ratio <= prev_ratio + 1e-9);
        prev_def = def;
        prev_ratio = ratio;
      }
      CHECK(prev_ratio >= 0.099);  // never drops faster than linear
      CHECK(prev_ratio <= 0.61);   // worst ceiling-bound case (h=0.1, m=8) is 0.604
    }
  }

  // frozen decade ratios def(1e-4)/def(1e-3) from a 50-digit oracle
  auto decade = [](double h, std::size_t m) {
    auto def = [&](double p) {
      return 1.0 - repetition_rate(p, h, m) / (static_cast<double>(m) * bsc_nui_rate(p, h));
    };
    return def(1e-4) / def(1e-3);
  };
  CHECK(decade(0.1, 2) == doctest::Approx(0.102756).epsilon(1e-4));
  CHECK(decade(0.2, 4) == doctest::Approx(0.107352).epsilon(1e-4));
  CHECK(decade(0.3, 8) == doctest::Approx(0.114167).epsilon(1e-4));
  CHECK(decade(0.4, 4) == doctest::Approx(0.100195).epsilon(1e-4));
  CHECK(decade(0.1, 8) == doctest::Approx(0.688239).epsilon(1e-4));
}

TEST_CASE("rate_loss") {
  CHECK(rate_loss(0.3, 0.2, 1) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(rate_loss(0.5, 0.1, 2) > 1e-3);

  // quadratic scaling: loss/(m p^2) stays within a factor 2 across decades
  // once p is inside the asymptotic regime for the given (h, m); the noisier
  // channel/smaller m cases reach it by p=1e-2, (h=0.1, m=4) needs p<=1e-4
  struct Regime { double h; std::size_t m; double p0; };
  for (const Regime& r : {Regime{0.1, 2, 1e-2}, Regime{0.2, 2, 1e-2}, Regime{0.3, 2, 1e-2},
                          Regime{0.3, 4, 1e-2}, Regime{0.4, 4, 1e-2}, Regime{0.1, 4, 1e-4}}) {
    std::vector<double> scaled;
    for (double p : {r.p0, r.p0 / 10.0, r.p0 / 100.0}) {
      scaled.push_back(rate_loss(p, r.h, r.m) / (static_cast<double>(r.m) * p * p));
    }
    const double lo = std::min({scaled[0], scaled[1], scaled[2]});
    const double hi = std::max({scaled[0], scaled[1], scaled[2]});
    CHECK(hi <= 2.0 * lo);
  }
}

TEST_CASE("stack_probability") {
  CHECK(stack_probability(0.37, 1) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(stack_probability(0.1, 2) == doctest::Approx(0.18).epsilon(1e-14));
  for (std::size_t n : {1u, 5u, 20u}) {
    CHECK(stack_probability(0.5, n) == doctest::Approx(0.5).epsilon(1e-15));
  }
  double prev = 0.0;
  for (std::size_t n = 1; n <= 12; ++n) {
    const double s = stack_probability(0.2, n);
    CHECK(s > prev);
    CHECK(s < 0.5);
    prev = s;
  }
  CHECK_THROWS_AS(stack_probability(0.6, 2), std::domain_error);
}

TEST_CASE("per_layer_probability inverts stack_probability") {
  CHECK(per_layer_probability(0.37, 1) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(per_layer_probability(0.18, 2) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK_THROWS_AS(per_layer_probability(0.5, 3), std::domain_error);

  for (double p : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4}) {
    for (std::size_t n = 1; n <= 16; ++n) {
      const double round_trip = per_layer_probability(stack_probability(p, n), n);
      CHECK(std::abs(round_trip - p) <= roundtrip_tolerance(p, n));
    }
  }
}

TEST_CASE("loss_scaling_scan") {
  const std::vector<std::size_t> schedule = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  const auto report = loss_scaling_scan(0.3, 4, schedule);
  REQUIRE(report.rows.size() == schedule.size());

  CHECK(report.rows[0].total_delta == doctest::Approx(rate_loss(0.4, 0.3, 4)).epsilon(1e-12));
  for (const auto& row : report.rows) {
    CHECK(row.delta >= 0.0);
    CHECK(row.exact_rate <= row.m_times_single + 1e-12);
  }
  // the total loss has a finite-p hump (peak at N=4 for these parameters)
  // and then decays like 1/N; frozen tail values from a 50-digit oracle
  CHECK(report.rows[2].total_delta == doctest::Approx(0.153423).epsilon(1e-4));
  double prev = report.rows[2].total_delta;
  for (std::size_t i = 3; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].total_delta < prev);
    prev = report.rows[i].total_delta;
  }
  // doubling N settles toward halving the total loss from above
  const std::vector<double> expected_halving = {0.6288, 0.5721, 0.5389, 0.5203};
  for (std::size_t i = 0; i < expected_halving.size(); ++i) {
    const double halving = report.rows[i + 5].total_delta / report.rows[i + 4].total_delta;
    CHECK(halving == doctest::Approx(expected_halving[i]).epsilon(1e-3));
  }
  CHECK_THROWS_AS(loss_scaling_scan(0.5, 4, {1, 2}), std::domain_error);
}

TEST_CASE("taylor_bound_check") {
  CHECK(taylor_bound_check(2.0, 0.0, {-0.5, 0.0, 0.5}));
  CHECK(taylor_bound_check(1.0, 1.0, {-1e-2, -1e-3, 0.0, 1e-3, 1e-2}));
  CHECK(taylor_bound_check(0.5, -0.2, {1e-4, 1e-3}));
  // far from the expansion point the quadratic truncation undershoots
  CHECK_FALSE(taylor_bound_check(1.0, 1.0, {-0.9}));
  CHECK_THROWS_AS(taylor_bound_check(1.0, 1.0, {-1.5}), std::domain_error);
  CHECK_THROWS_AS(taylor_bound_check(-1.0, 1.0, {0.0}), std::domain_error);
}
