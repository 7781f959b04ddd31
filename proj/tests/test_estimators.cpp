#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "varcs/estimators.hpp"
#include "varcs/rng.hpp"

using namespace varcs;

namespace {

// From-scratch recomputation of the running estimators over the full
// history, the O(t^2) oracle for the O(1) accumulators. Uses the running
// mean as the tracker mean estimate.
struct BruteForce {
  Constants c;
  std::vector<double> xs;

  double mu_bar(std::size_t t) const {
    double s = c.c4;
    for (std::size_t i = 0; i + 1 < t; ++i) s += xs[i];
    return s / static_cast<double>(t);
  }
  double sigma_hat_sq(std::size_t t) const {
    double s = c.c3;
    for (std::size_t i = 0; i + 1 < t; ++i) {
      const double d = xs[i] - mu_bar(i + 1);
      s += d * d;
    }
    return s / static_cast<double>(t);
  }
  double m4_hat_sq(std::size_t t) const {
    double s = c.c2;
    for (std::size_t i = 0; i + 1 < t; ++i) {
      const double d = xs[i] - mu_bar(i + 1);
      const double v = d * d - sigma_hat_sq(i + 1);
      s += v * v;
    }
    return s / static_cast<double>(t);
  }
};

}  // namespace

TEST_CASE("estimator spec examples") {
  EstimatorState st{Constants{}};
  CHECK(st.mu_bar(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.sigma_hat_sq(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(st.m4_hat_sq(1) == doctest::Approx(0.0625).epsilon(1e-15));

  st.absorb(1.0, st.mu_bar(1));
  CHECK(st.mu_bar(2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(st.sigma_hat_sq(2) == doctest::Approx(0.25).epsilon(1e-15));  // (0.25 + 0.25)/2
  CHECK(st.m4_hat_sq(2) == doctest::Approx(0.03125).epsilon(1e-15));  // (0.0625 + 0)/2

  EstimatorState zeros{Constants{}};
  zeros.absorb(0.0, zeros.mu_bar(1));
  zeros.absorb(0.0, zeros.mu_bar(2));
  CHECK(zeros.mu_bar(3) == doctest::Approx(0.5 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(st.mu_bar(0), std::invalid_argument);
  CHECK_THROWS_AS(st.sigma_hat_sq(0), std::invalid_argument);
  CHECK_THROWS_AS(st.m4_hat_sq(0), std::invalid_argument);
}

TEST_CASE("m4 with caller-specified mean estimate") {
  // (X1=1, mu_hat=0, sigma_hat^2 at t=1 forced to 0 via c3=0): (1/16 + 1)/2
  Constants c;
  c.c3 = 0.0;
  c.allow_zero_priors = true;
  EstimatorState st{c};
  st.absorb(1.0, 0.0);
  CHECK(st.m4_hat_sq(2) == doctest::Approx(0.53125).epsilon(1e-15));
}

TEST_CASE("streaming accumulators match the quadratic-time oracle") {
  Xoshiro256pp rng(7);
  BruteForce oracle{Constants{}, {}};
  EstimatorState st{Constants{}};
  for (std::size_t t = 1; t <= 200; ++t) {
    CHECK(st.mu_bar(t) == doctest::Approx(oracle.mu_bar(t)).epsilon(1e-12));
    CHECK(st.sigma_hat_sq(t) == doctest::Approx(oracle.sigma_hat_sq(t)).epsilon(1e-12));
    CHECK(st.m4_hat_sq(t) == doctest::Approx(oracle.m4_hat_sq(t)).epsilon(1e-12));
    const double x = rng.uniform01();
    st.absorb(x, st.mu_bar(t));
    oracle.xs.push_back(x);
  }
}

TEST_CASE("predictability: estimators at t ignore X_t") {
  std::vector<double> xs;
  Xoshiro256pp rng(99);
  for (int i = 0; i < 50; ++i) xs.push_back(rng.uniform01());
  const std::size_t k = 30;  // change observation index 31 (1-based)

  const auto run = [&](double replacement) {
    EstimatorState st{Constants{}};
    std::vector<std::array<double, 3>> values;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t t = i + 1;
      values.push_back({st.mu_bar(t), st.sigma_hat_sq(t), st.m4_hat_sq(t)});
      const double x = i == k ? replacement : xs[i];
      st.absorb(x, st.mu_bar(t));
    }
    return values;
  };

  const auto base = run(xs[k]);
  const auto changed = run(1.0 - xs[k]);
  for (std::size_t t = 1; t <= k + 1; ++t) {
    CHECK(base[t - 1] == changed[t - 1]);  // indices <= k+1 computed pre-change
  }
  CHECK(base[k + 1] != changed[k + 1]);
}

TEST_CASE("constant stream closed form for sigma_hat_sq") {
  for (double mu : {0.3, 0.5, 0.9}) {
    Constants c;
    EstimatorState st{c};
    double inv_sq_sum = 0.0;
    for (std::size_t t = 1; t <= 500; ++t) {
      const double expected = c.c3 / static_cast<double>(t) +
                              (c.c4 - mu) * (c.c4 - mu) * inv_sq_sum / static_cast<double>(t);
      CHECK(st.sigma_hat_sq(t) == doctest::Approx(expected).epsilon(1e-12));
      st.absorb(mu, st.mu_bar(t));
      inv_sq_sum += 1.0 / (static_cast<double>(t) * static_cast<double>(t));
    }
  }
}

TEST_CASE("lambda_cs_upper") {
  CHECK(lambda_cs_upper(0.0625, 1, 0.05, 0.5) == 0.5);  // unclamped ~11.76
  CHECK(lambda_cs_upper(1.0, 1000000, 0.05, 0.5) ==
        doctest::Approx(6.5854129242651236e-4).epsilon(1e-14));
  CHECK(lambda_cs_upper(1e9, 10, 0.05, 0.5) < 1e-4);  // -> 0 as m4sq grows
  CHECK_THROWS_AS(lambda_cs_upper(0.0, 1, 0.05, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lambda_cs_upper(1.0, 0, 0.05, 0.5), std::invalid_argument);
}

TEST_CASE("lambda_ci_upper") {
  CHECK(lambda_ci_upper(1.0, 10000, 0.05, 0.5) ==
        doctest::Approx(0.024477468306808165).epsilon(1e-14));
  CHECK(lambda_ci_upper(0.0625, 100, 0.05, 0.5) == 0.5);  // unclamped ~0.979
  CHECK(lambda_ci_upper(1e12, 100, 0.05, 0.5) < 1e-5);
  CHECK_THROWS_AS(lambda_ci_upper(1.0, 0, 0.05, 0.5), std::invalid_argument);
}

TEST_CASE("lambda_tilde") {
  CHECK(lambda_tilde(0.25, 1, 0.05, 2.0) == 2.0);  // unclamped ~6.52
  CHECK(lambda_tilde(0.0833, 10000, 0.05, 2.0) ==
        doctest::Approx(0.031009840422450884).epsilon(1e-14));
  CHECK(lambda_tilde(1e12, 100, 0.05, 2.0) < 1e-5);
  CHECK_THROWS_AS(lambda_tilde(0.0, 1, 0.05, 2.0), std::invalid_argument);
}

TEST_CASE("lambda schedules are nonincreasing in the scale estimate") {
  Xoshiro256pp rng(12345);
  for (int i = 0; i < 2000; ++i) {
    const double m4 = 1e-3 + rng.uniform01();
    const double bump = 1e-3 + rng.uniform01();
    const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform01() * 1e6);
    CHECK(lambda_cs_upper(m4 + bump, t, 0.05, 0.5) <= lambda_cs_upper(m4, t, 0.05, 0.5));
    CHECK(lambda_ci_upper(m4 + bump, t, 0.05, 0.5) <= lambda_ci_upper(m4, t, 0.05, 0.5));
    CHECK(lambda_tilde(m4 + bump, t, 0.05, 2.0) <= lambda_tilde(m4, t, 0.05, 2.0));
    CHECK(lambda_cs_upper(m4, t, 0.05, 0.5) <= 0.5);
    CHECK(lambda_tilde(m4, t, 0.05, 2.0) <= 2.0);
  }
}

TEST_CASE("lambda_lower_gate") {
  CHECK(lambda_lower_gate(0.3, 1, BennettSums{10.0, 0.0, 0.0}, 0.1, 0.025) == 0.0);
  CHECK(lambda_lower_gate(0.3, 2, BennettSums{10.0, 0.0, 0.0}, 0.1, 0.025) == 0.3);
  CHECK(lambda_lower_gate(0.3, 2, BennettSums{1.0, 0.0, 0.0}, 0.1, 0.025) == 0.0);
  CHECK(lambda_lower_gate(0.3, 5, BennettSums{}, 0.1, 0.025) == 0.0);  // empty sums
}
