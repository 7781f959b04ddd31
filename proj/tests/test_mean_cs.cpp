#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "varcs/estimators.hpp"
#include "varcs/mean_cs.hpp"
#include "varcs/psi.hpp"
#include "varcs/rng.hpp"
#include "varcs/streams.hpp"

using namespace varcs;

TEST_CASE("bennett_mean_interval") {
  CHECK(bennett_mean_interval(BennettSums{}, 0.1, 0.05) == Interval{0.0, 1.0});

  // sigma^2 = 0: center +- log(2/delta)/sum_lambda before clamping
  const Interval zero_var = bennett_mean_interval(BennettSums{10.0, 5.0, 3.0}, 0.0, 0.05);
  CHECK(zero_var.lower == doctest::Approx(0.5 - std::log(40.0) / 10.0).epsilon(1e-14));
  CHECK(zero_var.upper == doctest::Approx(0.5 + std::log(40.0) / 10.0).epsilon(1e-14));

  const Interval iv = bennett_mean_interval(BennettSums{10.0, 5.0, 5.0}, 0.25, 0.05);
  CHECK(iv.lower == doctest::Approx(0.5 - 0.49388794541139363).epsilon(1e-13));
  CHECK(iv.upper == doctest::Approx(0.5 + 0.49388794541139363).epsilon(1e-13));

  // radius -> 0 regime: big weighted sums with negligible penalty
  const Interval tight = bennett_mean_interval(BennettSums{1e7, 5e6, 1.0}, 0.25, 0.05);
  CHECK(tight.width() < 1e-5);
}

TEST_CASE("bennett_radius_coeffs spot values and identity") {
  const auto k = bennett_radius_coeffs(BennettSums{10.0, 0.0, 5.0}, 3, 0.05);
  CHECK(k.a == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(k.b == doctest::Approx(0.36888794541139363).epsilon(1e-14));
  CHECK(k.c == doctest::Approx(0.13607831626983933).epsilon(1e-14));

  const auto only_c = bennett_radius_coeffs(BennettSums{10.0, 0.0, 0.0}, 2, 0.05);
  CHECK(only_c.a == 0.0);
  CHECK(only_c.b == 0.0);
  CHECK(only_c.c == doctest::Approx(0.13607831626983933).epsilon(1e-14));

  CHECK_THROWS_AS(bennett_radius_coeffs(BennettSums{10.0, 0.0, 5.0}, 1, 0.05),
                  std::invalid_argument);

  // exact-square identity: a s^4 + b s^2 + c == ((log(2/d) + s^2 sum_psi)/sum_lambda)^2
  Xoshiro256pp rng(31);
  for (int i = 0; i < 5000; ++i) {
    BennettSums sums{0.1 + 20.0 * rng.uniform01(), 0.0, 10.0 * rng.uniform01()};
    const double delta = 0.001 + 0.5 * rng.uniform01();
    const double s2 = rng.uniform01();
    const auto c = bennett_radius_coeffs(sums, 2, delta);
    const double direct = (std::log(2.0 / delta) + s2 * sums.sum_psi_p) / sums.sum_lambda;
    const double poly = c.a * s2 * s2 + c.b * s2 + c.c;
    CHECK(poly == doctest::Approx(direct * direct).epsilon(1e-12));
  }
}

TEST_CASE("eb interval formula on the fixed two-point example") {
  // lambda = 0.5 for both points, mu_hat = 0.5, X = (1, 0), delta = 0.1:
  // center 0.5, radius (log 20 + 2 psi_E(0.5) * 0.25) / 1.
  const double sum_lambda = 1.0;
  const double center = (0.5 * 1.0 + 0.5 * 0.0) / sum_lambda;
  const double penalty = psi_e(0.5) * 0.25 + psi_e(0.5) * 0.25;
  const double radius = (std::log(2.0 / 0.1) + penalty) / sum_lambda;
  CHECK(center == 0.5);
  CHECK(radius == doctest::Approx(3.0923058638339636).epsilon(1e-14));
}

TEST_CASE("eb mean tracker starts vacuous and matches a history oracle") {
  EbMeanTracker tracker(0.05);
  CHECK(tracker.interval() == Interval{0.0, 1.0});

  // Replay the same stream against a from-scratch reimplementation of the
  // tracker's schedule and sums.
  Constants c;
  std::vector<double> xs;
  Xoshiro256pp rng(1234);
  for (int i = 0; i < 400; ++i) xs.push_back(rng.uniform01());

  double sum_l = 0.0, sum_lx = 0.0, pen = 0.0, sum_x = 0.0, sum_sq = 0.0;
  std::vector<double> mu_bars;
  Interval iv{0.0, 1.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t t = i + 1;
    const double mu_bar = (c.c4 + sum_x) / static_cast<double>(t);
    const double s2 = (c.c3 + sum_sq) / static_cast<double>(t);
    const double lam = std::min(
        std::sqrt(2.0 * std::log(1.0 / 0.05) / (s2 * t * std::log1p(static_cast<double>(t)))),
        c.c1);
    sum_l += lam;
    sum_lx += lam * xs[i];
    pen += psi_e(lam) * (xs[i] - mu_bar) * (xs[i] - mu_bar);
    sum_sq += (xs[i] - mu_bar) * (xs[i] - mu_bar);
    sum_x += xs[i];
    iv = tracker.update(xs[i]);
  }
  const double center = sum_lx / sum_l;
  const double radius = (std::log(2.0 / 0.05) + pen) / sum_l;
  CHECK(iv.lower == doctest::Approx(std::max(center - radius, 0.0)).epsilon(1e-12));
  CHECK(iv.upper == doctest::Approx(std::min(center + radius, 1.0)).epsilon(1e-12));
  CHECK(tracker.center() >= 0.0);
  CHECK(tracker.center() <= 1.0);
}

TEST_CASE("eb mean radius shrinks from t=100 to t=10000") {
  StreamSpec spec;
  spec.seed = 42;
  spec.length = 10000;
  StreamGenerator gen(spec);
  EbMeanTracker tracker(0.05);
  double radius_100 = 0.0;
  for (std::size_t t = 1; t <= spec.length; ++t) {
    tracker.update(gen.next());
    if (t == 100) radius_100 = tracker.radius();
  }
  CHECK(tracker.radius() < radius_100);
  CHECK(tracker.radius() < 0.05);
}

TEST_CASE("eb mean coverage (anywhere) stays within the binomial band") {
  const double alpha = 0.05;
  const std::size_t reps = 1000, horizon = 2000;
  std::size_t misses = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    StreamSpec spec;
    spec.seed = derive_seed(555, rep);
    spec.length = horizon;
    StreamGenerator gen(spec);
    EbMeanTracker tracker(alpha);
    bool escaped = false;
    for (std::size_t t = 0; t < horizon; ++t) {
      const Interval iv = tracker.update(gen.next());
      if (!iv.contains(0.5)) {
        escaped = true;
        break;
      }
    }
    misses += escaped ? 1 : 0;
  }
  const double rate = static_cast<double>(misses) / static_cast<double>(reps);
  CHECK(rate <= alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(reps)));
}

TEST_CASE("eb mean supermartingale premise: E[S_50] <= 1.05 over 1e5 runs") {
  // S_t = exp(sum lambda_i (X_i - mu) - psi_E(lambda_i)(X_i - mu_hat_i)^2)
  // with the tracker's own schedule, iid Uniform(0,1), mu = 1/2.
  const std::size_t runs = 100000, horizon = 50;
  const Constants c;
  long double total = 0.0L;
  for (std::size_t r = 0; r < runs; ++r) {
    Xoshiro256pp rng(derive_seed(2024, r));
    EstimatorState est{c};
    double log_s = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const double mu_bar = est.mu_bar(t);
      const double s2 = est.sigma_hat_sq(t);
      const double lam = std::min(
          std::sqrt(2.0 * std::log(1.0 / 0.05) / (s2 * t * std::log1p(static_cast<double>(t)))),
          c.c1);
      const double x = rng.uniform01();
      log_s += lam * (x - 0.5) - psi_e(lam) * (x - mu_bar) * (x - mu_bar);
      est.absorb(x, mu_bar);
    }
    total += std::exp(log_s);
  }
  CHECK(static_cast<double>(total / runs) <= 1.05);
}
