#pragma once

#include <cstddef>

#include "varcs/config.hpp"

namespace varcs {

// Plain accumulator record, the persistable form of EstimatorState.
struct EstimatorSums {
  std::size_t count = 0;
  double sum_x = 0.0;
  double sum_sq_dev = 0.0;   // sum of (X_i - mu_bar_i)^2
  double sum_m4_dev = 0.0;   // sum of [(X_i - mu_hat_i)^2 - sigma_hat_i^2]^2
};

// Running estimators feeding the plug-in schedules. Every estimator queried
// at index t uses observations strictly before t; absorb() evaluates all
// predictable quantities against the pre-update sums, so a single O(1)
// update per observation preserves predictability.
//
// mu_hat is the mean estimate the owning tracker uses at the current index
// (the running mean for the upper tracker, the Bennett-weighted mean for the
// lower one); it only enters the fourth-moment accumulator. The internal
// variance accumulator always uses the running mean mu_bar.
class EstimatorState {
 public:
  EstimatorState() = default;
  explicit EstimatorState(Constants c) : c_(c) {}
  EstimatorState(Constants c, const EstimatorSums& sums) : c_(c), sums_(sums) {}

  std::size_t count() const { return sums_.count; }
  const EstimatorSums& sums() const { return sums_; }
  const Constants& constants() const { return c_; }

  // (c4 + sum_{i<=t-1} X_i) / t
  double mu_bar(std::size_t t) const;
  // (c3 + sum_{i<=t-1} (X_i - mu_bar_i)^2) / t
  double sigma_hat_sq(std::size_t t) const;
  // (c2 + sum_{i<=t-1} [(X_i - mu_hat_i)^2 - sigma_hat_i^2]^2) / t
  double m4_hat_sq(std::size_t t) const;

  void absorb(double x, double mu_hat);

 private:
  Constants c_{};
  EstimatorSums sums_{};
};

// Plug-in schedules. All reject nonpositive scale estimates; the trackers
// handle the zero-prior limit themselves by jumping straight to the cap.
double lambda_cs_upper(double m4sq, std::size_t t, double alpha, double c1);
double lambda_ci_upper(double m4sq, std::size_t horizon, double alpha, double c1);
double lambda_tilde(double sigma_hat_sq, std::size_t t, double alpha, double c5);

// Running sums of the anytime-valid Bennett machinery.
struct BennettSums {
  double sum_lambda = 0.0;    // sum of lambda_tilde_i
  double sum_lambda_x = 0.0;  // sum of lambda_tilde_i * X_i
  double sum_psi_p = 0.0;     // sum of psi_P(lambda_tilde_i)
};

// Lower-bound plug-in gate: a positive lambda at an index whose Bennett
// radius exceeds 1 would add a vacuous summand, so the candidate is zeroed
// unless t >= 2 and (log(2/alpha1) + sigma_hat_sq * sum_psi_p) / sum_lambda
// <= 1. The Bennett sums run over indices 1..t-1; empty sums keep the gate
// closed.
double lambda_lower_gate(double candidate, std::size_t t, const BennettSums& past,
                         double sigma_hat_sq, double alpha1);

}  // namespace varcs
