#pragma once

#include <cstddef>
#include <span>

#include "varcs/config.hpp"
#include "varcs/estimators.hpp"
#include "varcs/interval.hpp"
#include "varcs/mean_cs.hpp"
#include "varcs/variance_cs.hpp"

namespace varcs {

// Maurer-Pontil style confidence interval for the standard deviation of iid
// [0,1] samples: unbiased sample std plus/minus sqrt(2 log(2/delta)/(n-1)),
// with the budget split evenly across the two one-sided claims.
Interval mp_std_interval(std::span<const double> samples, double delta, double std_cap = 1.0);

// Streaming form of the same interval (Welford accumulators).
class MpTracker {
 public:
  explicit MpTracker(double delta, double std_cap = 1.0);
  Interval update(double x);  // current std interval
  Interval std_interval() const;
  Interval var_interval() const;
  std::size_t count() const { return n_; }

 private:
  double delta_;
  double cap_;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Decoupled construction: an empirical-Bernstein confidence sequence for
// E X^2 combined with one for E X through sigma^2 = E X^2 - (E X)^2.
//   upper: U_1(alpha1) - max(L_2(alpha2), 0)^2
//   lower: max(L_1(alpha1) - U_2(alpha2)^2, 0)
// Each side of the two-sided tracker gets alpha/2, split evenly between its
// two one-sided claims.
class DecoupledTracker {
 public:
  explicit DecoupledTracker(double alpha, const TrackerConfig& cfg = {});
  // Per-side budgets given explicitly: each side spends alpha1 on the E X^2
  // claim and alpha2 on the E X claim.
  DecoupledTracker(double alpha1, double alpha2, const TrackerConfig& cfg);

  Interval update(double x);
  Interval interval() const;
  double upper() const;
  double lower() const;
  std::size_t count() const { return t_; }

 private:
  double alpha1_;
  double alpha2_;
  TrackerConfig cfg_;
  std::size_t t_ = 0;
  // EB tracker for E X^2 with predictable second-moment estimate
  // m2_hat_t = (1/4 + sum_{i<t} X_i^2)/t.
  double sum_xsq_ = 0.0;
  double sum_m4p_ = 0.0;  // sum (X_i^2 - m2_hat_i)^2, scale estimate for the plug-in
  double sum_lambda_ = 0.0;
  double sum_lambda_xsq_ = 0.0;
  double sum_penalty_ = 0.0;
  EbMeanTracker mean_;  // EB tracker for E X
};

// Lower bound with the alternative plug-ins: lambda is never gated; indices
// whose Bennett radius estimate exceeds 1 are charged the capped radius
// R~ = 1 instead. Paired with the standard upper tracker for a two-sided
// interval.
class AltLowerTracker {
 public:
  explicit AltLowerTracker(double alpha, const TrackerConfig& cfg = {});

  Interval update(double x);
  Interval interval() const;
  double upper() const { return up_.upper(); }
  double lower() const { return lo_.lower(); }
  const LowerTracker& lower_tracker() const { return lo_; }
  std::size_t count() const { return up_.count(); }

 private:
  TrackerConfig cfg_;
  UpperTracker up_;
  LowerTracker lo_;
};

// Lower bound whose mean-error radius R~ comes from a second
// empirical-Bernstein confidence sequence (capped at 1) instead of the
// Bennett inequality, so no quadratic solve is needed. Budgets for a
// horizon n: alpha1 = alpha/(2n) on the mean radius, alpha2 = alpha(n-1)/(2n)
// on the variance bound. Paired with the standard upper tracker.
class DoubleEbTracker {
 public:
  DoubleEbTracker(double alpha, std::size_t horizon, const TrackerConfig& cfg = {});

  Interval update(double x);
  Interval interval() const;
  double upper() const { return up_.upper(); }
  double lower() const;
  std::size_t count() const { return est_.count(); }

 private:
  double alpha1_;
  double alpha2_;
  TrackerConfig cfg_;
  UpperTracker up_;
  EbMeanTracker mean_;  // weighted-center EB tracker supplying R~
  EstimatorState est_;
  double sum_lambda_ = 0.0;
  double sum_weighted_dev_ = 0.0;
  double sum_penalty_ = 0.0;
  double sum_rsq_ = 0.0;  // sum lambda_i R~_i^2
};

}  // namespace varcs
