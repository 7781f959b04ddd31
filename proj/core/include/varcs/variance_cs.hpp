#pragma once

#include <cstddef>

#include "varcs/config.hpp"
#include "varcs/estimators.hpp"
#include "varcs/interval.hpp"
#include "varcs/mean_cs.hpp"

namespace varcs {

// Lower root of A L^2 + B L - (D - C - R) = 0, the self-consistent lower
// bound for sigma^2. Evaluated as 2(D-C-R)/(B + sqrt(B^2 + 4A(D-C-R))) so the
// A -> 0 limit is exact; A <= 1e-14 takes the linear branch (D-C-R)/B.
// A negative discriminant or negative numerator clamps to 0 (widening a
// lower confidence bound keeps it valid).
double solve_lower_quadratic(double a, double b, double d_minus_c_minus_r);

inline constexpr double lower_quadratic_eps = 1e-14;

// Persistable running sums.
struct UpperState {
  EstimatorSums est{};
  double sum_lambda = 0.0;
  double sum_weighted_dev = 0.0;  // sum lambda_i (X_i - mu_hat_i)^2
  double sum_penalty = 0.0;       // sum psi_E(lambda_i) ((X_i-mu_hat_i)^2 - sigma_hat_i^2)^2
};

struct LowerState {
  EstimatorSums est{};
  BennettSums bennett{};
  double sum_lambda = 0.0;
  double sum_weighted_dev = 0.0;
  double sum_penalty = 0.0;
  double sum_a = 0.0;  // sum lambda_i A~_i
  double sum_b = 0.0;  // sum lambda_i B~_i
  double sum_c = 0.0;  // sum lambda_i C~_i
};

struct RunningState {
  UpperState upper{};
  LowerState lower{};
  double running_lower = 0.0;
  double running_upper = 1.0;
};

// Predictable values the tracker will use for the next observation.
struct PredictedStep {
  double lambda = 0.0;
  double lambda_candidate = 0.0;
  double lambda_tilde = 0.0;
  double mu_hat = 0.0;
  double sigma_hat_sq = 0.0;
  double m4_hat_sq = 0.0;
};

// Upper confidence sequence U_t = D_t + R_{t,alpha} for sigma^2, with
// D_t the lambda-weighted mean of (X_i - mu_bar_i)^2 and R the
// empirical-Bernstein radius. CI mode swaps in the horizon-optimized
// plug-in schedule.
class UpperTracker {
 public:
  explicit UpperTracker(double alpha, const TrackerConfig& cfg = {});
  UpperTracker(double alpha, const TrackerConfig& cfg, const UpperState& state);

  double update(double x);  // returns U_t
  double upper() const;
  double d() const;
  double r() const;
  PredictedStep peek() const;
  std::size_t count() const { return est_.count(); }
  double alpha() const { return alpha_; }
  UpperState state() const;

 private:
  double predicted_lambda(std::size_t t, double m4) const;

  double alpha_;
  TrackerConfig cfg_;
  EstimatorState est_;
  double sum_lambda_ = 0.0;
  double sum_weighted_dev_ = 0.0;
  double sum_penalty_ = 0.0;
};

// Plug-in selection for the lower bound. `gated` zeroes lambda at indices
// whose estimated Bennett radius exceeds 1 (the main construction);
// `capped` keeps lambda and charges those indices a capped radius of 1
// instead (the alternative construction, kept as a baseline).
enum class LowerPluginPolicy { gated, capped };

// Lower confidence sequence L_t for sigma^2 obtained by solving the
// quadratic self-consistency equation of the Bennett-controlled mean error.
// alpha splits as alpha1 (mean-radius nuisance) + alpha2 (variance bound)
// per the configured policy.
class LowerTracker {
 public:
  explicit LowerTracker(double alpha, const TrackerConfig& cfg = {},
                        LowerPluginPolicy policy = LowerPluginPolicy::gated);
  LowerTracker(double alpha, const TrackerConfig& cfg, LowerPluginPolicy policy,
               const LowerState& state);

  double update(double x);  // returns L_t
  double lower() const;
  double d() const;
  double r() const;
  struct Coeffs {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
  };
  Coeffs coeffs() const;  // A_t, B_{t,alpha1}, C_{t,alpha1}
  PredictedStep peek() const;
  std::size_t count() const { return est_.count(); }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  LowerState state() const;

 private:
  double alpha_;
  double alpha1_;
  double alpha2_;
  TrackerConfig cfg_;
  LowerPluginPolicy policy_;
  EstimatorState est_;
  BennettSums bennett_;
  double sum_lambda_ = 0.0;
  double sum_weighted_dev_ = 0.0;
  double sum_penalty_ = 0.0;
  double sum_a_ = 0.0;
  double sum_b_ = 0.0;
  double sum_c_ = 0.0;
};

// Two-sided confidence sequence [L_t, U_t] for sigma^2 with budget alpha/2
// per side; L_t <= U_t is enforced by clamping. Streaming API: feed one
// observation, read the current interval. state()/restore round-trips the
// full running record for persistence by callers.
class VarianceTracker {
 public:
  explicit VarianceTracker(double alpha, const TrackerConfig& cfg = {});
  VarianceTracker(double alpha, const TrackerConfig& cfg, const RunningState& state);

  Interval update(double x);
  Interval interval() const;
  const UpperTracker& upper_tracker() const { return upper_; }
  const LowerTracker& lower_tracker() const { return lower_; }
  std::size_t count() const { return upper_.count(); }
  RunningState state() const;

 private:
  TrackerConfig cfg_;
  UpperTracker upper_;
  LowerTracker lower_;
  double running_lower_ = 0.0;
  double running_upper_ = 1.0;
};

}  // namespace varcs
