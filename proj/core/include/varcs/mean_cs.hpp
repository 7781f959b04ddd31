#pragma once

#include <cstddef>
#include <limits>

#include "varcs/config.hpp"
#include "varcs/estimators.hpp"
#include "varcs/interval.hpp"

namespace varcs {

// Anytime-valid Bennett confidence set for the mean at known sigma^2:
// center sum(lt X)/sum(lt), radius (log(2/delta) + sigma^2 sum(psi_P))/sum(lt),
// intersected with [0,1]. Empty sums yield the vacuous [0,1].
Interval bennett_mean_interval(const BennettSums& sums, double sigma_sq, double delta);

// Coefficients of the squared Bennett radius as a polynomial in sigma^2:
// R~^2_{t,delta} = a sigma^4 + b sigma^2 + c, with sums over indices 1..t-1.
// Defined for t >= 2 with positive sums; at t = 1 callers substitute
// mu_hat_1 = 1/2 and R~_1 = 1/2 directly.
struct BennettRadiusCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

BennettRadiusCoeffs bennett_radius_coeffs(const BennettSums& past, std::size_t t, double delta);

// Which predictable center the empirical-Bernstein mean tracker subtracts in
// its penalty term (and reports between updates).
enum class MeanCenter { running_mean, weighted_mean };

// Empirical-Bernstein confidence sequence for the mean of a [0,1]-valued
// stream: center sum(l X)/sum(l), radius
// (log(2/delta) + sum psi_E(l_i) (X_i - mu_hat_i)^2) / sum(l).
// The plug-in reuses the variance-form schedule with sigma_hat^2 in place of
// the fourth-moment estimate.
class EbMeanTracker {
 public:
  explicit EbMeanTracker(double delta, Constants constants = {},
                         MeanCenter center = MeanCenter::running_mean,
                         bool running_intersection = false);

  Interval update(double x);
  Interval interval() const;

  std::size_t count() const { return est_.count(); }
  double center() const;
  // Radius of the current interval before [0,1] clamping; +inf with no data.
  double radius() const { return radius_at(delta_); }
  // Same accumulated penalty re-leveled at a different delta; used by the
  // double empirical-Bernstein construction, which reads the radius of the
  // past observations before each update.
  double radius_at(double delta) const;
  // (log(1/alpha) + penalty) / sum(lambda): radius of a single-sided claim.
  double one_sided_radius_at(double alpha) const;
  // Predictable mean estimate for the next index.
  double predicted_mean() const;

 private:
  double delta_;
  Constants constants_;
  MeanCenter center_mode_;
  bool running_intersection_;
  EstimatorState est_;
  double sum_lambda_ = 0.0;
  double sum_lambda_x_ = 0.0;
  double sum_penalty_ = 0.0;  // sum psi_E(lambda_i) (X_i - mu_hat_i)^2
  Interval running_{0.0, 1.0};
};

}  // namespace varcs
