#include "varcs/mean_cs.hpp"

#include <cmath>
#include <stdexcept>

#include "varcs/psi.hpp"

namespace varcs {

Interval bennett_mean_interval(const BennettSums& sums, double sigma_sq, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("bennett_mean_interval: delta must be positive");
  if (sigma_sq < 0.0) throw std::invalid_argument("bennett_mean_interval: sigma_sq must be nonnegative");
  if (!(sums.sum_lambda > 0.0)) return {0.0, 1.0};
  const double center = sums.sum_lambda_x / sums.sum_lambda;
  const double radius = (std::log(2.0 / delta) + sigma_sq * sums.sum_psi_p) / sums.sum_lambda;
  return Interval{center - radius, center + radius}.clamped(0.0, 1.0);
}

BennettRadiusCoeffs bennett_radius_coeffs(const BennettSums& past, std::size_t t, double delta) {
  if (t < 2) throw std::invalid_argument("bennett_radius_coeffs: defined for t >= 2 (use R~_1 = 1/2 at t = 1)");
  if (!(past.sum_lambda > 0.0)) {
    throw std::invalid_argument("bennett_radius_coeffs: Bennett sums over 1..t-1 must be positive");
  }
  const double log_term = std::log(2.0 / delta);
  const double inv_sq = 1.0 / (past.sum_lambda * past.sum_lambda);
  BennettRadiusCoeffs k;
  k.a = past.sum_psi_p * past.sum_psi_p * inv_sq;
  k.b = 2.0 * log_term * past.sum_psi_p * inv_sq;
  k.c = log_term * log_term * inv_sq;
  return k;
}

EbMeanTracker::EbMeanTracker(double delta, Constants constants, MeanCenter center,
                             bool running_intersection)
    : delta_(delta),
      constants_(constants),
      center_mode_(center),
      running_intersection_(running_intersection),
      est_(constants) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("EbMeanTracker: delta must lie in (0,1)");
  constants_.validate();
}

double EbMeanTracker::predicted_mean() const {
  const std::size_t t = est_.count() + 1;
  if (center_mode_ == MeanCenter::running_mean) return est_.mu_bar(t);
  if (!(sum_lambda_ > 0.0)) return 0.5;
  return sum_lambda_x_ / sum_lambda_;
}

Interval EbMeanTracker::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("EbMeanTracker: x must lie in [0,1]");
  const std::size_t t = est_.count() + 1;
  const double mu_hat = predicted_mean();
  const double s2 = est_.sigma_hat_sq(t);
  const double lam =
      s2 > 0.0 ? lambda_cs_upper(s2, t, delta_, constants_.c1) : constants_.c1;
  const double dev = x - mu_hat;
  sum_lambda_ += lam;
  sum_lambda_x_ += lam * x;
  sum_penalty_ += psi_e(lam) * dev * dev;
  est_.absorb(x, mu_hat);
  const Interval now = interval();
  if (running_intersection_) {
    running_.lower = std::max(running_.lower, now.lower);
    running_.upper = std::min(running_.upper, now.upper);
    if (running_.lower > running_.upper) running_.lower = running_.upper;
    return running_;
  }
  return now;
}

double EbMeanTracker::center() const {
  return sum_lambda_ > 0.0 ? sum_lambda_x_ / sum_lambda_ : 0.5;
}

double EbMeanTracker::radius_at(double delta) const {
  if (!(sum_lambda_ > 0.0)) return std::numeric_limits<double>::infinity();
  return (std::log(2.0 / delta) + sum_penalty_) / sum_lambda_;
}

double EbMeanTracker::one_sided_radius_at(double alpha) const {
  if (!(sum_lambda_ > 0.0)) return std::numeric_limits<double>::infinity();
  return (std::log(1.0 / alpha) + sum_penalty_) / sum_lambda_;
}

Interval EbMeanTracker::interval() const {
  if (!(sum_lambda_ > 0.0)) return {0.0, 1.0};
  const double c = center();
  const double r = radius();
  return Interval{c - r, c + r}.clamped(0.0, 1.0);
}

}  // namespace varcs
