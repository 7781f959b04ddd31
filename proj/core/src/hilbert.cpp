#include "varcs/hilbert.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "varcs/estimators.hpp"
#include "varcs/mean_cs.hpp"
#include "varcs/psi.hpp"

namespace varcs {

namespace {

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

// ||x - a/t||^2 without materializing the scaled mean.
double dev_norm_sq(std::span<const double> x, const std::vector<double>& accum, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - accum[j] / t;
    s += d * d;
  }
  return s;
}

}  // namespace

std::pair<std::vector<double>, double> vec_bennett_center_radius(const VecBennettSums& sums,
                                                                 double sigma_sq, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("vec_bennett_center_radius: delta must be positive");
  if (sigma_sq < 0.0) throw std::invalid_argument("vec_bennett_center_radius: sigma_sq must be nonnegative");
  std::vector<double> center(sums.sum_lambda_x.size(), 0.0);
  if (!(sums.sum_lambda > 0.0)) {
    return {center, std::numeric_limits<double>::infinity()};
  }
  for (std::size_t j = 0; j < center.size(); ++j) center[j] = sums.sum_lambda_x[j] / sums.sum_lambda;
  const double radius = (std::log(2.0 / delta) + sigma_sq * sums.sum_psi_p) / sums.sum_lambda;
  return {center, radius};
}

VecVarianceTracker::VecVarianceTracker(std::size_t dim, double alpha, const TrackerConfig& cfg)
    : dim_(dim), alpha_(alpha), cfg_(cfg) {
  if (dim == 0) throw std::invalid_argument("VecVarianceTracker: dim must be >= 1");
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("VecVarianceTracker: alpha must lie in (0,1)");
  cfg_.validate();
  alpha_side_ = 0.5 * alpha;
  std::tie(alpha1_, alpha2_) = alpha_split(cfg_.split, alpha_side_);
  up_.sum_x.assign(dim, 0.0);
  lo_.sum_x.assign(dim, 0.0);
  lo_.bennett.sum_lambda_x.assign(dim, 0.0);
}

void VecVarianceTracker::update_upper(std::span<const double> x) {
  const std::size_t t = count_ + 1;
  const double td = static_cast<double>(t);
  const Constants& c = cfg_.constants;
  const double s2 = (c.c3 + up_.sum_sq_dev) / td;
  const double m4 = (c.c2 + up_.sum_m4_dev) / td;
  const double lam =
      m4 > 0.0 ? (cfg_.ci_mode() ? lambda_ci_upper(m4, *cfg_.horizon, alpha_side_, c.c1)
                                 : lambda_cs_upper(m4, t, alpha_side_, c.c1))
               : c.c1;

  const double dev_sq = dev_norm_sq(x, up_.sum_x, td);  // prior is the zero vector
  const double pen = dev_sq - s2;
  up_.sum_lambda += lam;
  up_.sum_weighted_dev += lam * dev_sq;
  up_.sum_penalty += psi_e(lam) * pen * pen;
  up_.sum_sq_dev += dev_sq;
  up_.sum_m4_dev += pen * pen;
  for (std::size_t j = 0; j < dim_; ++j) up_.sum_x[j] += x[j];
}

void VecVarianceTracker::update_lower(std::span<const double> x) {
  const std::size_t t = count_ + 1;
  const double td = static_cast<double>(t);
  const Constants& c = cfg_.constants;
  const double s2 = (c.c3 + lo_.sum_sq_dev) / td;
  const double m4 = (c.c2 + lo_.sum_m4_dev) / td;

  BennettSums past{lo_.bennett.sum_lambda, 0.0, lo_.bennett.sum_psi_p};
  const double cand =
      m4 > 0.0 ? (cfg_.ci_mode() ? lambda_ci_upper(m4, *cfg_.horizon, alpha2_, c.c1)
                                 : lambda_cs_upper(m4, t, alpha2_, c.c1))
               : c.c1;
  const double lam = lambda_lower_gate(cand, t, past, s2, alpha1_);
  BennettRadiusCoeffs k{0.0, 0.0, 0.25};
  if (t >= 2) {
    if (lambda_lower_gate(1.0, t, past, s2, alpha1_) > 0.0) {
      k = bennett_radius_coeffs(past, t, alpha1_);
    } else {
      k = {0.0, 0.0, 1.0};
    }
  }

  // mu_hat is the Bennett-weighted mean, the zero vector before data arrive.
  double dev_sq = 0.0;
  if (t >= 2 && lo_.bennett.sum_lambda > 0.0) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const double d = x[j] - lo_.bennett.sum_lambda_x[j] / lo_.bennett.sum_lambda;
      dev_sq += d * d;
    }
  } else {
    dev_sq = norm_sq(x);
  }
  const double pen = dev_sq - s2;
  lo_.sum_lambda += lam;
  lo_.sum_weighted_dev += lam * dev_sq;
  lo_.sum_penalty += psi_e(lam) * pen * pen;
  lo_.sum_a += lam * k.a;
  lo_.sum_b += lam * k.b;
  lo_.sum_c += lam * k.c;

  const double lt = s2 > 0.0 ? lambda_tilde(s2, t, alpha_side_, c.c5) : c.c5;
  lo_.bennett.sum_lambda += lt;
  for (std::size_t j = 0; j < dim_; ++j) lo_.bennett.sum_lambda_x[j] += lt * x[j];
  lo_.bennett.sum_psi_p += psi_p(lt);

  // Variance estimator's own running mean (zero-vector prior).
  const double dev_bar_sq = dev_norm_sq(x, lo_.sum_x, td);
  lo_.sum_sq_dev += dev_bar_sq;
  lo_.sum_m4_dev += pen * pen;
  for (std::size_t j = 0; j < dim_; ++j) lo_.sum_x[j] += x[j];
}

Interval VecVarianceTracker::update(std::span<const double> x) {
  if (x.size() != dim_) throw std::invalid_argument("VecVarianceTracker: dimension mismatch");
  if (norm_sq(x) > 0.25 * (1.0 + 1e-9)) {
    throw std::invalid_argument("VecVarianceTracker: observation norm must be <= 1/2");
  }
  if (cfg_.ci_mode() && count_ + 1 > *cfg_.horizon) {
    throw std::logic_error("update: tracker is in CI mode and its horizon is exhausted");
  }
  update_upper(x);
  update_lower(x);
  ++count_;
  return interval();
}

double VecVarianceTracker::upper_d() const {
  return up_.sum_lambda > 0.0 ? up_.sum_weighted_dev / up_.sum_lambda : 0.0;
}

double VecVarianceTracker::lower_d() const {
  return lo_.sum_lambda > 0.0 ? lo_.sum_weighted_dev / lo_.sum_lambda : 0.0;
}

double VecVarianceTracker::upper() const {
  if (!(up_.sum_lambda > 0.0)) return cfg_.var_cap;
  const double r = (std::log(1.0 / alpha_side_) + up_.sum_penalty) / up_.sum_lambda;
  return std::min(upper_d() + r, cfg_.var_cap);
}

double VecVarianceTracker::lower() const {
  if (!(lo_.sum_lambda > 0.0)) return 0.0;
  const double a = lo_.sum_a / lo_.sum_lambda;
  const double b = 1.0 + lo_.sum_b / lo_.sum_lambda;
  const double cc = lo_.sum_c / lo_.sum_lambda;
  const double r = (std::log(1.0 / alpha2_) + lo_.sum_penalty) / lo_.sum_lambda;
  const double l = solve_lower_quadratic(a, b, lower_d() - cc - r);
  return std::min(l, cfg_.var_cap);
}

Interval VecVarianceTracker::interval() const {
  const double u = upper();
  return {std::min(lower(), u), u};
}

}  // namespace varcs
