#include "varcs/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "varcs/psi.hpp"

namespace varcs {

namespace {
// Prior mass of the decoupled tracker's second-moment estimate, mirroring
// the sigma_hat^2 construction.
constexpr double k_second_moment_prior = 0.25;

double mp_radius(std::size_t n, double delta) {
  return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(n - 1));
}
}  // namespace

Interval mp_std_interval(std::span<const double> samples, double delta, double std_cap) {
  if (samples.size() < 2) throw std::invalid_argument("mp_std_interval: need n >= 2");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("mp_std_interval: delta must lie in (0,1)");
  const std::size_t n = samples.size();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(std::max(ss / static_cast<double>(n - 1), 0.0));
  const double r = mp_radius(n, delta);
  return Interval{sd - r, sd + r}.clamped(0.0, std_cap);
}

MpTracker::MpTracker(double delta, double std_cap) : delta_(delta), cap_(std_cap) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("MpTracker: delta must lie in (0,1)");
}

Interval MpTracker::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("MpTracker: x must lie in [0,1]");
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
  return std_interval();
}

Interval MpTracker::std_interval() const {
  if (n_ < 2) return {0.0, cap_};
  const double sd = std::sqrt(std::max(m2_ / static_cast<double>(n_ - 1), 0.0));
  const double r = mp_radius(n_, delta_);
  return Interval{sd - r, sd + r}.clamped(0.0, cap_);
}

Interval MpTracker::var_interval() const {
  const Interval s = std_interval();
  return {s.lower * s.lower, s.upper * s.upper};
}

DecoupledTracker::DecoupledTracker(double alpha, const TrackerConfig& cfg)
    : DecoupledTracker(0.25 * alpha, 0.25 * alpha, cfg) {}

DecoupledTracker::DecoupledTracker(double alpha1, double alpha2, const TrackerConfig& cfg)
    : alpha1_(alpha1),
      alpha2_(alpha2),
      cfg_(cfg),
      mean_(std::min(2.0 * alpha2, 0.5), cfg.constants) {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || alpha1 + alpha2 >= 0.5) {
    throw std::invalid_argument("DecoupledTracker: side budgets must be positive and sum below 1/2");
  }
  cfg_.validate();
}

Interval DecoupledTracker::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("DecoupledTracker: x must lie in [0,1]");
  const std::size_t t = ++t_;
  const double td = static_cast<double>(t);
  const Constants& c = cfg_.constants;

  const double m2_hat = (k_second_moment_prior + sum_xsq_) / td;
  const double m4p = (c.c2 + sum_m4p_) / td;
  const double lam =
      m4p > 0.0 ? (cfg_.ci_mode() ? lambda_ci_upper(m4p, *cfg_.horizon, alpha1_, c.c1)
                                  : lambda_cs_upper(m4p, t, alpha1_, c.c1))
                : c.c1;
  const double xsq = x * x;
  const double pen = xsq - m2_hat;
  sum_lambda_ += lam;
  sum_lambda_xsq_ += lam * xsq;
  sum_penalty_ += psi_e(lam) * pen * pen;
  sum_m4p_ += pen * pen;
  sum_xsq_ += xsq;

  mean_.update(x);
  return interval();
}

double DecoupledTracker::upper() const {
  double u1 = 1.0;
  if (sum_lambda_ > 0.0) {
    const double center = sum_lambda_xsq_ / sum_lambda_;
    u1 = std::min(center + (std::log(1.0 / alpha1_) + sum_penalty_) / sum_lambda_, 1.0);
  }
  const double r2 = mean_.one_sided_radius_at(alpha2_);
  const double l2 = std::isfinite(r2) ? std::max(mean_.center() - r2, 0.0) : 0.0;
  const double u = u1 - std::max(l2, 0.0) * std::max(l2, 0.0);
  return std::min(std::max(u, 0.0), cfg_.var_cap);
}

double DecoupledTracker::lower() const {
  double l1 = 0.0;
  if (sum_lambda_ > 0.0) {
    const double center = sum_lambda_xsq_ / sum_lambda_;
    l1 = std::max(center - (std::log(1.0 / alpha1_) + sum_penalty_) / sum_lambda_, 0.0);
  }
  const double r2 = mean_.one_sided_radius_at(alpha2_);
  const double u2 = std::isfinite(r2) ? std::min(mean_.center() + r2, 1.0) : 1.0;
  return std::max(l1 - u2 * u2, 0.0);
}

Interval DecoupledTracker::interval() const {
  const double u = upper();
  return {std::min(lower(), u), u};
}

AltLowerTracker::AltLowerTracker(double alpha, const TrackerConfig& cfg)
    : cfg_(cfg),
      up_(0.5 * alpha, cfg),
      lo_(0.5 * alpha, cfg, LowerPluginPolicy::capped) {}

Interval AltLowerTracker::update(double x) {
  up_.update(x);
  lo_.update(x);
  return interval();
}

Interval AltLowerTracker::interval() const {
  const double u = up_.upper();
  return {std::min(lo_.lower(), u), u};
}

DoubleEbTracker::DoubleEbTracker(double alpha, std::size_t horizon, const TrackerConfig& cfg)
    : alpha1_(0.5 * alpha / static_cast<double>(horizon)),
      alpha2_(0.5 * alpha * static_cast<double>(horizon - 1) / static_cast<double>(horizon)),
      cfg_(cfg),
      up_(0.5 * alpha, cfg),
      mean_(std::min(std::max(alpha1_, 1e-12), 0.5), cfg.constants, MeanCenter::weighted_mean),
      est_(cfg.constants) {
  if (horizon < 2) throw std::invalid_argument("DoubleEbTracker: horizon must be >= 2");
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("DoubleEbTracker: alpha must lie in (0,1)");
}

Interval DoubleEbTracker::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("DoubleEbTracker: x must lie in [0,1]");
  up_.update(x);

  const std::size_t t = est_.count() + 1;
  const double mu_hat = mean_.predicted_mean();
  const double rr = std::min(mean_.radius_at(alpha1_), 1.0);
  const double s2 = est_.sigma_hat_sq(t);
  const double m4 = est_.m4_hat_sq(t);
  const double lam = m4 > 0.0 ? lambda_cs_upper(m4, t, alpha2_, cfg_.constants.c1)
                              : cfg_.constants.c1;
  const double dev_sq = (x - mu_hat) * (x - mu_hat);
  const double pen = dev_sq - s2;
  sum_lambda_ += lam;
  sum_weighted_dev_ += lam * dev_sq;
  sum_penalty_ += psi_e(lam) * pen * pen;
  sum_rsq_ += lam * rr * rr;

  mean_.update(x);
  est_.absorb(x, mu_hat);
  return interval();
}

double DoubleEbTracker::lower() const {
  if (!(sum_lambda_ > 0.0)) return 0.0;
  const double d = sum_weighted_dev_ / sum_lambda_;
  const double mean_pen = sum_rsq_ / sum_lambda_;
  const double r = (std::log(1.0 / alpha2_) + sum_penalty_) / sum_lambda_;
  return std::max(d - mean_pen - r, 0.0);
}

Interval DoubleEbTracker::interval() const {
  const double u = up_.upper();
  return {std::min(lower(), u), u};
}

}  // namespace varcs
