#include "varcs/variance_cs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "varcs/psi.hpp"

namespace varcs {

std::pair<double, double> alpha_split(const AlphaSplit& split, double alpha) {
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("alpha_split: alpha must lie in (0,1)");
  switch (split.policy) {
    case SplitPolicy::halves:
      return {0.5 * alpha, 0.5 * alpha};
    case SplitPolicy::log_horizon: {
      if (split.horizon == 0) throw std::invalid_argument("alpha_split: log_horizon needs a horizon");
      const double logn = std::log(static_cast<double>(split.horizon));
      if (logn <= 1.0) return {0.5 * alpha, 0.5 * alpha};
      return {alpha / logn, alpha * (logn - 1.0) / logn};
    }
    case SplitPolicy::custom: {
      if (!(split.custom_a1 > 0.0) || !(split.custom_a2 > 0.0)) {
        throw std::invalid_argument("alpha_split: custom parts must be positive");
      }
      if (std::abs(split.custom_a1 + split.custom_a2 - alpha) > 1e-12 * std::max(alpha, 1.0)) {
        throw std::invalid_argument("alpha_split: custom parts must sum to alpha");
      }
      return {split.custom_a1, split.custom_a2};
    }
  }
  throw std::logic_error("alpha_split: unknown policy");
}

double solve_lower_quadratic(double a, double b, double d_minus_c_minus_r) {
  if (a < 0.0) throw std::invalid_argument("solve_lower_quadratic: a must be nonnegative");
  if (!(b > 0.0)) throw std::invalid_argument("solve_lower_quadratic: b must be positive");
  if (a <= lower_quadratic_eps) {
    return std::max(d_minus_c_minus_r / b, 0.0);
  }
  const double disc = b * b + 4.0 * a * d_minus_c_minus_r;
  if (disc < 0.0) return 0.0;
  const double root = 2.0 * d_minus_c_minus_r / (b + std::sqrt(disc));
  return std::max(root, 0.0);
}

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0) || alpha >= 1.0) {
    throw std::invalid_argument(std::string(who) + ": alpha must lie in (0,1)");
  }
}

void check_observation(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("update: x must lie in [0,1]");
}

void check_horizon_budget(const TrackerConfig& cfg, std::size_t t) {
  if (cfg.ci_mode() && t > *cfg.horizon) {
    throw std::logic_error("update: tracker is in CI mode and its horizon is exhausted");
  }
}

}  // namespace

UpperTracker::UpperTracker(double alpha, const TrackerConfig& cfg)
    : alpha_(alpha), cfg_(cfg), est_(cfg.constants) {
  check_alpha(alpha, "UpperTracker");
  cfg_.validate();
}

UpperTracker::UpperTracker(double alpha, const TrackerConfig& cfg, const UpperState& s)
    : UpperTracker(alpha, cfg) {
  est_ = EstimatorState(cfg_.constants, s.est);
  sum_lambda_ = s.sum_lambda;
  sum_weighted_dev_ = s.sum_weighted_dev;
  sum_penalty_ = s.sum_penalty;
}

double UpperTracker::predicted_lambda(std::size_t t, double m4) const {
  if (!(m4 > 0.0)) return cfg_.constants.c1;  // zero-prior limit of the schedule
  return cfg_.ci_mode() ? lambda_ci_upper(m4, *cfg_.horizon, alpha_, cfg_.constants.c1)
                        : lambda_cs_upper(m4, t, alpha_, cfg_.constants.c1);
}

PredictedStep UpperTracker::peek() const {
  const std::size_t t = est_.count() + 1;
  PredictedStep p;
  p.mu_hat = est_.mu_bar(t);
  p.sigma_hat_sq = est_.sigma_hat_sq(t);
  p.m4_hat_sq = est_.m4_hat_sq(t);
  p.lambda_candidate = p.lambda = predicted_lambda(t, p.m4_hat_sq);
  return p;
}

double UpperTracker::update(double x) {
  check_observation(x);
  const std::size_t t = est_.count() + 1;
  check_horizon_budget(cfg_, t);
  const PredictedStep p = peek();
  const double dev_sq = (x - p.mu_hat) * (x - p.mu_hat);
  const double pen = dev_sq - p.sigma_hat_sq;
  sum_lambda_ += p.lambda;
  sum_weighted_dev_ += p.lambda * dev_sq;
  sum_penalty_ += psi_e(p.lambda) * pen * pen;
  est_.absorb(x, p.mu_hat);
  return upper();
}

double UpperTracker::d() const {
  return sum_lambda_ > 0.0 ? sum_weighted_dev_ / sum_lambda_ : 0.0;
}

double UpperTracker::r() const {
  if (!(sum_lambda_ > 0.0)) return std::numeric_limits<double>::infinity();
  return (std::log(1.0 / alpha_) + sum_penalty_) / sum_lambda_;
}

double UpperTracker::upper() const { return std::min(d() + r(), cfg_.var_cap); }

UpperState UpperTracker::state() const {
  return {est_.sums(), sum_lambda_, sum_weighted_dev_, sum_penalty_};
}

LowerTracker::LowerTracker(double alpha, const TrackerConfig& cfg, LowerPluginPolicy policy)
    : alpha_(alpha), cfg_(cfg), policy_(policy), est_(cfg.constants) {
  check_alpha(alpha, "LowerTracker");
  cfg_.validate();
  std::tie(alpha1_, alpha2_) = alpha_split(cfg_.split, alpha_);
}

LowerTracker::LowerTracker(double alpha, const TrackerConfig& cfg, LowerPluginPolicy policy,
                           const LowerState& s)
    : LowerTracker(alpha, cfg, policy) {
  est_ = EstimatorState(cfg_.constants, s.est);
  bennett_ = s.bennett;
  sum_lambda_ = s.sum_lambda;
  sum_weighted_dev_ = s.sum_weighted_dev;
  sum_penalty_ = s.sum_penalty;
  sum_a_ = s.sum_a;
  sum_b_ = s.sum_b;
  sum_c_ = s.sum_c;
}

PredictedStep LowerTracker::peek() const {
  const std::size_t t = est_.count() + 1;
  PredictedStep p;
  p.mu_hat = (t >= 2 && bennett_.sum_lambda > 0.0) ? bennett_.sum_lambda_x / bennett_.sum_lambda : 0.5;
  p.sigma_hat_sq = est_.sigma_hat_sq(t);
  p.m4_hat_sq = est_.m4_hat_sq(t);
  const double c1 = cfg_.constants.c1;
  p.lambda_candidate =
      p.m4_hat_sq > 0.0
          ? (cfg_.ci_mode() ? lambda_ci_upper(p.m4_hat_sq, *cfg_.horizon, alpha2_, c1)
                            : lambda_cs_upper(p.m4_hat_sq, t, alpha2_, c1))
          : c1;
  p.lambda = policy_ == LowerPluginPolicy::gated
                 ? lambda_lower_gate(p.lambda_candidate, t, bennett_, p.sigma_hat_sq, alpha1_)
                 : p.lambda_candidate;
  p.lambda_tilde =
      p.sigma_hat_sq > 0.0 ? lambda_tilde(p.sigma_hat_sq, t, alpha_, cfg_.constants.c5)
                           : cfg_.constants.c5;
  return p;
}

double LowerTracker::update(double x) {
  check_observation(x);
  const std::size_t t = est_.count() + 1;
  check_horizon_budget(cfg_, t);
  const PredictedStep p = peek();

  // Squared-radius coefficients for the index about to be charged. Under the
  // gated policy a closed gate carries weight lambda = 0; under the capped
  // policy it is charged the capped radius R~ = 1.
  BennettRadiusCoeffs k{0.0, 0.0, 0.25};  // R~_1 = 1/2
  const bool gate_open =
      lambda_lower_gate(1.0, t, bennett_, p.sigma_hat_sq, alpha1_) > 0.0;
  if (t >= 2) {
    if (gate_open) {
      k = bennett_radius_coeffs(bennett_, t, alpha1_);
    } else {
      k = {0.0, 0.0, 1.0};
    }
  } else if (policy_ == LowerPluginPolicy::capped) {
    k = {0.0, 0.0, 1.0};
  }

  const double dev_sq = (x - p.mu_hat) * (x - p.mu_hat);
  const double pen = dev_sq - p.sigma_hat_sq;
  sum_lambda_ += p.lambda;
  sum_weighted_dev_ += p.lambda * dev_sq;
  sum_penalty_ += psi_e(p.lambda) * pen * pen;
  sum_a_ += p.lambda * k.a;
  sum_b_ += p.lambda * k.b;
  sum_c_ += p.lambda * k.c;

  bennett_.sum_lambda += p.lambda_tilde;
  bennett_.sum_lambda_x += p.lambda_tilde * x;
  bennett_.sum_psi_p += psi_p(p.lambda_tilde);

  est_.absorb(x, p.mu_hat);
  return lower();
}

double LowerTracker::d() const {
  return sum_lambda_ > 0.0 ? sum_weighted_dev_ / sum_lambda_ : 0.0;
}

double LowerTracker::r() const {
  if (!(sum_lambda_ > 0.0)) return std::numeric_limits<double>::infinity();
  return (std::log(1.0 / alpha2_) + sum_penalty_) / sum_lambda_;
}

LowerTracker::Coeffs LowerTracker::coeffs() const {
  if (!(sum_lambda_ > 0.0)) return {};
  return {sum_a_ / sum_lambda_, 1.0 + sum_b_ / sum_lambda_, sum_c_ / sum_lambda_};
}

double LowerTracker::lower() const {
  if (!(sum_lambda_ > 0.0)) return 0.0;
  const Coeffs k = coeffs();
  const double l = solve_lower_quadratic(k.a, k.b, d() - k.c - r());
  return std::min(l, cfg_.var_cap);
}

LowerState LowerTracker::state() const {
  return {est_.sums(), bennett_, sum_lambda_, sum_weighted_dev_,
          sum_penalty_, sum_a_,   sum_b_,     sum_c_};
}

VarianceTracker::VarianceTracker(double alpha, const TrackerConfig& cfg)
    : cfg_(cfg), upper_(0.5 * alpha, cfg), lower_(0.5 * alpha, cfg) {
  check_alpha(alpha, "VarianceTracker");
}

VarianceTracker::VarianceTracker(double alpha, const TrackerConfig& cfg, const RunningState& s)
    : cfg_(cfg),
      upper_(0.5 * alpha, cfg, s.upper),
      lower_(0.5 * alpha, cfg, LowerPluginPolicy::gated, s.lower),
      running_lower_(s.running_lower),
      running_upper_(s.running_upper) {
  check_alpha(alpha, "VarianceTracker");
}

Interval VarianceTracker::update(double x) {
  upper_.update(x);
  lower_.update(x);
  const Interval now = interval();
  running_lower_ = std::max(running_lower_, now.lower);
  running_upper_ = std::min(running_upper_, now.upper);
  if (running_lower_ > running_upper_) running_lower_ = running_upper_;
  return cfg_.running_intersection ? Interval{running_lower_, running_upper_} : now;
}

Interval VarianceTracker::interval() const {
  const double u = upper_.upper();
  const double l = std::min(lower_.lower(), u);
  if (cfg_.running_intersection && count() > 0) {
    return {std::max(l, running_lower_), std::min(u, running_upper_)};
  }
  return {l, u};
}

RunningState VarianceTracker::state() const {
  return {upper_.state(), lower_.state(), running_lower_, running_upper_};
}

}  // namespace varcs
