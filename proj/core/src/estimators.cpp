#include "varcs/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace varcs {

namespace {
void require_positive_index(std::size_t t, const char* what) {
  if (t == 0) throw std::invalid_argument(std::string(what) + ": t must be >= 1");
}
}  // namespace

double EstimatorState::mu_bar(std::size_t t) const {
  require_positive_index(t, "mu_bar");
  return (c_.c4 + sums_.sum_x) / static_cast<double>(t);
}

double EstimatorState::sigma_hat_sq(std::size_t t) const {
  require_positive_index(t, "sigma_hat_sq");
  return (c_.c3 + sums_.sum_sq_dev) / static_cast<double>(t);
}

double EstimatorState::m4_hat_sq(std::size_t t) const {
  require_positive_index(t, "m4_hat_sq");
  return (c_.c2 + sums_.sum_m4_dev) / static_cast<double>(t);
}

void EstimatorState::absorb(double x, double mu_hat) {
  const std::size_t t = sums_.count + 1;
  const double mb = mu_bar(t);
  const double s2 = sigma_hat_sq(t);
  const double dev_bar = x - mb;
  const double dev_hat_sq = (x - mu_hat) * (x - mu_hat);
  const double m4_term = dev_hat_sq - s2;
  sums_.sum_sq_dev += dev_bar * dev_bar;
  sums_.sum_m4_dev += m4_term * m4_term;
  sums_.sum_x += x;
  sums_.count = t;
}

double lambda_cs_upper(double m4sq, std::size_t t, double alpha, double c1) {
  require_positive_index(t, "lambda_cs_upper");
  if (!(m4sq > 0.0)) throw std::invalid_argument("lambda_cs_upper: m4sq must be positive");
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("lambda_cs_upper: alpha must lie in (0,1)");
  const double td = static_cast<double>(t);
  const double raw = std::sqrt(2.0 * std::log(1.0 / alpha) / (m4sq * td * std::log1p(td)));
  return std::min(raw, c1);
}

double lambda_ci_upper(double m4sq, std::size_t horizon, double alpha, double c1) {
  if (horizon == 0) throw std::invalid_argument("lambda_ci_upper: horizon must be >= 1");
  if (!(m4sq > 0.0)) throw std::invalid_argument("lambda_ci_upper: m4sq must be positive");
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("lambda_ci_upper: alpha must lie in (0,1)");
  const double raw = std::sqrt(2.0 * std::log(1.0 / alpha) / (m4sq * static_cast<double>(horizon)));
  return std::min(raw, c1);
}

double lambda_tilde(double sigma_hat_sq, std::size_t t, double alpha, double c5) {
  require_positive_index(t, "lambda_tilde");
  if (!(sigma_hat_sq > 0.0)) throw std::invalid_argument("lambda_tilde: sigma_hat_sq must be positive");
  if (!(alpha > 0.0) || alpha >= 1.0) throw std::invalid_argument("lambda_tilde: alpha must lie in (0,1)");
  const double td = static_cast<double>(t);
  const double raw = std::sqrt(2.0 * std::log(2.0 / alpha) / (sigma_hat_sq * td * std::log1p(td)));
  return std::min(raw, c5);
}

double lambda_lower_gate(double candidate, std::size_t t, const BennettSums& past,
                         double sigma_hat_sq, double alpha1) {
  if (t < 2 || !(past.sum_lambda > 0.0)) return 0.0;
  const double threshold =
      (std::log(2.0 / alpha1) + sigma_hat_sq * past.sum_psi_p) / past.sum_lambda;
  return threshold <= 1.0 ? candidate : 0.0;
}

}  // namespace varcs
