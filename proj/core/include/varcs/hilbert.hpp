#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "varcs/config.hpp"
#include "varcs/interval.hpp"
#include "varcs/variance_cs.hpp"

namespace varcs {

// Bennett sums for a vector-valued stream; the weighted observation sum is a
// vector, everything else stays scalar.
struct VecBennettSums {
  double sum_lambda = 0.0;
  std::vector<double> sum_lambda_x;  // sum of lambda_tilde_i * X_i
  double sum_psi_p = 0.0;
};

// Vector-valued anytime-valid Bennett ball: weighted-mean center and scalar
// radius (log(2/delta) + sigma^2 sum psi_P) / sum lambda. Empty sums yield an
// infinite radius.
std::pair<std::vector<double>, double> vec_bennett_center_radius(const VecBennettSums& sums,
                                                                 double sigma_sq, double delta);

// Two-sided confidence sequence for sigma^2 = E||X - mu||^2 of a stream with
// ||X_t|| <= 1/2 in d-dimensional Euclidean space. All scalar machinery is
// reused with squared deviations replaced by squared norms; the mean priors
// become the center of the norm ball (the zero vector), so d = 1 on shifted
// data reproduces the scalar tracker.
class VecVarianceTracker {
 public:
  VecVarianceTracker(std::size_t dim, double alpha, const TrackerConfig& cfg = {});

  Interval update(std::span<const double> x);
  Interval interval() const;

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }
  double upper() const;
  double lower() const;
  double upper_d() const;
  double lower_d() const;

 private:
  struct UpperPart {
    std::vector<double> sum_x;  // running-mean accumulator, zero-vector prior
    double sum_sq_dev = 0.0;
    double sum_m4_dev = 0.0;
    double sum_lambda = 0.0;
    double sum_weighted_dev = 0.0;
    double sum_penalty = 0.0;
  };
  struct LowerPart {
    std::vector<double> sum_x;  // for the variance estimator's running mean
    double sum_sq_dev = 0.0;
    double sum_m4_dev = 0.0;
    VecBennettSums bennett;
    double sum_lambda = 0.0;
    double sum_weighted_dev = 0.0;
    double sum_penalty = 0.0;
    double sum_a = 0.0;
    double sum_b = 0.0;
    double sum_c = 0.0;
  };

  void update_upper(std::span<const double> x);
  void update_lower(std::span<const double> x);

  std::size_t dim_;
  double alpha_;
  double alpha_side_;
  double alpha1_;
  double alpha2_;
  TrackerConfig cfg_;
  std::size_t count_ = 0;
  UpperPart up_;
  LowerPart lo_;
};

}  // namespace varcs
