#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

namespace varcs {

// Prior-mass constants of the predictable estimators and the plug-in caps.
// Defaults follow c1=1/2, c2=1/16, c3=1/4, c4=1/2, c5=2. The priors c2 and c3
// must stay strictly positive unless allow_zero_priors is set; zero priors
// starve the plug-in schedules at small t.
struct Constants {
  double c1 = 0.5;
  double c2 = 0.0625;
  double c3 = 0.25;
  double c4 = 0.5;
  double c5 = 2.0;
  bool allow_zero_priors = false;

  void validate() const {
    if (!(c1 > 0.0) || c1 >= 1.0) throw std::invalid_argument("Constants: c1 must lie in (0,1)");
    if (c2 < 0.0 || c2 > 1.0) throw std::invalid_argument("Constants: c2 must lie in [0,1]");
    if (c3 < 0.0 || c3 > 1.0) throw std::invalid_argument("Constants: c3 must lie in [0,1]");
    if (c4 < 0.0 || c4 > 1.0) throw std::invalid_argument("Constants: c4 must lie in [0,1]");
    if (!(c5 > 0.0)) throw std::invalid_argument("Constants: c5 must be positive");
    if (!allow_zero_priors && (c2 == 0.0 || c3 == 0.0)) {
      throw std::invalid_argument("Constants: c2 and c3 must be positive (set allow_zero_priors to override)");
    }
  }
};

// How a lower-bound error budget alpha is divided between the nuisance
// mean-radius bound (alpha1) and the main variance bound (alpha2).
enum class SplitPolicy { halves, log_horizon, custom };

struct AlphaSplit {
  SplitPolicy policy = SplitPolicy::halves;
  std::size_t horizon = 0;  // log_horizon only
  double custom_a1 = 0.0;
  double custom_a2 = 0.0;

  static AlphaSplit halves() { return {}; }
  static AlphaSplit log_horizon(std::size_t n) {
    AlphaSplit s;
    s.policy = SplitPolicy::log_horizon;
    s.horizon = n;
    return s;
  }
  static AlphaSplit custom(double a1, double a2) {
    AlphaSplit s;
    s.policy = SplitPolicy::custom;
    s.custom_a1 = a1;
    s.custom_a2 = a2;
    return s;
  }
};

// (alpha1, alpha2) with alpha1 + alpha2 = alpha, both positive.
// log_horizon uses alpha1 = alpha/log(n); it needs log(n) > 1, so n <= e
// falls back to halves.
std::pair<double, double> alpha_split(const AlphaSplit& split, double alpha);

// One tracker configuration. A set horizon freezes the tracker in
// fixed-sample (CI) mode at construction; without it the tracker runs as an
// anytime-valid confidence sequence.
struct TrackerConfig {
  AlphaSplit split{};
  Constants constants{};
  std::optional<std::size_t> horizon{};
  double var_cap = 1.0;  // 1/4 is also always valid for [0,1] data
  bool running_intersection = false;

  bool ci_mode() const { return horizon.has_value(); }

  void validate() const {
    constants.validate();
    if (horizon && *horizon == 0) throw std::invalid_argument("TrackerConfig: horizon must be positive");
    if (!(var_cap > 0.0)) throw std::invalid_argument("TrackerConfig: var_cap must be positive");
  }
};

}  // namespace varcs
