#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "varcs/rng.hpp"

namespace varcs {

enum class StreamKind { uniform01, beta, constant, bernoulli, martingale_bounded };

// One synthetic data source. `a`/`b` are the Beta shape parameters; `a`
// doubles as the constant value or the Bernoulli success probability.
// The martingale stream is a two-point conditional distribution whose
// tilt flips with the sign of the previous deviation; its conditional mean,
// variance, and fourth moment are constant by construction, but the draws
// are not independent.
struct StreamSpec {
  StreamKind kind = StreamKind::uniform01;
  double a = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;
  std::size_t length = 0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double var_of_sq_dev = 0.0;  // V[(X - mu)^2]
};

// Closed-form moments of the stream's (conditional) distribution.
Moments true_moments(const StreamSpec& spec);

// Stateful generator; deterministic given the spec's seed.
class StreamGenerator {
 public:
  explicit StreamGenerator(const StreamSpec& spec);
  double next();

 private:
  double next_beta();

  StreamSpec spec_;
  Xoshiro256pp rng_;
  double prev_ = 0.5;  // martingale stream state
};

// The whole stream at once (spec.length draws).
std::vector<double> generate_stream(const StreamSpec& spec);

std::string stream_name(const StreamSpec& spec);

// Fixed parameters of the martingale_bounded scheme.
inline constexpr double martingale_mu = 0.5;
inline constexpr double martingale_sigma = 0.15;
inline constexpr double martingale_tilt = 0.7;

}  // namespace varcs
