#include "varcs/streams.hpp"

#include <cmath>
#include <stdexcept>

namespace varcs {

namespace {

void validate(const StreamSpec& spec) {
  switch (spec.kind) {
    case StreamKind::beta:
      if (!(spec.a > 0.0) || !(spec.b > 0.0)) {
        throw std::invalid_argument("StreamSpec: Beta parameters must be positive");
      }
      break;
    case StreamKind::constant:
      if (!(spec.a >= 0.0 && spec.a <= 1.0)) {
        throw std::invalid_argument("StreamSpec: constant value must lie in [0,1]");
      }
      break;
    case StreamKind::bernoulli:
      if (!(spec.a >= 0.0 && spec.a <= 1.0)) {
        throw std::invalid_argument("StreamSpec: Bernoulli probability must lie in [0,1]");
      }
      break;
    default:
      break;
  }
}

double beta_raw_moment(double a, double b, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= (a + j) / (a + b + j);
  return v;
}

}  // namespace

Moments true_moments(const StreamSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case StreamKind::uniform01:
      return {0.5, 1.0 / 12.0, 1.0 / 180.0};
    case StreamKind::beta: {
      const double m1 = beta_raw_moment(spec.a, spec.b, 1);
      const double m2 = beta_raw_moment(spec.a, spec.b, 2);
      const double m3 = beta_raw_moment(spec.a, spec.b, 3);
      const double m4 = beta_raw_moment(spec.a, spec.b, 4);
      const double var = m2 - m1 * m1;
      const double mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
      return {m1, var, mu4 - var * var};
    }
    case StreamKind::constant:
      return {spec.a, 0.0, 0.0};
    case StreamKind::bernoulli: {
      const double p = spec.a;
      const double var = p * (1.0 - p);
      const double mu4 = p * std::pow(1.0 - p, 4) + (1.0 - p) * std::pow(p, 4);
      return {p, var, mu4 - var * var};
    }
    case StreamKind::martingale_bounded: {
      const double p = martingale_tilt;
      const double s2 = martingale_sigma * martingale_sigma;
      const double v =
          s2 * s2 * ((1.0 - p) * (1.0 - p) / p + p * p / (1.0 - p) - 1.0);
      return {martingale_mu, s2, v};
    }
  }
  throw std::logic_error("true_moments: unknown stream kind");
}

StreamGenerator::StreamGenerator(const StreamSpec& spec) : spec_(spec), rng_(spec.seed) {
  validate(spec);
  prev_ = martingale_mu;
}

// Cheng's BB rejection sampler when both shapes exceed 1, Johnk's otherwise.
// Both are exact and consume the uniform stream deterministically.
double StreamGenerator::next_beta() {
  const double a0 = spec_.a;
  const double b0 = spec_.b;
  if (std::min(a0, b0) > 1.0) {
    const double a = std::min(a0, b0);
    const double b = std::max(a0, b0);
    const double alpha = a + b;
    const double beta = std::sqrt((alpha - 2.0) / (2.0 * a * b - alpha));
    const double gamma = a + 1.0 / beta;
    for (;;) {
      const double u1 = rng_.uniform01();
      const double u2 = rng_.uniform01();
      const double v = beta * std::log(u1 / (1.0 - u1));
      const double w = a * std::exp(v);
      const double z = u1 * u1 * u2;
      const double r = gamma * v - 1.3862944;  // log 4
      const double s = a + r - w;
      bool accept = s + 2.609438 >= 5.0 * z;  // 1 + log 5
      if (!accept) {
        const double t = std::log(z);
        accept = s >= t || r + alpha * std::log(alpha / (b + w)) >= t;
      }
      if (accept) {
        return a == a0 ? w / (b + w) : b / (b + w);
      }
    }
  }
  for (;;) {
    const double x = std::pow(rng_.uniform01(), 1.0 / a0);
    const double y = std::pow(rng_.uniform01(), 1.0 / b0);
    if (x + y <= 1.0 && x + y > 0.0) return x / (x + y);
  }
}

double StreamGenerator::next() {
  switch (spec_.kind) {
    case StreamKind::uniform01:
      return rng_.uniform01();
    case StreamKind::beta:
      return next_beta();
    case StreamKind::constant:
      return spec_.a;
    case StreamKind::bernoulli:
      return rng_.uniform01() < spec_.a ? 1.0 : 0.0;
    case StreamKind::martingale_bounded: {
      const double p = prev_ >= martingale_mu ? martingale_tilt : 1.0 - martingale_tilt;
      const double up = martingale_mu + martingale_sigma * std::sqrt((1.0 - p) / p);
      const double dn = martingale_mu - martingale_sigma * std::sqrt(p / (1.0 - p));
      prev_ = rng_.uniform01() < p ? up : dn;
      return prev_;
    }
  }
  throw std::logic_error("StreamGenerator: unknown stream kind");
}

std::vector<double> generate_stream(const StreamSpec& spec) {
  StreamGenerator gen(spec);
  std::vector<double> out;
  out.reserve(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i) out.push_back(gen.next());
  return out;
}

std::string stream_name(const StreamSpec& spec) {
  switch (spec.kind) {
    case StreamKind::uniform01:
      return "uniform01";
    case StreamKind::beta:
      return "beta(" + std::to_string(spec.a) + "," + std::to_string(spec.b) + ")";
    case StreamKind::constant:
      return "constant(" + std::to_string(spec.a) + ")";
    case StreamKind::bernoulli:
      return "bernoulli(" + std::to_string(spec.a) + ")";
    case StreamKind::martingale_bounded:
      return "martingale";
  }
  return "unknown";
}

}  // namespace varcs
