#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "varcs/config.hpp"
#include "varcs/interval.hpp"
#include "varcs/streams.hpp"

namespace varcs {

enum class Method { eb_cs, eb_ci, mp, decoupled, alt_lower, double_eb, hilbert_eb };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// One Monte Carlo experiment: a stream spec (seed = master seed, length =
// horizon), the methods to run, and the aggregation targets. Confidence-
// sequence methods are evaluated at every checkpoint, fixed-sample methods at
// the horizon only.
struct ExperimentSpec {
  StreamSpec stream{};
  std::vector<Method> methods{Method::eb_cs, Method::mp};
  double alpha = 0.05;
  std::size_t replications = 100;
  std::vector<std::size_t> checkpoints{};  // sorted; empty = default log grid
  AlphaSplit split{};
  bool std_target = false;  // aggregate intervals for sigma instead of sigma^2
  std::size_t dim = 3;      // hilbert_eb embedding dimension
  unsigned threads = 1;     // 0 = hardware concurrency
  std::string output_csv{};
  std::string output_svg{};
};

// sqrt(10)-spaced checkpoints up to `length` (always including `length`).
std::vector<std::size_t> default_checkpoints(std::size_t length);

struct Trajectory {
  Method method = Method::eb_cs;
  // Intervals for sigma^2. CS methods: one per t = 1..length; CI-style
  // methods: a single entry at the horizon.
  std::vector<Interval> points;
  bool at_horizon_only = false;
  bool pointwise = false;  // guarantee holds per sample size, not anytime
};

// Runs every requested method once over one stream realization drawn with
// `seed`. Identical seeds produce bit-identical trajectories.
std::vector<Trajectory> run_replication(const ExperimentSpec& spec, std::uint64_t seed);

struct CheckpointStats {
  std::size_t t = 0;
  double mean_lower = 0.0;
  double mean_upper = 0.0;
  double q95_lower = 0.0;   // 0.95 empirical quantile of the lower bounds
  double q95_upper = 0.0;   // 0.95 empirical quantile of the upper bounds
  double miscoverage = 0.0; // anywhere up to t for CS methods, at t for CI
};

struct MethodResult {
  Method method = Method::eb_cs;
  std::vector<CheckpointStats> rows;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<MethodResult> methods;
};

// Replications run (optionally in parallel) with per-replication seeds
// derived from the master seed; the reduction is ordered by replication
// index, so results do not depend on the worker count.
ExperimentResult coverage_and_width(const ExperimentSpec& spec);

struct SharpnessRow {
  std::size_t n = 0;
  double sqrt_n_upper_width = 0.0;  // mean over reps of sqrt(n) (U_n - D_n)
  double sqrt_n_lower_width = 0.0;  // mean over reps of sqrt(n) (D_n - L_n)
  double oracle = 0.0;              // sqrt(2 V[(X-mu)^2] log(1/alpha))
  double ratio_upper = 0.0;         // NaN when the oracle constant is 0
  double ratio_lower = 0.0;
};

// Fixed-sample (CI mode) width scaling against the oracle first-order
// constant, one row per n. Upper and lower trackers run standalone at the
// full alpha; the lower budget is split per `split`.
std::vector<SharpnessRow> sharpness_curve(const StreamSpec& stream,
                                          std::span<const std::size_t> n_grid, double alpha,
                                          SplitPolicy split_policy, std::size_t replications,
                                          unsigned threads = 1);

// CSV with the fixed header
// method,t,mean_lower,mean_upper,q95_lower,q95_upper,miscoverage
// and shortest round-trip number formatting, so equal results serialize to
// identical bytes.
std::string to_csv(const ExperimentResult& result);
void emit_csv(const ExperimentResult& result, const std::string& path);
ExperimentResult parse_csv_text(const std::string& text);
ExperimentResult parse_csv(const std::string& path);

std::string to_csv(std::span<const SharpnessRow> rows);

// Minimal native SVG: one panel per entry, truth as a horizontal rule, one
// polyline per method per bound (mean and 0.95-quantile, lower and upper).
struct SvgPanel {
  std::string title;
  double truth = 0.0;  // NaN suppresses the rule
  ExperimentResult data;
};
std::string to_svg(std::span<const SvgPanel> panels);
void emit_svg(std::span<const SvgPanel> panels, const std::string& path);

// Flat key/value experiment configuration (see README for the schema).
ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec load_config(const std::string& path);

// Default master seed: VARCS_SEED environment variable when set, else a
// fixed constant.
std::uint64_t default_seed();

std::string format_double(double v);

}  // namespace varcs
