#include "varcs/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>

#include "varcs/baselines.hpp"
#include "varcs/hilbert.hpp"
#include "varcs/variance_cs.hpp"

namespace varcs {

std::string method_name(Method m) {
  switch (m) {
    case Method::eb_cs: return "eb-cs";
    case Method::eb_ci: return "eb-ci";
    case Method::mp: return "mp";
    case Method::decoupled: return "decoupled";
    case Method::alt_lower: return "alt-lower";
    case Method::double_eb: return "double-eb";
    case Method::hilbert_eb: return "hilbert-eb";
  }
  throw std::logic_error("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  for (Method m : {Method::eb_cs, Method::eb_ci, Method::mp, Method::decoupled,
                   Method::alt_lower, Method::double_eb, Method::hilbert_eb}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method: " + name);
}

std::vector<std::size_t> default_checkpoints(std::size_t length) {
  std::vector<std::size_t> out;
  for (double v = 10.0; v < static_cast<double>(length); v *= std::sqrt(10.0)) {
    const auto t = static_cast<std::size_t>(std::llround(v));
    if (t >= length) break;
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  if (length > 0 && (out.empty() || out.back() != length)) out.push_back(length);
  return out;
}

namespace {

void run_in_parallel(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, count == 0 ? 1 : static_cast<unsigned>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned k = 0; k < threads; ++k) {
    pool.emplace_back([&, k] {
      for (std::size_t i = k; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Uniform streaming facade over the method trackers.
class MethodRunner {
 public:
  virtual ~MethodRunner() = default;
  virtual Interval update(double x) = 0;
  virtual bool at_horizon_only() const { return false; }
  // Whether the guarantee is anytime-valid (miscoverage counted anywhere up
  // to t) or pointwise per sample size, as for the Maurer-Pontil interval.
  virtual bool anytime() const { return true; }
};

class EbCsRunner : public MethodRunner {
 public:
  EbCsRunner(double alpha, const TrackerConfig& cfg) : tracker_(alpha, cfg) {}
  Interval update(double x) override { return tracker_.update(x); }

 private:
  VarianceTracker tracker_;
};

class EbCiRunner : public MethodRunner {
 public:
  EbCiRunner(double alpha, const TrackerConfig& cfg) : tracker_(alpha, cfg) {}
  Interval update(double x) override { return tracker_.update(x); }
  bool at_horizon_only() const override { return true; }

 private:
  VarianceTracker tracker_;
};

class MpRunner : public MethodRunner {
 public:
  explicit MpRunner(double alpha) : tracker_(alpha) {}
  Interval update(double x) override {
    tracker_.update(x);
    return tracker_.var_interval();
  }
  bool anytime() const override { return false; }

 private:
  MpTracker tracker_;
};

class DecoupledRunner : public MethodRunner {
 public:
  DecoupledRunner(double alpha, const TrackerConfig& cfg) : tracker_(alpha, cfg) {}
  Interval update(double x) override { return tracker_.update(x); }

 private:
  DecoupledTracker tracker_;
};

class AltLowerRunner : public MethodRunner {
 public:
  AltLowerRunner(double alpha, const TrackerConfig& cfg) : tracker_(alpha, cfg) {}
  Interval update(double x) override { return tracker_.update(x); }

 private:
  AltLowerTracker tracker_;
};

class DoubleEbRunner : public MethodRunner {
 public:
  DoubleEbRunner(double alpha, std::size_t horizon, const TrackerConfig& cfg)
      : tracker_(alpha, horizon, cfg) {}
  Interval update(double x) override { return tracker_.update(x); }

 private:
  DoubleEbTracker tracker_;
};

// Embeds the scalar stream kind into d dimensions: coordinate j is an
// independent copy of the stream mapped to (u - 1/2)/sqrt(d), which keeps
// ||x|| <= 1/2 and E||X - mu||^2 equal to the scalar variance.
class HilbertRunner : public MethodRunner {
 public:
  HilbertRunner(double alpha, const TrackerConfig& cfg, const StreamSpec& stream,
                std::size_t dim, std::uint64_t seed)
      : tracker_(dim, alpha, cfg), scale_(1.0 / std::sqrt(static_cast<double>(dim))) {
    gens_.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      StreamSpec coord = stream;
      coord.seed = j == 0 ? seed : derive_seed(seed, j);
      gens_.emplace_back(coord);
    }
    x_.resize(dim);
  }

  // Draws its own coordinates; the scalar observation is ignored.
  Interval update(double) override {
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      x_[j] = (gens_[j].next() - 0.5) * scale_;
    }
    return tracker_.update(x_);
  }

 private:
  VecVarianceTracker tracker_;
  double scale_;
  std::vector<StreamGenerator> gens_;
  std::vector<double> x_;
};

std::unique_ptr<MethodRunner> make_runner(Method m, const ExperimentSpec& spec,
                                          std::uint64_t seed) {
  TrackerConfig cfg;
  cfg.split = spec.split;
  const std::size_t n = spec.stream.length;
  switch (m) {
    case Method::eb_cs: return std::make_unique<EbCsRunner>(spec.alpha, cfg);
    case Method::eb_ci: {
      TrackerConfig ci_cfg = cfg;
      ci_cfg.horizon = n;
      return std::make_unique<EbCiRunner>(spec.alpha, ci_cfg);
    }
    case Method::mp: return std::make_unique<MpRunner>(spec.alpha);
    case Method::decoupled: return std::make_unique<DecoupledRunner>(spec.alpha, cfg);
    case Method::alt_lower: return std::make_unique<AltLowerRunner>(spec.alpha, cfg);
    case Method::double_eb: return std::make_unique<DoubleEbRunner>(spec.alpha, n, cfg);
    case Method::hilbert_eb:
      return std::make_unique<HilbertRunner>(spec.alpha, cfg, spec.stream, spec.dim,
                                             derive_seed(seed, 0x48494C42ULL));
  }
  throw std::logic_error("make_runner: unknown method");
}

}  // namespace

std::vector<Trajectory> run_replication(const ExperimentSpec& spec, std::uint64_t seed) {
  StreamSpec stream = spec.stream;
  stream.seed = seed;
  StreamGenerator gen(stream);

  std::vector<std::unique_ptr<MethodRunner>> runners;
  std::vector<Trajectory> out;
  runners.reserve(spec.methods.size());
  out.reserve(spec.methods.size());
  for (Method m : spec.methods) {
    runners.push_back(make_runner(m, spec, seed));
    Trajectory traj;
    traj.method = m;
    traj.at_horizon_only = runners.back()->at_horizon_only();
    traj.pointwise = !runners.back()->anytime();
    traj.points.reserve(traj.at_horizon_only ? 1 : stream.length);
    out.push_back(std::move(traj));
  }

  for (std::size_t t = 1; t <= stream.length; ++t) {
    const double x = gen.next();
    for (std::size_t k = 0; k < runners.size(); ++k) {
      const Interval iv = runners[k]->update(x);
      if (!out[k].at_horizon_only || t == stream.length) out[k].points.push_back(iv);
    }
  }
  return out;
}

ExperimentResult coverage_and_width(const ExperimentSpec& spec) {
  if (spec.replications == 0) throw std::invalid_argument("coverage_and_width: replications must be >= 1");
  if (spec.stream.length == 0) throw std::invalid_argument("coverage_and_width: stream length must be >= 1");
  const std::size_t n = spec.stream.length;
  std::vector<std::size_t> checkpoints =
      spec.checkpoints.empty() ? default_checkpoints(n) : spec.checkpoints;
  for (std::size_t c : checkpoints) {
    if (c == 0 || c > n) throw std::invalid_argument("coverage_and_width: checkpoints must lie in [1, length]");
  }
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("coverage_and_width: checkpoints must be sorted");
  }

  const Moments m = true_moments(spec.stream);
  const double truth = spec.std_target ? std::sqrt(m.variance) : m.variance;

  const std::size_t reps = spec.replications;
  const std::size_t n_methods = spec.methods.size();
  const std::size_t n_checks = checkpoints.size();

  // Slot per (method, replication, checkpoint); reduction below runs in
  // replication order regardless of which worker filled the slot.
  struct Cell {
    double lower = 0.0, upper = 0.0;
    bool missed = false;
    bool present = false;
  };
  std::vector<Cell> cells(n_methods * reps * n_checks);
  std::vector<double> wall(reps * n_methods, 0.0);

  run_in_parallel(reps, spec.threads, [&](std::size_t rep) {
    const std::uint64_t seed = derive_seed(spec.stream.seed, rep);
    ExperimentSpec one = spec;
    for (std::size_t k = 0; k < n_methods; ++k) {
      one.methods = {spec.methods[k]};
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<Trajectory> trajs = run_replication(one, seed);
      wall[rep * n_methods + k] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const Trajectory& traj = trajs.front();
      bool escaped = false;
      std::size_t ci = 0;
      if (traj.at_horizon_only) {
        Interval iv = traj.points.back();
        if (spec.std_target) iv = std_interval(iv);
        Cell& cell = cells[(k * reps + rep) * n_checks + (n_checks - 1)];
        if (checkpoints.back() == n) {
          cell = {iv.lower, iv.upper, !iv.contains(truth), true};
        }
        continue;
      }
      for (std::size_t t = 1; t <= traj.points.size(); ++t) {
        Interval iv = traj.points[t - 1];
        if (spec.std_target) iv = std_interval(iv);
        if (!iv.contains(truth)) escaped = true;
        if (ci < n_checks && checkpoints[ci] == t) {
          const bool missed = traj.pointwise ? !iv.contains(truth) : escaped;
          cells[(k * reps + rep) * n_checks + ci] = {iv.lower, iv.upper, missed, true};
          ++ci;
        }
      }
    }
  });

  // 0.95 empirical quantile, lowest index q with F(q) >= 0.95.
  const auto q95 = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.empty() ? 0 : (19 * v.size() + 19) / 20 - 1;  // ceil(0.95 K) - 1
    return v.empty() ? 0.0 : v[std::min(k, v.size() - 1)];
  };

  ExperimentResult result;
  for (std::size_t k = 0; k < n_methods; ++k) {
    MethodResult mr;
    mr.method = spec.methods[k];
    for (std::size_t r = 0; r < reps; ++r) mr.wall_seconds += wall[r * n_methods + k];
    for (std::size_t ci = 0; ci < n_checks; ++ci) {
      double sum_lo = 0.0, sum_up = 0.0;
      std::size_t misses = 0, present = 0;
      std::vector<double> lows, ups;
      lows.reserve(reps);
      ups.reserve(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        const Cell& cell = cells[(k * reps + r) * n_checks + ci];
        if (!cell.present) continue;
        ++present;
        sum_lo += cell.lower;
        sum_up += cell.upper;
        misses += cell.missed ? 1 : 0;
        lows.push_back(cell.lower);
        ups.push_back(cell.upper);
      }
      if (present == 0) continue;
      CheckpointStats row;
      row.t = checkpoints[ci];
      row.mean_lower = sum_lo / static_cast<double>(present);
      row.mean_upper = sum_up / static_cast<double>(present);
      row.q95_lower = q95(lows);
      row.q95_upper = q95(ups);
      row.miscoverage = static_cast<double>(misses) / static_cast<double>(present);
      mr.rows.push_back(row);
    }
    result.methods.push_back(std::move(mr));
  }
  return result;
}

std::vector<SharpnessRow> sharpness_curve(const StreamSpec& stream,
                                          std::span<const std::size_t> n_grid, double alpha,
                                          SplitPolicy split_policy, std::size_t replications,
                                          unsigned threads) {
  if (replications == 0) throw std::invalid_argument("sharpness_curve: replications must be >= 1");
  const Moments m = true_moments(stream);
  const double oracle = std::sqrt(2.0 * m.var_of_sq_dev * std::log(1.0 / alpha));

  std::vector<SharpnessRow> rows;
  for (std::size_t n : n_grid) {
    std::vector<double> up(replications, 0.0), lo(replications, 0.0);
    run_in_parallel(replications, threads, [&](std::size_t rep) {
      TrackerConfig cfg;
      cfg.horizon = n;
      cfg.split = split_policy == SplitPolicy::log_horizon ? AlphaSplit::log_horizon(n)
                                                           : AlphaSplit::halves();
      UpperTracker upper(alpha, cfg);
      LowerTracker lower(alpha, cfg);
      StreamSpec s = stream;
      s.seed = derive_seed(derive_seed(stream.seed, n), rep);
      s.length = n;
      StreamGenerator gen(s);
      for (std::size_t t = 0; t < n; ++t) {
        const double x = gen.next();
        upper.update(x);
        lower.update(x);
      }
      const double rt_n = std::sqrt(static_cast<double>(n));
      up[rep] = rt_n * (upper.upper() - upper.d());
      lo[rep] = rt_n * (lower.d() - lower.lower());
    });
    SharpnessRow row;
    row.n = n;
    for (std::size_t r = 0; r < replications; ++r) {
      row.sqrt_n_upper_width += up[r];
      row.sqrt_n_lower_width += lo[r];
    }
    row.sqrt_n_upper_width /= static_cast<double>(replications);
    row.sqrt_n_lower_width /= static_cast<double>(replications);
    row.oracle = oracle;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.ratio_upper = oracle > 0.0 ? row.sqrt_n_upper_width / oracle : nan;
    row.ratio_lower = oracle > 0.0 ? row.sqrt_n_lower_width / oracle : nan;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace varcs
