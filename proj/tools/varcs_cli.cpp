// varcs: streaming variance confidence sequences/intervals and the Monte
// Carlo experiment runner.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "varcs/baselines.hpp"
#include "varcs/hilbert.hpp"
#include "varcs/simulate.hpp"
#include "varcs/streams.hpp"
#include "varcs/variance_cs.hpp"

namespace {

using namespace varcs;

std::vector<double> parse_row(const std::string& line, std::size_t expected_dim) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    row.push_back(std::stod(cell));
  }
  if (row.size() != expected_dim) {
    throw std::runtime_error("input row has " + std::to_string(row.size()) +
                             " coordinates, expected " + std::to_string(expected_dim));
  }
  return row;
}

AlphaSplit parse_split(const std::string& text, std::size_t horizon) {
  if (text == "halves") return AlphaSplit::halves();
  if (text == "log-horizon") {
    if (horizon == 0) throw CLI::ValidationError("--split log-horizon requires --horizon");
    return AlphaSplit::log_horizon(horizon);
  }
  const auto colon = text.find(':');
  if (text.rfind("custom:", 0) == 0 && colon != std::string::npos) {
    const auto comma = text.find(',', colon);
    if (comma == std::string::npos) throw CLI::ValidationError("--split custom:a1,a2");
    return AlphaSplit::custom(std::stod(text.substr(colon + 1, comma - colon - 1)),
                              std::stod(text.substr(comma + 1)));
  }
  throw CLI::ValidationError("unknown split: " + text);
}

int run_track(const std::string& input, const std::string& method, double alpha,
              const std::string& mode, std::size_t horizon, std::size_t dim,
              const std::string& split_text) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) throw std::runtime_error("cannot open for reading: " + input);
    in = &file;
  }

  TrackerConfig cfg;
  if (mode == "ci") {
    if (horizon == 0) throw CLI::ValidationError("--mode ci requires --horizon");
    cfg.horizon = horizon;
  }
  cfg.split = parse_split(split_text, horizon);

  std::unique_ptr<VecVarianceTracker> vec;
  std::unique_ptr<VarianceTracker> eb;
  std::unique_ptr<MpTracker> mp;
  std::unique_ptr<DecoupledTracker> dec;
  std::unique_ptr<AltLowerTracker> alt;
  std::unique_ptr<DoubleEbTracker> deb;

  if (dim > 1) {
    if (method != "eb") throw CLI::ValidationError("--dim > 1 supports only --method eb");
    vec = std::make_unique<VecVarianceTracker>(dim, alpha, cfg);
  } else if (method == "eb") {
    eb = std::make_unique<VarianceTracker>(alpha, cfg);
  } else if (method == "mp") {
    mp = std::make_unique<MpTracker>(alpha);
  } else if (method == "decoupled") {
    dec = std::make_unique<DecoupledTracker>(alpha, cfg);
  } else if (method == "alt-lower") {
    alt = std::make_unique<AltLowerTracker>(alpha, cfg);
  } else if (method == "double-eb") {
    if (horizon == 0) throw CLI::ValidationError("--method double-eb requires --horizon");
    deb = std::make_unique<DoubleEbTracker>(alpha, horizon, cfg);
  } else {
    throw CLI::ValidationError("unknown method: " + method);
  }

  std::printf("t,lower,upper\n");
  std::string line;
  std::size_t t = 0;
  while (std::getline(*in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++t;
    Interval iv;
    if (vec) {
      iv = vec->update(parse_row(line, dim));
    } else {
      const double x = std::stod(line);
      if (eb) iv = eb->update(x);
      if (mp) {
        mp->update(x);
        iv = mp->var_interval();
      }
      if (dec) iv = dec->update(x);
      if (alt) iv = alt->update(x);
      if (deb) iv = deb->update(x);
    }
    std::printf("%zu,%s,%s\n", t, format_double(iv.lower).c_str(),
                format_double(iv.upper).c_str());
  }
  return 0;
}

int run_simulate(const std::string& config_path) {
  ExperimentSpec spec = load_config(config_path);
  const ExperimentResult result = coverage_and_width(spec);
  if (spec.output_csv.empty()) {
    std::fputs(to_csv(result).c_str(), stdout);
  } else {
    emit_csv(result, spec.output_csv);
    std::fprintf(stderr, "wrote %s\n", spec.output_csv.c_str());
  }
  if (!spec.output_svg.empty()) {
    const Moments m = true_moments(spec.stream);
    SvgPanel panel{stream_name(spec.stream),
                   spec.std_target ? std::sqrt(m.variance) : m.variance, result};
    emit_svg(std::vector<SvgPanel>{panel}, spec.output_svg);
    std::fprintf(stderr, "wrote %s\n", spec.output_svg.c_str());
  }
  return 0;
}

// Average std intervals across the three paper distributions: EB confidence
// sequence, the horizon-optimized EB interval, and the Maurer-Pontil
// baseline, at alpha = 0.05 over a log grid of sample sizes.
int run_compare(const std::string& out_dir, std::size_t replications, std::uint64_t seed,
                unsigned threads) {
  std::filesystem::create_directories(out_dir);
  std::vector<SvgPanel> panels;
  const std::vector<std::pair<std::string, StreamSpec>> setups = {
      {"uniform", {StreamKind::uniform01, 0.0, 0.0, 0, 0}},
      {"beta_2_6", {StreamKind::beta, 2.0, 6.0, 0, 0}},
      {"beta_5_5", {StreamKind::beta, 5.0, 5.0, 0, 0}},
  };
  for (const auto& [tag, stream] : setups) {
    ExperimentSpec spec;
    spec.stream = stream;
    spec.stream.seed = seed;
    spec.stream.length = 10000;
    spec.methods = {Method::eb_cs, Method::eb_ci, Method::mp};
    spec.alpha = 0.05;
    spec.replications = replications;
    spec.std_target = true;
    spec.threads = threads;
    const ExperimentResult result = coverage_and_width(spec);
    const std::string csv_path = out_dir + "/" + tag + ".csv";
    emit_csv(result, csv_path);
    std::fprintf(stderr, "wrote %s\n", csv_path.c_str());
    panels.push_back({stream_name(spec.stream), std::sqrt(true_moments(spec.stream).variance),
                      result});
  }
  const std::string svg_path = out_dir + "/compare.svg";
  emit_svg(panels, svg_path);
  std::fprintf(stderr, "wrote %s\n", svg_path.c_str());
  return 0;
}

int run_plot(const std::vector<std::string>& inputs, const std::string& output,
             const std::vector<double>& truths) {
  std::vector<SvgPanel> panels;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    SvgPanel panel;
    panel.title = std::filesystem::path(inputs[i]).stem().string();
    panel.truth = i < truths.size() ? truths[i] : std::numeric_limits<double>::quiet_NaN();
    panel.data = parse_csv(inputs[i]);
    panels.push_back(std::move(panel));
  }
  emit_svg(panels, output);
  std::fprintf(stderr, "wrote %s\n", output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence sequences and intervals for the variance of bounded streams"};
  app.require_subcommand(1);

  auto* track = app.add_subcommand("track", "stream intervals for a data file to stdout");
  std::string input = "-";
  std::string method = "eb";
  double alpha = 0.05;
  std::string mode = "cs";
  std::size_t horizon = 0;
  std::size_t dim = 1;
  std::string split_text = "halves";
  track->add_option("--input", input, "input file, one observation per line ('-' for stdin)");
  track->add_option("--method", method, "eb | mp | decoupled | alt-lower | double-eb");
  track->add_option("--alpha", alpha, "error budget in (0,1)");
  track->add_option("--mode", mode, "cs (anytime) or ci (fixed horizon)")
      ->check(CLI::IsMember({"cs", "ci"}));
  track->add_option("--horizon", horizon, "sample size for ci mode / double-eb");
  track->add_option("--dim", dim, "coordinates per row (vector-valued stream)");
  track->add_option("--split", split_text, "halves | log-horizon | custom:a1,a2");

  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config");
  std::string config_path;
  simulate->add_option("--config", config_path, "flat key=value config file")->required();

  auto* compare = app.add_subcommand("compare", "EB vs MP std intervals on three benchmark distributions");
  std::string out_dir = "compare-out";
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool seed_set = false;
  compare->add_option("--output-dir", out_dir, "directory for CSV/SVG outputs");
  compare->add_option("--replications", replications, "Monte Carlo replications");
  compare->add_option("--seed", seed, "master seed (default: VARCS_SEED or built-in)")
      ->each([&](const std::string&) { seed_set = true; });
  compare->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* plot = app.add_subcommand("plot", "render experiment CSVs as an SVG chart");
  std::vector<std::string> plot_inputs;
  std::string plot_output;
  std::vector<double> plot_truths;
  plot->add_option("--input", plot_inputs, "experiment CSV (repeatable, one panel each)")
      ->required();
  plot->add_option("--output", plot_output, "output SVG path")->required();
  plot->add_option("--truth", plot_truths, "true parameter per panel (horizontal rule)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track) return run_track(input, method, alpha, mode, horizon, dim, split_text);
    if (*simulate) return run_simulate(config_path);
    if (*compare) {
      return run_compare(out_dir, replications, seed_set ? seed : varcs::default_seed(),
                         threads);
    }
    if (*plot) return run_plot(plot_inputs, plot_output, plot_truths);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
