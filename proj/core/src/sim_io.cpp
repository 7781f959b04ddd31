#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "varcs/simulate.hpp"

namespace varcs {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VARCS_SEED")) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), v);
    if (ec == std::errc() && *ptr == '\0') return v;
    throw std::invalid_argument("VARCS_SEED must be an unsigned integer");
  }
  return 0x5EED5EEDULL;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::logic_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("cannot parse number in ") + what + ": " + std::string(s));
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("cannot parse integer in ") + what + ": " + std::string(s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr char k_csv_header[] = "method,t,mean_lower,mean_upper,q95_lower,q95_upper,miscoverage";

}  // namespace

std::string to_csv(const ExperimentResult& result) {
  std::string out(k_csv_header);
  out.push_back('\n');
  for (const MethodResult& mr : result.methods) {
    const std::string name = method_name(mr.method);
    for (const CheckpointStats& row : mr.rows) {
      out += name;
      out.push_back(',');
      out += std::to_string(row.t);
      out.push_back(',');
      out += format_double(row.mean_lower);
      out.push_back(',');
      out += format_double(row.mean_upper);
      out.push_back(',');
      out += format_double(row.q95_lower);
      out.push_back(',');
      out += format_double(row.q95_upper);
      out.push_back(',');
      out += format_double(row.miscoverage);
      out.push_back('\n');
    }
  }
  return out;
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  write_file(path, to_csv(result));
}

ExperimentResult parse_csv_text(const std::string& text) {
  ExperimentResult result;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != k_csv_header) {
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  }
  while (std::getline(in, line)) {
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto parts = split(sv, ',');
    if (parts.size() != 7) throw std::invalid_argument("parse_csv: malformed row: " + line);
    const Method m = method_from_name(std::string(parts[0]));
    if (result.methods.empty() || result.methods.back().method != m) {
      MethodResult mr;
      mr.method = m;
      result.methods.push_back(std::move(mr));
    }
    CheckpointStats row;
    row.t = parse_uint(parts[1], "t");
    row.mean_lower = parse_double(parts[2], "mean_lower");
    row.mean_upper = parse_double(parts[3], "mean_upper");
    row.q95_lower = parse_double(parts[4], "q95_lower");
    row.q95_upper = parse_double(parts[5], "q95_upper");
    row.miscoverage = parse_double(parts[6], "miscoverage");
    result.methods.back().rows.push_back(row);
  }
  return result;
}

ExperimentResult parse_csv(const std::string& path) { return parse_csv_text(read_file(path)); }

std::string to_csv(std::span<const SharpnessRow> rows) {
  std::string out = "n,sqrt_n_upper_width,sqrt_n_lower_width,oracle,ratio_upper,ratio_lower\n";
  for (const SharpnessRow& r : rows) {
    out += std::to_string(r.n);
    out.push_back(',');
    out += format_double(r.sqrt_n_upper_width);
    out.push_back(',');
    out += format_double(r.sqrt_n_lower_width);
    out.push_back(',');
    out += format_double(r.oracle);
    out.push_back(',');
    out += format_double(r.ratio_upper);
    out.push_back(',');
    out += format_double(r.ratio_lower);
    out.push_back('\n');
  }
  return out;
}

namespace {

constexpr const char* k_palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void append_polyline(std::string& svg, const std::vector<std::pair<double, double>>& pts,
                     const char* color, bool dashed) {
  svg += "<polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.2\"";
  if (dashed) svg += " stroke-dasharray=\"4 3\"";
  svg += " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) svg.push_back(' ');
    svg += fmt2(pts[i].first);
    svg.push_back(',');
    svg += fmt2(pts[i].second);
  }
  svg += "\"/>\n";
}

}  // namespace

std::string to_svg(std::span<const SvgPanel> panels) {
  const double panel_w = 420.0, panel_h = 320.0;
  const double ml = 54.0, mr = 16.0, mt = 34.0, mb = 40.0;
  const double width = panel_w * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  const double height = panel_h;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) + "\" height=\"" +
         fmt2(height) + "\" viewBox=\"0 0 " + fmt2(width) + " " + fmt2(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const SvgPanel& panel = panels[p];
    const double x0 = panel_w * static_cast<double>(p) + ml;
    const double x1 = panel_w * static_cast<double>(p) + panel_w - mr;
    const double y0 = mt, y1 = panel_h - mb;

    double tmin = 1e300, tmax = 0.0, vmin = 1e300, vmax = -1e300;
    for (const MethodResult& mr2 : panel.data.methods) {
      for (const CheckpointStats& row : mr2.rows) {
        tmin = std::min(tmin, static_cast<double>(row.t));
        tmax = std::max(tmax, static_cast<double>(row.t));
        vmin = std::min({vmin, row.mean_lower, row.q95_lower});
        vmax = std::max({vmax, row.mean_upper, row.q95_upper});
      }
    }
    if (std::isfinite(panel.truth)) {
      vmin = std::min(vmin, panel.truth);
      vmax = std::max(vmax, panel.truth);
    }
    if (!(tmax > 0.0)) { tmin = 1.0; tmax = 10.0; }
    if (!(vmax > vmin)) { vmin = 0.0; vmax = 1.0; }
    const double pad = 0.06 * (vmax - vmin);
    vmin -= pad;
    vmax += pad;
    const double lt0 = std::log10(std::max(tmin, 1.0));
    const double lt1 = std::log10(std::max(tmax, tmin + 1.0));
    const auto sx = [&](double t) {
      return x0 + (std::log10(std::max(t, 1.0)) - lt0) / std::max(lt1 - lt0, 1e-12) * (x1 - x0);
    };
    const auto sy = [&](double v) { return y1 - (v - vmin) / (vmax - vmin) * (y1 - y0); };

    svg += "<rect x=\"" + fmt2(x0) + "\" y=\"" + fmt2(y0) + "\" width=\"" + fmt2(x1 - x0) +
           "\" height=\"" + fmt2(y1 - y0) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + fmt2((x0 + x1) / 2) + "\" y=\"" + fmt2(y0 - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + panel.title +
           "</text>\n";

    // decade ticks
    for (int e = static_cast<int>(std::ceil(lt0)); e <= static_cast<int>(std::floor(lt1)); ++e) {
      const double xx = sx(std::pow(10.0, e));
      svg += "<line x1=\"" + fmt2(xx) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(xx) + "\" y2=\"" +
             fmt2(y1 + 4.0) + "\" stroke=\"#444\"/>\n";
      svg += "<text x=\"" + fmt2(xx) + "\" y=\"" + fmt2(y1 + 16.0) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">1e" +
             std::to_string(e) + "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
      const double v = vmin + (vmax - vmin) * k / 4.0;
      svg += "<text x=\"" + fmt2(x0 - 6.0) + "\" y=\"" + fmt2(sy(v) + 3.0) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + fmt2(v) +
             "</text>\n";
    }

    if (std::isfinite(panel.truth)) {
      svg += "<line x1=\"" + fmt2(x0) + "\" y1=\"" + fmt2(sy(panel.truth)) + "\" x2=\"" + fmt2(x1) +
             "\" y2=\"" + fmt2(sy(panel.truth)) +
             "\" stroke=\"#000\" stroke-dasharray=\"2 2\"/>\n";
    }

    for (std::size_t k = 0; k < panel.data.methods.size(); ++k) {
      const MethodResult& mr2 = panel.data.methods[k];
      const char* color = k_palette[k % (sizeof(k_palette) / sizeof(k_palette[0]))];
      std::vector<std::pair<double, double>> mean_lo, mean_up, q_lo, q_up;
      for (const CheckpointStats& row : mr2.rows) {
        const double xx = sx(static_cast<double>(row.t));
        mean_lo.emplace_back(xx, sy(row.mean_lower));
        mean_up.emplace_back(xx, sy(row.mean_upper));
        q_lo.emplace_back(xx, sy(row.q95_lower));
        q_up.emplace_back(xx, sy(row.q95_upper));
      }
      append_polyline(svg, mean_lo, color, false);
      append_polyline(svg, mean_up, color, false);
      append_polyline(svg, q_lo, color, true);
      append_polyline(svg, q_up, color, true);
      if (mr2.rows.size() == 1) {
        svg += "<circle cx=\"" + fmt2(mean_lo[0].first) + "\" cy=\"" + fmt2(mean_lo[0].second) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        svg += "<circle cx=\"" + fmt2(mean_up[0].first) + "\" cy=\"" + fmt2(mean_up[0].second) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      }
      svg += "<text x=\"" + fmt2(x1 - 6.0) + "\" y=\"" + fmt2(y0 + 14.0 + 13.0 * static_cast<double>(k)) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color +
             "\">" + method_name(mr2.method) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

void emit_svg(std::span<const SvgPanel> panels, const std::string& path) {
  write_file(path, to_svg(panels));
}

namespace {

StreamSpec parse_distribution(std::string_view value) {
  StreamSpec s;
  const auto parts = split(value, ' ');
  std::vector<std::string_view> words;
  for (auto p : parts) {
    if (!trim(p).empty()) words.push_back(trim(p));
  }
  if (words.empty()) throw std::invalid_argument("config: empty distribution");
  const std::string_view kind = words[0];
  if (kind == "uniform01") {
    s.kind = StreamKind::uniform01;
  } else if (kind == "beta") {
    if (words.size() != 3) throw std::invalid_argument("config: beta needs two parameters");
    s.kind = StreamKind::beta;
    s.a = parse_double(words[1], "beta a");
    s.b = parse_double(words[2], "beta b");
  } else if (kind == "constant") {
    if (words.size() != 2) throw std::invalid_argument("config: constant needs a value");
    s.kind = StreamKind::constant;
    s.a = parse_double(words[1], "constant value");
  } else if (kind == "bernoulli") {
    if (words.size() != 2) throw std::invalid_argument("config: bernoulli needs a probability");
    s.kind = StreamKind::bernoulli;
    s.a = parse_double(words[1], "bernoulli p");
  } else if (kind == "martingale") {
    s.kind = StreamKind::martingale_bounded;
  } else {
    throw std::invalid_argument("config: unknown distribution: " + std::string(kind));
  }
  return s;
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec;
  spec.stream.length = 10000;
  spec.stream.seed = default_seed();
  bool split_log_horizon = false;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("config: expected key = value: " + line);
    const std::string key{trim(sv.substr(0, eq))};
    const std::string value{trim(sv.substr(eq + 1))};
    if (key == "distribution") {
      const StreamSpec parsed = parse_distribution(value);
      spec.stream.kind = parsed.kind;
      spec.stream.a = parsed.a;
      spec.stream.b = parsed.b;
    } else if (key == "alpha") {
      spec.alpha = parse_double(value, "alpha");
    } else if (key == "replications") {
      spec.replications = parse_uint(value, "replications");
    } else if (key == "horizon") {
      spec.stream.length = parse_uint(value, "horizon");
    } else if (key == "seed") {
      spec.stream.seed = parse_uint(value, "seed");
    } else if (key == "checkpoints") {
      spec.checkpoints.clear();
      for (auto part : split(value, ',')) {
        const auto p = trim(part);
        if (!p.empty()) spec.checkpoints.push_back(parse_uint(p, "checkpoints"));
      }
    } else if (key == "methods") {
      spec.methods.clear();
      for (auto part : split(value, ',')) {
        const auto p = trim(part);
        if (!p.empty()) spec.methods.push_back(method_from_name(std::string(p)));
      }
    } else if (key == "split") {
      const auto words = split(value, ' ');
      const std::string_view head = trim(words[0]);
      if (head == "halves") {
        spec.split = AlphaSplit::halves();
      } else if (head == "log-horizon") {
        split_log_horizon = true;
      } else if (head == "custom") {
        if (words.size() != 3) throw std::invalid_argument("config: custom split needs two parts");
        spec.split = AlphaSplit::custom(parse_double(trim(words[1]), "split a1"),
                                        parse_double(trim(words[2]), "split a2"));
      } else {
        throw std::invalid_argument("config: unknown split: " + value);
      }
    } else if (key == "target") {
      if (value == "var") {
        spec.std_target = false;
      } else if (value == "std") {
        spec.std_target = true;
      } else {
        throw std::invalid_argument("config: target must be var or std");
      }
    } else if (key == "dim") {
      spec.dim = parse_uint(value, "dim");
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(parse_uint(value, "threads"));
    } else if (key == "output_csv") {
      spec.output_csv = value;
    } else if (key == "output_svg") {
      spec.output_svg = value;
    } else {
      throw std::invalid_argument("config: unknown key: " + key);
    }
  }
  if (split_log_horizon) spec.split = AlphaSplit::log_horizon(spec.stream.length);
  return spec;
}

ExperimentSpec load_config(const std::string& path) { return parse_config_text(read_file(path)); }

}  // namespace varcs
