#pragma once

// CSV and SVG output for experiment series.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "exploitsim/agents.hpp"
#include "exploitsim/simulator.hpp"

namespace exploitsim {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader =
    "scenario,agent,day,mean_watch_rate,se_watch_rate,mean_human_reward,se_human_reward";

// Six significant digits, '.' decimal point, independent of the C locale.
inline std::string format_number(double x, int significant = 6) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, significant);
  if (ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return x;
}

}  // namespace detail

inline std::string series_to_csv(std::string_view scenario, const std::vector<SeriesPoint>& points) {
  std::string out(kCsvHeader);
  out += '\n';
  const std::string name = detail::csv_field(scenario);
  for (const auto& p : points) {
    out += name;
    out += ',';
    out += agent_name(p.agent);
    out += ',';
    out += std::to_string(p.day);
    for (double x : {p.mean_watch_rate, p.se_watch_rate, p.mean_human_reward, p.se_human_reward}) {
      out += ',';
      out += format_number(x);
    }
    out += '\n';
  }
  return out;
}

struct CsvSeries {
  std::string scenario;
  std::vector<SeriesPoint> points;
};

inline CsvSeries series_from_csv(std::string_view text) {
  CsvSeries result;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 7) throw std::invalid_argument("CSV row must have 7 fields");
    const auto kind = parse_agent_kind(f[1]);
    if (!kind) throw std::invalid_argument("unknown agent '" + f[1] + "'");
    result.scenario = f[0];
    SeriesPoint p;
    p.agent = *kind;
    p.day = static_cast<std::size_t>(detail::parse_double(f[2]));
    p.mean_watch_rate = detail::parse_double(f[3]);
    p.se_watch_rate = detail::parse_double(f[4]);
    p.mean_human_reward = detail::parse_double(f[5]);
    p.se_human_reward = detail::parse_double(f[6]);
    result.points.push_back(p);
  }
  if (!header_seen) throw std::invalid_argument("empty CSV");
  return result;
}

enum class Metric { kWatchRate, kHumanReward };

inline std::string_view metric_label(Metric m) {
  return m == Metric::kWatchRate ? "success rate (watched in full)"
                                 : "utility to the user (incl. opportunity cost)";
}

inline std::string_view agent_color(AgentKind kind) {
  switch (kind) {
    case AgentKind::kIgnorant: return "#1f3f8f";
    case AgentKind::kKnowsPreferences: return "#f28e1c";
    case AgentKind::kKnowsIrrationalities: return "#8c8c8c";
    case AgentKind::kOmniscient: return "#e8c21a";
    case AgentKind::kAligned: return "#5ab4e5";
    case AgentKind::kGrounded: return "#2e9e44";
  }
  return "#000000";
}

// Static 800x500 line chart, one polyline per agent, no external resources.
inline std::string series_to_svg(std::string_view title, const std::vector<SeriesPoint>& points,
                                 Metric metric) {
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto value = [metric](const SeriesPoint& p) {
    return metric == Metric::kWatchRate ? p.mean_watch_rate : p.mean_human_reward;
  };

  std::vector<AgentKind> agents;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& p : points) {
    if (std::find(agents.begin(), agents.end(), p.agent) == agents.end()) agents.push_back(p.agent);
    x_min = std::min(x_min, static_cast<double>(p.day));
    x_max = std::max(x_max, static_cast<double>(p.day));
    y_min = std::min(y_min, value(p));
    y_max = std::max(y_max, value(p));
  }
  if (points.empty()) x_min = x_max = y_min = y_max = 0.0;
  if (x_max == x_min) x_max = x_min + 1.0;
  const double pad = (y_max > y_min ? y_max - y_min : 1.0) * 0.05;
  y_min -= pad;
  y_max += pad;

  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };
  auto num = [](double x) { return format_number(x, 6); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-size=\"15\">" << detail::xml_escape(title) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
      << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_min + (x_max - x_min) * t / kTicks;
    const double yv = y_min + (y_max - y_min) * t / kTicks;
    svg << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << format_number(xv, 3) << "</text>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << format_number(yv, 3) << "</text>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(yv)) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(sy(yv))
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">day</text>\n";
  svg << "<text transform=\"translate(18 " << num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << metric_label(metric) << "</text>\n";

  for (std::size_t a = 0; a < agents.size(); ++a) {
    const AgentKind kind = agents[a];
    svg << "<polyline id=\"series-" << agent_name(kind) << "\" fill=\"none\" stroke=\""
        << agent_color(kind) << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& p : series_for(points, kind)) {
      if (!first) svg << ' ';
      first = false;
      svg << num(sx(static_cast<double>(p.day))) << ',' << num(sy(value(p)));
    }
    svg << "\"/>\n";

    const double ly = kTop + 10 + 20.0 * static_cast<double>(a);
    const double lx = kLeft + plot_w + 15;
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 25)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << agent_color(kind)
        << "\" stroke-width=\"3\"/>\n";
    svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4) << "\">" << agent_name(kind)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// Writes to `<path>.tmp` and renames over `path`, so readers never observe a
// partially written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() +
                  "': " + ec.message());
  }
}

}  // namespace exploitsim
