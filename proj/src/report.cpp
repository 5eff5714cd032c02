#include "motivsim/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace motivsim {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Two-pass mean and population standard deviation.
template <typename Get>
MeanStd mean_std(std::span<const EpisodeLog> logs, Get get) {
  double sum = 0.0;
  for (const auto& l : logs) sum += get(l);
  const double mean = sum / static_cast<double>(logs.size());
  double sq = 0.0;
  for (const auto& l : logs) {
    const double d = get(l) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / static_cast<double>(logs.size()))};
}

constexpr int kCell = 20;
constexpr int kMargin = 30;

std::string svg_open(int width, int height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  return out.str();
}

// Maps a value range onto a vertical pixel span (top = hi).
struct YScale {
  double lo;
  double hi;
  double top;
  double bottom;

  double operator()(double v) const {
    if (hi == lo) return (top + bottom) / 2.0;
    return bottom - (v - lo) / (hi - lo) * (bottom - top);
  }
};

void polyline(std::ostringstream& out, const std::vector<std::pair<double, double>>& pts,
              const std::string& color) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << ' ';
    out << format_number(pts[i].first, 6) << ',' << format_number(pts[i].second, 6);
  }
  out << "\"/>\n";
}

void band(std::ostringstream& out, const std::vector<double>& xs, const std::vector<double>& lo,
          const std::vector<double>& hi, const std::string& color) {
  out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << format_number(xs[i], 6) << ',' << format_number(hi[i], 6) << ' ';
  }
  for (std::size_t i = xs.size(); i-- > 0;) {
    out << format_number(xs[i], 6) << ',' << format_number(lo[i], 6);
    if (i) out << ' ';
  }
  out << "\"/>\n";
}

void panel(std::ostringstream& out, std::span<const WindowStat> stats, bool reward, double top,
           double bottom, double left, double right) {
  std::vector<double> mean;
  std::vector<double> sd;
  for (const auto& s : stats) {
    mean.push_back(reward ? s.mean_reward : s.mean_steps);
    sd.push_back(reward ? s.std_reward : s.std_steps);
  }
  double lo = mean[0] - sd[0];
  double hi = mean[0] + sd[0];
  for (std::size_t i = 0; i < mean.size(); ++i) {
    lo = std::min(lo, mean[i] - sd[i]);
    hi = std::max(hi, mean[i] + sd[i]);
  }
  const YScale y{lo, hi, top, bottom};
  const double span = stats.size() > 1 ? static_cast<double>(stats.size() - 1) : 1.0;
  std::vector<double> xs;
  std::vector<double> ylo;
  std::vector<double> yhi;
  std::vector<std::pair<double, double>> line;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const double x = left + (right - left) * static_cast<double>(i) / span;
    xs.push_back(x);
    ylo.push_back(y(mean[i] - sd[i]));
    yhi.push_back(y(mean[i] + sd[i]));
    line.emplace_back(x, y(mean[i]));
  }
  const std::string color = reward ? "#1f77b4" : "#d62728";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
      << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  band(out, xs, ylo, yhi, color);
  polyline(out, line, color);
  out << "<text x=\"" << left + 4 << "\" y=\"" << top + 14 << "\" font-size=\"12\">"
      << (reward ? "reward" : "steps") << " (mean +/- std per " << stats[0].episodes
      << " episodes)</text>\n";
  out << "<text x=\"2\" y=\"" << format_number(top + 10, 6) << "\" font-size=\"10\">"
      << format_number(hi, 4) << "</text>\n";
  out << "<text x=\"2\" y=\"" << format_number(bottom, 6) << "\" font-size=\"10\">"
      << format_number(lo, 4) << "</text>\n";
}

}  // namespace

std::string format_number(double v, int precision) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::vector<WindowStat> window_stats(std::span<const EpisodeLog> logs, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window_stats: window must be >= 1");
  if (logs.empty()) throw std::invalid_argument("window_stats: no episodes");
  std::vector<WindowStat> out;
  for (std::size_t begin = 0; begin < logs.size(); begin += window) {
    const auto block = logs.subspan(begin, std::min(window, logs.size() - begin));
    const auto r = mean_std(block, [](const EpisodeLog& l) { return l.cumulative_reward; });
    const auto s =
        mean_std(block, [](const EpisodeLog& l) { return static_cast<double>(l.steps); });
    out.push_back(WindowStat{begin / window, block.size(), r.mean, r.std, s.mean, s.std});
  }
  return out;
}

Heatmap make_heatmap(const VisitGrid& visits, const GridConfig& grid) {
  if (visits.width != grid.width || visits.height != grid.height) {
    throw std::invalid_argument("make_heatmap: visit grid does not match the layout");
  }
  return Heatmap{visits.width, visits.height, visits.counts, grid.stations};
}

std::string station_color(char id) {
  switch (id) {
    case 'A':
      return "#1f77b4";
    case 'B':
      return "#ff7f0e";
    case 'C':
      return "#2ca02c";
    case 'D':
      return "#d62728";
    default:
      return "#7f7f7f";
  }
}

std::string render_heatmap(const Heatmap& h) {
  const std::int64_t max_count =
      h.counts.empty() ? 0 : *std::max_element(h.counts.begin(), h.counts.end());
  const int w = h.width * kCell + 2 * kMargin;
  const int ht = h.height * kCell + 2 * kMargin;
  std::ostringstream out;
  out << svg_open(w, ht);
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << ht
      << "\" fill=\"#ffffff\"/>\n";
  out << "<g id=\"cells\">\n";
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      const std::int64_t c = h.counts[static_cast<std::size_t>(y * h.width + x)];
      const double intensity =
          max_count > 0 ? static_cast<double>(c) / static_cast<double>(max_count) : 0.0;
      out << "<rect x=\"" << kMargin + x * kCell << "\" y=\"" << kMargin + y * kCell
          << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"#08306b\" fill-opacity=\"" << format_number(intensity, 4)
          << "\"><title>(" << x << "," << y << ") " << c << "</title></rect>\n";
    }
  }
  out << "</g>\n<g id=\"stations\">\n";
  for (const auto& s : h.stations) {
    const auto& r = s.region;
    out << "<rect x=\"" << kMargin + r.x0 * kCell << "\" y=\"" << kMargin + r.y0 * kCell
        << "\" width=\"" << (r.x1 - r.x0 + 1) * kCell << "\" height=\""
        << (r.y1 - r.y0 + 1) * kCell << "\" fill=\"none\" stroke=\"" << station_color(s.id)
        << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"" << kMargin + r.x0 * kCell + 2 << "\" y=\"" << kMargin + r.y0 * kCell - 3
        << "\" font-size=\"12\" fill=\"" << station_color(s.id) << "\">" << s.id << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << ht - 8 << "\" font-size=\"12\">max visits "
      << max_count << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<double> drive_summary(std::span<const EpisodeLog> test_logs) {
  if (test_logs.empty()) throw std::invalid_argument("drive_summary: no test episodes");
  std::vector<double> means;
  means.reserve(test_logs.size());
  for (const auto& log : test_logs) {
    double sum = 0.0;
    for (const auto& s : log.trace) sum += s.drive;
    means.push_back(log.trace.empty() ? 0.0 : sum / static_cast<double>(log.trace.size()));
  }
  return means;
}

std::string drive_summary_csv(std::span<const double> mean_drives) {
  std::ostringstream out;
  out << "test_index,mean_drive\n";
  for (std::size_t i = 0; i < mean_drives.size(); ++i) {
    out << i << ',' << format_number(mean_drives[i], 17) << '\n';
  }
  return out.str();
}

std::string render_drive_chart(std::span<const double> mean_drives) {
  constexpr double kBar = 12.0;
  double lo = -30.0;
  double hi = 20.0;
  for (double v : mean_drives) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double plot_w = std::max<double>(1.0, static_cast<double>(mean_drives.size())) * kBar;
  const int w = static_cast<int>(plot_w) + 2 * kMargin + 20;
  const int h = 300;
  const YScale y{lo, hi, static_cast<double>(kMargin), static_cast<double>(h - kMargin)};
  const double left = kMargin + 20;
  std::ostringstream out;
  out << svg_open(w, h);
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < mean_drives.size(); ++i) {
    const double v = mean_drives[i];
    const double y0 = y(0.0);
    const double y1 = y(v);
    out << "<rect x=\"" << format_number(left + static_cast<double>(i) * kBar + 1, 6)
        << "\" y=\"" << format_number(std::min(y0, y1), 6) << "\" width=\""
        << format_number(kBar - 2, 6) << "\" height=\"" << format_number(std::abs(y1 - y0), 6)
        << "\" fill=\"" << (v < 0 ? "#d62728" : "#1f77b4") << "\"><title>test " << i << ": "
        << format_number(v, 6) << "</title></rect>\n";
  }
  out << "<line id=\"homeostasis\" x1=\"" << left << "\" y1=\"" << format_number(y(0.0), 6)
      << "\" x2=\"" << format_number(left + plot_w, 6) << "\" y2=\""
      << format_number(y(0.0), 6) << "\" stroke=\"#000000\" stroke-dasharray=\"4 2\"/>\n";
  out << "<text x=\"2\" y=\"" << format_number(y(hi) + 10, 6) << "\" font-size=\"10\">"
      << format_number(hi, 4) << "</text>\n";
  out << "<text x=\"2\" y=\"" << format_number(y(lo), 6) << "\" font-size=\"10\">"
      << format_number(lo, 4) << "</text>\n";
  out << "<text x=\"" << left << "\" y=\"16\" font-size=\"12\">average drive per test ("
      << mean_drives.size() << " tests)</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_reward_curve(std::span<const WindowStat> stats) {
  const int w = 640;
  const int h = 420;
  std::ostringstream out;
  out << svg_open(w, h);
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  if (stats.empty()) {
    out << "<text x=\"20\" y=\"20\" font-size=\"12\">no episodes</text>\n</svg>\n";
    return out.str();
  }
  panel(out, stats, true, 20, 190, 50, w - 10);
  panel(out, stats, false, 220, 390, 50, w - 10);
  out << "<text x=\"50\" y=\"410\" font-size=\"10\">window 0</text>\n";
  out << "<text x=\"" << w - 90 << "\" y=\"410\" font-size=\"10\">window "
      << stats.back().window << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<double> occupancy_by_station(std::span<const EpisodeLog> logs, std::size_t first,
                                         std::size_t last) {
  if (first >= last || last > logs.size()) {
    throw std::invalid_argument("occupancy_by_station: empty or out-of-range episode range");
  }
  const std::size_t slots = logs[first].contact_steps.size();
  std::vector<std::int64_t> counts(slots, 0);
  std::int64_t total = 0;
  for (std::size_t e = first; e < last; ++e) {
    const auto& c = logs[e].contact_steps;
    if (c.size() != slots) throw std::invalid_argument("occupancy_by_station: mixed layouts");
    for (std::size_t i = 0; i < slots; ++i) {
      counts[i] += c[i];
      total += c[i];
    }
  }
  if (total == 0) throw std::invalid_argument("occupancy_by_station: range has no steps");
  std::vector<double> fractions(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return fractions;
}

}  // namespace motivsim
