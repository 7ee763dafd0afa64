#include "dwdual/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dwdual/error.hpp"
#include "dwdual/pipeline.hpp"

namespace dwdual {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<double>& x, const std::vector<Series>& series) {
  double x0 = *std::min_element(x.begin(), x.end());
  double x1 = *std::max_element(x.begin(), x.end());
  double y0 = 0.0, y1 = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (first) { y0 = y1 = v; first = false; }
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) { y0 -= 1.0; y1 += 1.0; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << fmt(xv, "%.4g") << "</text>\n";
    os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(yv) + 4)
       << "\" text-anchor=\"end\">" << fmt(yv, "%.4g") << "</text>\n";
    os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << fmt(kLeft + pw)
       << "\" y2=\"" << fmt(py(yv)) << "\" stroke=\"#dddddd\"/>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 10)
     << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  if (y0 < 0.0 && y1 > 0.0) {
    os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\"" << fmt(kLeft + pw)
       << "\" y2=\"" << fmt(py(0.0)) << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kColours[k % std::size(kColours)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) os << ' ';
      os << fmt(px(x[i])) << ',' << fmt(py(series[k].y[i]));
    }
    os << "\"/>\n";
    const double ly = kTop + 16.0 + 20.0 * static_cast<double>(k);
    os << "<line x1=\"" << fmt(kLeft + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(kLeft + pw + 36)
       << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(kLeft + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\">" << series[k].label
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> emit_profile_plots(const std::filesystem::path& fields_csv,
                                                      const std::filesystem::path& directory) {
  const auto table = read_fields_csv(fields_csv);
  const auto r = table.column("r");

  struct Plot {
    const char* file;
    const char* title;
    std::vector<std::pair<const char*, const char*>> columns;  // column, legend
  };
  const std::vector<Plot> plots = {
      {"displacements.svg", "Displacements u_i(r)", {{"u1", "u1"}, {"u2", "u2"}, {"u3", "u3"}}},
      {"dual_fields.svg", "Dual fields zeta_i(r)", {{"zeta1", "zeta1"}, {"zeta2", "zeta2"}, {"zeta3", "zeta3"}}},
      {"stress.svg", "Radial stress", {{"F", "F(r)"}, {"G", "G(r)"}}},
  };
  // Check every column before writing anything.
  for (const auto& p : plots) {
    for (const auto& [col, legend] : p.columns) {
      if (!table.has(col)) throw Error(ErrorKind::Config, std::string("fields.csv: missing column \"") + col + "\"");
    }
  }

  std::filesystem::create_directories(directory);
  std::vector<std::filesystem::path> written;
  for (const auto& p : plots) {
    std::vector<Series> series;
    for (const auto& [col, legend] : p.columns) series.push_back({legend, table.column(col)});
    const auto path = directory / p.file;
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Config, "plot: cannot write " + path.string());
    out << render_svg(p.title, "r", r, series);
    written.push_back(path);
  }
  return written;
}

}  // namespace dwdual
