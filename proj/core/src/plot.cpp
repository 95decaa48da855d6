#include "footlift/io/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "footlift/common.hpp"
#include "footlift/io/formats.hpp"

namespace footlift::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#0072b2", "#d55e00", "#009e73", "#cc79a7",
                          "#e69f00", "#56b4e9", "#555555", "#f0e442"};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel) {
  if (series.empty()) throw FormatError("nothing to plot");
  constexpr double W = 900, H = 520;
  constexpr double ml = 70, mr = 170, mt = 40, mb = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw FormatError("series length mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin))
    throw FormatError("no finite data to plot");
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    os << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << H - mb + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">" << fmt(fx) << "</text>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py(fy) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">" << fmt(fy) << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">" << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 " << (mt + H - mb) / 2 << ")\">" << ylabel
     << "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = kPalette[ci % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) os << ' ';
      os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = mt + 16.0 * ci;
    os << "<line x1=\"" << W - mr + 12 << "\" y1=\"" << ly << "\" x2=\""
       << W - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - mr + 40 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
       << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

std::string tidy_csv(const std::vector<Series>& series) {
  std::string out = "series,x,y\n";
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", s.name.c_str(),
                    s.x[i], s.y[i]);
      out += buf;
    }
  }
  return out;
}

std::vector<Series> series_from_training_csv(const std::string& text,
                                             const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw FormatError(source_name + ":1: empty file");
  const auto header = split_line(line);
  const std::vector<std::string> wanted = {
      "loss_total", "loss_theta", "loss_j3d", "loss_j2d",
      "loss_v3d",   "loss_v2d",   "train_ajae_deg", "val_ajae_deg"};
  std::vector<int> cols(wanted.size(), -1);
  int epoch_col = -1;
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "epoch") epoch_col = static_cast<int>(c);
    for (size_t w = 0; w < wanted.size(); ++w)
      if (header[c] == wanted[w]) cols[w] = static_cast<int>(c);
  }
  if (epoch_col < 0)
    throw FormatError(source_name + ":1: missing 'epoch' column");

  std::vector<Series> series(wanted.size());
  for (size_t w = 0; w < wanted.size(); ++w) series[w].name = wanted[w];
  int lineno = 1;
  long rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      throw FormatError(source_name + ":" + std::to_string(lineno) +
                        ": wrong field count");
    double epoch = 0;
    try {
      epoch = std::stod(fields[epoch_col]);
    } catch (const std::exception&) {
      throw FormatError(source_name + ":" + std::to_string(lineno) +
                        ": bad epoch value");
    }
    for (size_t w = 0; w < wanted.size(); ++w) {
      if (cols[w] < 0) continue;
      double v = 0;
      try {
        v = std::stod(fields[cols[w]]);
      } catch (const std::exception&) {
        throw FormatError(source_name + ":" + std::to_string(lineno) +
                          ": bad value in column " + wanted[w]);
      }
      if (!std::isfinite(v)) continue;
      series[w].x.push_back(epoch);
      series[w].y.push_back(v);
    }
    ++rows;
  }
  if (rows == 0)
    throw FormatError(source_name + ": no data rows after the header");
  std::vector<Series> out;
  for (auto& s : series)
    if (!s.x.empty()) out.push_back(std::move(s));
  return out;
}

std::vector<Series> series_from_eval_report(const std::string& json_text) {
  const EvalReport report = report_from_json(json_text);
  std::vector<Series> out;
  for (const auto& s : report.sequences) {
    Series tr;
    tr.name = s.name.empty() ? "ajae" : s.name + " ajae";
    for (size_t i = 0; i < s.per_frame_ajae.size(); ++i) {
      tr.x.push_back(static_cast<double>(i));
      tr.y.push_back(s.per_frame_ajae[i]);
    }
    out.push_back(std::move(tr));
  }
  if (out.empty()) throw FormatError("eval report has no sequences");
  return out;
}

}  // namespace footlift::io
