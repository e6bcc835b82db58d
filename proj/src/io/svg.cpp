#include "polydec/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "polydec/errors.hpp"

namespace polydec {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string svg_from_estimate_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  const auto header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("CSV lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cphase = col("phase"), cpart = col("partition"), cp = col("p");
  const std::size_t cx = col("inv_delta"), cy = col("max_ratio");
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < header.size()) throw ParseError("short CSV row");
    const double x = std::stod(f[cx]);
    const double y = std::stod(f[cy]);
    if (!(x > 0.0) || !(y > 0.0)) continue;
    series[f[cphase] + " / " + f[cpart] + " / p=" + f[cp]].emplace_back(x, y);
  }
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (auto& [k, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [x, y] : pts) {
      xlo = std::min(xlo, std::log2(x));
      xhi = std::max(xhi, std::log2(x));
      ylo = std::min(ylo, std::log2(y));
      yhi = std::max(yhi, std::log2(y));
    }
  }
  if (series.empty()) xlo = ylo = 0.0, xhi = yhi = 1.0;
  xlo = std::floor(xlo), xhi = std::ceil(xhi);
  ylo = std::floor(ylo * 4) / 4 - 0.25, yhi = std::ceil(yhi * 4) / 4 + 0.25;
  if (xhi <= xlo) xhi = xlo + 1;

  const double W = 640, H = 420, L = 70, R = 20, T = 30, B = 50;
  auto px = [&](double lx) { return L + (lx - xlo) / (xhi - xlo) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ylo) / (yhi - ylo) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">max ratio vs 1/delta (log-log)</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (double k = xlo; k <= xhi + 1e-9; k += 1) {
    os << "<text x=\"" << num(px(k)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">2^" << num(k) << "</text>\n";
  }
  for (double k = ylo; k <= yhi + 1e-9; k += 0.25) {
    os << "<text x=\"" << L - 6 << "\" y=\"" << num(py(k) + 4) << "\" text-anchor=\"end\">" << num(std::exp2(k))
       << "</text>\n";
  }
  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    const char* c = colors[idx % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (auto [x, y] : pts) os << num(px(std::log2(x))) << ',' << num(py(std::log2(y))) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : pts)
      os << "<circle cx=\"" << num(px(std::log2(x))) << "\" cy=\"" << num(py(std::log2(y))) << "\" r=\"2.5\" fill=\""
         << c << "\"/>\n";
    os << "<text x=\"" << L + 10 << "\" y=\"" << T + 14 * (idx + 1) << "\" fill=\"" << c << "\">" << esc(name)
       << "</text>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace polydec
