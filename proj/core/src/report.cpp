#include "plate/report.hpp"

#include "plate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace plate {

void write_study_csv(std::ostream& os, const StudyRecord& s) {
  os << "level,ndof,hmax,err_energy,estA,estB,est_theorem,osc,apx,eff_index\n" << std::setprecision(17);
  for (const auto& l : s.levels) {
    const double err = l.error(s.scheme);
    os << l.level << ',' << l.ndof << ',' << l.hmax << ',';
    if (err >= 0.0)
      os << err;
    else
      os << "nan";
    os << ',' << l.est_a << ',' << l.est_b << ',' << l.est_theorem << ',' << l.osc << ',' << l.apx << ',';
    if (err > 0.0)
      os << l.est_theorem / err;
    else
      os << "nan";
    os << '\n';
  }
}

StudyRecord read_study_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "level,ndof,hmax,err_energy,estA,estB,est_theorem,osc,apx,eff_index")
    throw Error("study csv: unexpected header");
  StudyRecord s;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 10) throw Error("study csv: row " + std::to_string(row) + " has " + std::to_string(f.size()) + " fields");
    auto num = [&](const std::string& t) {
      if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
      try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
      } catch (const std::exception&) {
        throw Error("study csv: row " + std::to_string(row) + ": bad number '" + t + "'");
      }
    };
    LevelRecord l;
    l.level = static_cast<int>(num(f[0]));
    l.ndof = static_cast<int>(num(f[1]));
    l.hmax = num(f[2]);
    const double err = num(f[3]);
    l.err_pw = l.err_h = std::isnan(err) ? -1.0 : err;
    l.est_a = num(f[4]);
    l.est_b = num(f[5]);
    l.est_theorem = num(f[6]);
    l.osc = num(f[7]);
    l.apx = num(f[8]);
    s.levels.push_back(l);
  }
  return s;
}

std::vector<PlotSeries> study_series(const StudyRecord& s) {
  PlotSeries err{"error", {}, {}}, est{"estimator", {}, {}};
  for (const auto& l : s.levels) {
    const double e = l.error(s.scheme);
    if (e > 0.0) {
      err.x.push_back(l.ndof);
      err.y.push_back(e);
    }
    if (l.est_theorem > 0.0) {
      est.x.push_back(l.ndof);
      est.y.push_back(l.est_theorem);
    }
  }
  std::vector<PlotSeries> out;
  if (!err.x.empty()) out.push_back(err);
  if (!est.x.empty()) out.push_back(est);
  return out;
}

void write_svg(std::ostream& os, const std::vector<PlotSeries>& series, const std::string& title) {
  constexpr double W = 800, H = 600, L = 80, R = 160, T = 50, B = 60;
  double x0 = std::numeric_limits<double>::max(), x1 = 0, y0 = std::numeric_limits<double>::max(), y1 = 0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x1 <= 0) x0 = 1, x1 = 10, y0 = 1, y1 = 10;
  const double lx0 = std::floor(std::log10(x0)), lx1 = std::max(lx0 + 1, std::ceil(std::log10(x1)));
  const double ly0 = std::floor(std::log10(y0)), ly1 = std::max(ly0 + 1, std::ceil(std::log10(y1)));
  auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };

  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  for (double d = lx0; d <= lx1; d += 1) {
    const double x = px(std::pow(10.0, d));
    os << "<line x1=\"" << x << "\" y1=\"" << T << "\" x2=\"" << x << "\" y2=\"" << H - B
       << "\" stroke=\"#ccc\"/>\n<text x=\"" << x << "\" y=\"" << H - B + 20
       << "\" text-anchor=\"middle\" font-size=\"12\">1e" << d << "</text>\n";
  }
  for (double d = ly0; d <= ly1; d += 1) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
       << "\" stroke=\"#ccc\"/>\n<text x=\"" << L - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"12\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">ndof</text>\n";

  // Reference slopes through the upper left corner of the data box.
  const char* dash[] = {"6,4", "2,3"};
  const double rates[] = {0.5, 1.0};
  for (int k = 0; k < 2; ++k) {
    const double xa = std::pow(10.0, lx0), xb = std::pow(10.0, lx1);
    const double ya = std::pow(10.0, ly1);
    const double yb = ya * std::pow(xb / xa, -rates[k]);
    os << "<polyline fill=\"none\" stroke=\"#888\" stroke-dasharray=\"" << dash[k] << "\" points=\"" << px(xa) << ','
       << py(ya) << ' ' << px(xb) << ',' << py(std::max(yb, std::pow(10.0, ly0))) << "\"/>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 20 + 18 * (series.size() + k)
       << "\" font-size=\"12\">slope -" << rates[k] << "</text>\n";
  }
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (series[s].x[i] > 0 && series[s].y[i] > 0) os << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
    os << "\"/>\n<text x=\"" << W - R + 10 << "\" y=\"" << T + 20 + 18 * s << "\" fill=\"" << c
       << "\" font-size=\"12\">" << series[s].name << "</text>\n";
  }
  os << "</svg>\n";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace plate
