#include "fracstab/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fracstab/errors.hpp"

namespace fracstab {
namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg(const EnsembleStats& stats, const DecayFit* fit,
               const std::string& path) {
  if (stats.times.empty() || stats.times.size() != stats.mean_sq.size()) {
    throw DomainError("svg plot needs nonempty, consistent ensemble statistics");
  }
  const double t_max = std::max(stats.times.back(), 1e-12);
  double y_max = 0.0;
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    y_max = std::max(y_max, stats.mean_sq[k] + stats.ci_half_width[k]);
  }
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.05;

  auto sx = [&](double t) { return kLeft + (kWidth - kLeft - kRight) * (t / t_max); };
  auto sy = [&](double y) {
    return kHeight - kBottom - (kHeight - kTop - kBottom) * (y / y_max);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
         fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // confidence band
  std::string band = "<polygon fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    band += fmt(sx(stats.times[k])) + "," +
            fmt(sy(stats.mean_sq[k] + stats.ci_half_width[k])) + " ";
  }
  for (std::size_t k = stats.times.size(); k-- > 0;) {
    band += fmt(sx(stats.times[k])) + "," +
            fmt(sy(std::max(0.0, stats.mean_sq[k] - stats.ci_half_width[k]))) + " ";
  }
  band += "\"/>\n";
  svg += band;

  // mean-square curve
  std::string curve = "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    curve += fmt(sx(stats.times[k])) + "," + fmt(sy(stats.mean_sq[k])) + " ";
  }
  curve += "\"/>\n";
  svg += curve;

  // fitted envelope
  if (fit != nullptr) {
    std::string fitted =
        "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" "
        "stroke-dasharray=\"6,4\" points=\"";
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
      const double y = fit->m_star_hat * std::exp(-fit->mu_hat * stats.times[k]);
      fitted += fmt(sx(stats.times[k])) + "," + fmt(sy(std::min(y, y_max))) + " ";
    }
    fitted += "\"/>\n";
    svg += fitted;
  }

  // axes and ticks
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kHeight - kBottom) +
         "\" x2=\"" + fmt(kWidth - kRight) + "\" y2=\"" + fmt(kHeight - kBottom) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
         fmt(kLeft) + "\" y2=\"" + fmt(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = t_max * i / 5.0;
    const double y = y_max * i / 5.0;
    svg += "<text x=\"" + fmt(sx(t)) + "\" y=\"" + fmt(kHeight - kBottom + 18.0) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 8.0) + "\" y=\"" + fmt(sy(y) + 4.0) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt(y) + "</text>\n";
    svg += "<line x1=\"" + fmt(kLeft - 4.0) + "\" y1=\"" + fmt(sy(y)) + "\" x2=\"" +
           fmt(kLeft) + "\" y2=\"" + fmt(sy(y)) + "\" stroke=\"black\"/>\n";
  }
  svg += "<text x=\"" + fmt((kLeft + kWidth - kRight) / 2.0) + "\" y=\"" +
         fmt(kHeight - 10.0) + "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt((kTop + kHeight - kBottom) / 2.0) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt((kTop + kHeight - kBottom) / 2.0) +
         ")\">mean squared norm</text>\n";
  if (fit != nullptr) {
    svg += "<text x=\"" + fmt(kWidth - kRight - 8.0) + "\" y=\"" + fmt(kTop + 16.0) +
           "\" font-size=\"12\" text-anchor=\"end\">fit: " + fmt(fit->m_star_hat) +
           " exp(-" + fmt(fit->mu_hat) + " t)</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << svg;
  if (!out) throw Error("failed writing output file '" + path + "'");
}

}  // namespace fracstab
