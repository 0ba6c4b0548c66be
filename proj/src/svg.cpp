#include "fdstab/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fdstab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kW = 640, kH = 480, kMargin = 48;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, std::string title)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), title_(std::move(title)) {}

double SvgPlot::px(double x) const {
  return kMargin + (x - x_min_) / (x_max_ - x_min_) * (kW - 2 * kMargin);
}

double SvgPlot::py(double y) const {
  return kH - kMargin - (y - y_min_) / (y_max_ - y_min_) * (kH - 2 * kMargin);
}

void SvgPlot::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& color, double width, const std::string& dash) {
  std::string pts;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    pts += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
  }
  std::string extra = dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"";
  body_.push_back("<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                  fmt(width) + "\"" + extra + " points=\"" + pts + "\"/>");
}

void SvgPlot::marker(double x, double y, const std::string& color, double size) {
  const double cx = px(x), cy = py(y);
  body_.push_back("<path d=\"M" + fmt(cx - size) + " " + fmt(cy - size) + " L" + fmt(cx + size) +
                  " " + fmt(cy + size) + " M" + fmt(cx - size) + " " + fmt(cy + size) + " L" +
                  fmt(cx + size) + " " + fmt(cy - size) + "\" stroke=\"" + color +
                  "\" stroke-width=\"1.5\"/>");
}

void SvgPlot::label(double x, double y, const std::string& text, const std::string& color) {
  body_.push_back("<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) +
                  "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"" + color + "\">" +
                  text + "</text>");
}

void SvgPlot::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open " + path.string() + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin
      << "\" height=\"" << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (!title_.empty())
    out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\" "
        << "font-family=\"sans-serif\">" << title_ << "</text>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" font-family=\"sans-serif\">%s</text>",
                kMargin - 30.0, kH - kMargin + 16.0, fmt(x_min_).c_str());
  out << buf << "\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" font-family=\"sans-serif\">%s</text>",
                kW - kMargin - 10.0, kH - kMargin + 16.0, fmt(x_max_).c_str());
  out << buf << "\n";
  for (const auto& b : body_) out << b << "\n";
  out << "</svg>\n";
}

void write_spectrum_svg(const std::filesystem::path& path, const Scheme& s,
                        const std::vector<LopatinskiiRoot>& roots, int n_theta) {
  SvgPlot plot(-1.3, 1.3, -1.3, 1.3, "spectrum: symbol curve, unit circle, eigenvalues");
  std::vector<double> cx, cy, fx, fy;
  for (int i = 0; i <= n_theta; ++i) {
    const double th = -kPi + 2.0 * kPi * i / n_theta;
    cx.push_back(std::cos(th));
    cy.push_back(std::sin(th));
    const Complex F = symbol(s, th);
    fx.push_back(F.real());
    fy.push_back(F.imag());
  }
  plot.polyline(cx, cy, "#bbb", 1.0, "4,3");
  plot.polyline(fx, fy, "#1f77b4", 1.6);
  for (const auto& rt : roots) {
    plot.marker(rt.z.real(), rt.z.imag(), "#d62728", 6.0);
    plot.label(rt.z.real() + 0.05, rt.z.imag() + 0.05, "eigenvalue");
  }
  plot.write(path);
}

void write_temporal_svg(const std::filesystem::path& path,
                        const std::vector<TemporalGreenField>& snaps,
                        const GaussianCertificate* cert, const SurfaceWaveProfile* surface) {
  if (snaps.empty()) throw NumericalError("temporal plot: no snapshots");
  double ymax = 0.0;
  int jmax = 0;
  for (const auto& f : snaps) {
    for (int j = 1; j <= f.J; ++j) ymax = std::max(ymax, std::abs(f.at(j)));
    jmax = std::max(jmax, std::min(f.J, f.j0 + f.r * f.n + 10));
  }
  SvgPlot plot(0, jmax, -1.1 * ymax, 1.1 * ymax, "temporal kernel snapshots");
  const std::vector<std::string> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};
  for (size_t k = 0; k < snaps.size(); ++k) {
    const auto& f = snaps[k];
    std::vector<double> xs, ys;
    for (int j = 1; j <= jmax && j <= f.J; ++j) {
      xs.push_back(j);
      ys.push_back(f.at(j).real());
    }
    plot.polyline(xs, ys, colors[k % colors.size()], 1.2);
    plot.label(jmax * 0.75, ymax * (1.0 - 0.12 * double(k + 1)), "n=" + std::to_string(f.n),
               colors[k % colors.size()]);
  }
  if (cert) {
    const auto& f = snaps.back();
    const double q = 2.0 * cert->mu / (2.0 * cert->mu - 1.0);
    const double scale = std::pow(double(f.n), 1.0 / (2.0 * cert->mu));
    std::vector<double> xs, ys;
    for (int j = 1; j <= jmax; ++j) {
      const double x = std::abs(j - f.j0 - cert->alpha * f.n) / scale;
      xs.push_back(j);
      ys.push_back(cert->C / scale * std::exp(-cert->omega * std::pow(x, q)));
    }
    plot.polyline(xs, ys, "#000", 1.0, "5,3");
    plot.label(jmax * 0.75, ymax * 0.95, "fitted envelope", "#000");
  }
  if (surface) {
    std::vector<double> xs, yu, yl;
    for (int j = 1; j <= std::min(40, surface->J); ++j) {
      xs.push_back(j);
      yu.push_back(std::abs(surface->at(j)));
      yl.push_back(-std::abs(surface->at(j)));
    }
    plot.polyline(xs, yu, "#d62728", 1.0, "2,2");
    plot.polyline(xs, yl, "#d62728", 1.0, "2,2");
    plot.label(2, ymax * 0.9, "surface-wave envelope", "#d62728");
  }
  plot.write(path);
}

}  // namespace fdstab
