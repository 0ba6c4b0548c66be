#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fdstab/asymptotics.hpp"

namespace fdstab {

/// Minimal dependency-free SVG line plot.
class SvgPlot {
 public:
  SvgPlot(double x_min, double x_max, double y_min, double y_max, std::string title = {});
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double width = 1.0, const std::string& dash = {});
  void marker(double x, double y, const std::string& color, double size = 4.0);
  void label(double x, double y, const std::string& text, const std::string& color = "#333");
  void write(const std::filesystem::path& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double x_min_, x_max_, y_min_, y_max_;
  std::string title_;
  std::vector<std::string> body_;
};

/// Unit circle, symbol curve, and determinant-root markers.
void write_spectrum_svg(const std::filesystem::path& path, const Scheme& s,
                        const std::vector<LopatinskiiRoot>& roots, int n_theta = 1024);

/// Kernel snapshots with the fitted bulk envelope and, near the boundary, the
/// geometric surface-wave envelope.
void write_temporal_svg(const std::filesystem::path& path,
                        const std::vector<TemporalGreenField>& snaps,
                        const GaussianCertificate* cert, const SurfaceWaveProfile* surface);

}  // namespace fdstab
