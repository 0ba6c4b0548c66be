#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdstab/io.hpp"
#include "fdstab/svg.hpp"

using namespace fdstab;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  const fs::path d = fs::temp_directory_path() / "fdstab_io_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("builtin example carries the exact worked constants") {
  const Scheme s = builtin_lf_example();
  const double ks = -5.0 + 2.0 * std::sqrt(5.0);
  CHECK(std::abs(stable_quadratic_root(s, Complex(-1.0)).real() - ks) < 1e-12);
  CHECK(std::abs(s.b[0][0] - (-1.0 - 2.0 * std::sqrt(5.0) / 5.0)) < 1e-12);
  CHECK(std::abs(s.b[0][0] - (-1.8944271909999159)) < 1e-10);
  REQUIRE(s.declared_mu.has_value());
  CHECK(*s.declared_mu == 1);
}

TEST_CASE("scheme config round-trips exactly") {
  const fs::path path = tmpdir() / "lf.cfg";
  const Scheme s = builtin_lf_example();
  write_scheme_config(path, s);
  const Scheme t = read_scheme_config(path);
  CHECK(t.r == s.r);
  CHECK(t.p == s.p);
  CHECK(t.p_b == s.p_b);
  CHECK(t.lambda_a == s.lambda_a);  // %.17g survives the round trip bit-exactly
  for (size_t i = 0; i < s.a.size(); ++i) CHECK(t.a[i] == s.a[i]);
  CHECK(t.b[0][0] == s.b[0][0]);
  CHECK(t.declared_mu == s.declared_mu);
}

TEST_CASE("two-ghost config round-trips") {
  const fs::path path = tmpdir() / "cubic.cfg";
  const Scheme s = cubic_interpolation(0.5, 0.25);
  write_scheme_config(path, s);
  const Scheme t = read_scheme_config(path);
  REQUIRE(t.b.size() == 2);
  CHECK(t.b[0][0] == s.b[0][0]);
  CHECK(t.b[1][0] == s.b[1][0]);
}

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS((void)read_scheme_config(tmpdir() / "missing.cfg"), NumericalError);
  const fs::path bad = tmpdir() / "bad.cfg";
  std::ofstream(bad) << "r 1\nnonsense 3\n";
  CHECK_THROWS_AS((void)read_scheme_config(bad), NumericalError);
  const fs::path incomplete = tmpdir() / "incomplete.cfg";
  std::ofstream(incomplete) << "r 1\np 1\n";
  CHECK_THROWS_AS((void)read_scheme_config(incomplete), NumericalError);
}

TEST_CASE("CSV emitters are byte-stable across runs") {
  const Scheme s = builtin_lf_example();
  const fs::path a = tmpdir() / "spec_a.csv";
  const fs::path b = tmpdir() / "spec_b.csv";
  write_spectrum_csv(a, s, 512);
  write_spectrum_csv(b, s, 512);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("theta,re,im,modulus", 0) == 0);

  const auto probe = power_norm_probe(s, 50, 16, 4, 1234u);
  const fs::path pa = tmpdir() / "probe_a.csv";
  const fs::path pb = tmpdir() / "probe_b.csv";
  write_probe_csv(pa, probe);
  write_probe_csv(pb, power_norm_probe(s, 50, 16, 4, 1234u));
  CHECK(slurp(pa) == slurp(pb));
}

TEST_CASE("row counts match the requested windows") {
  const Scheme s = builtin_lf_example();
  const fs::path p = tmpdir() / "field.csv";
  write_spatial_csv(p, spatial_green_structured(s, Complex(1.5, 0.0), 10, 200));
  std::istringstream ss(slurp(p));
  std::string line;
  int rows = -1;  // header
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 200 + s.r);
}

TEST_CASE("SVG figures are written and well-formed enough") {
  const Scheme s = builtin_lf_example();
  const auto roots = find_roots(s);
  const fs::path spectrum = tmpdir() / "spectrum.svg";
  write_spectrum_svg(spectrum, s, roots);
  const std::string svg = slurp(spectrum);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  const auto snaps = temporal_green_snapshots(s, 3, {20, 50}, 80);
  const fs::path temporal = tmpdir() / "temporal.svg";
  write_temporal_svg(temporal, snaps, nullptr, nullptr);
  CHECK(slurp(temporal).find("</svg>") != std::string::npos);
}

TEST_CASE("eigencloud and determinant-profile CSVs") {
  const Scheme s = builtin_lf_example();
  const fs::path cloud = tmpdir() / "cloud.csv";
  write_eigencloud_csv(cloud, s, 64, {1.0, 1.2});
  const std::string text = slurp(cloud);
  CHECK(text.find("stable") != std::string::npos);
  CHECK(text.find("unstable") != std::string::npos);

  const fs::path prof = tmpdir() / "lopatinskii.csv";
  write_lopatinskii_csv(prof, s, 256);
  CHECK(slurp(prof).rfind("theta,abs_delta", 0) == 0);
}
