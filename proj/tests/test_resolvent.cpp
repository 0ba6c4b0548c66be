#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fdstab/evolution.hpp"
#include "fdstab/io.hpp"
#include "fdstab/resolvent.hpp"

using namespace fdstab;

namespace {

double row_residual(const Scheme& s, const SpatialGreenField& f) {
  // (zI - T) G = delta_{j0} on the interior rows, away from the right edge.
  double res = 0.0;
  for (int j = 1; j <= f.J - s.p; ++j) {
    Complex acc = f.z * f.at(j);
    for (int l = -s.r; l <= s.p; ++l) acc -= s.coeff(l) * f.at(j + l);
    acc -= (j == f.j0) ? 1.0 : 0.0;
    res = std::max(res, std::abs(acc));
  }
  return res;
}

double boundary_residual(const Scheme& s, const SpatialGreenField& f) {
  double res = 0.0;
  for (int nu = 1 - s.r; nu <= 0; ++nu) {
    Complex acc = -f.at(nu);
    for (int l = 1; l <= s.p_b; ++l) acc += s.bc(l, nu) * f.at(l);
    res = std::max(res, std::abs(acc));
  }
  return res;
}

double max_diff(const SpatialGreenField& a, const SpatialGreenField& b, int j_hi) {
  double d = 0.0;
  for (int j = 1; j <= j_hi; ++j) d = std::max(d, std::abs(a.at(j) - b.at(j)));
  return d;
}

}  // namespace

TEST_CASE("direct solve satisfies the defining equation and membership") {
  const Scheme s = builtin_lf_example();
  const SpatialGreenField f = spatial_green_direct(s, Complex(1.5, 0.0), 10, 400);
  CHECK(row_residual(s, f) < 1e-9);
  CHECK(boundary_residual(s, f) < 1e-10);
  CHECK(f.edge_magnitude(s.p) < 1e-12);
}

TEST_CASE("direct and structured constructions agree to 1e-10") {
  const Scheme s = builtin_lf_example();
  std::mt19937_64 rng(99);
  std::vector<Complex> zs = {Complex(1.5, 0.0), Complex(0.3, 1.45), Complex(-1.2, 0.9),
                             Complex(1.03, 0.02)};
  for (int t = 0; t < 16; ++t) {
    const double rho = 1.1 + 1.5 * ((rng() >> 11) * 0x1.0p-53);
    const double th = 2.0 * M_PI * ((rng() >> 11) * 0x1.0p-53);
    zs.push_back(rho * Complex(std::cos(th), std::sin(th)));
  }
  for (const Complex& z : zs) {
    const SpatialGreenField d = spatial_green_direct(s, z, 10, 400);
    const SpatialGreenField g = spatial_green_structured(s, z, 10, 400);
    INFO("z = (", z.real(), ", ", z.imag(), ")");
    CHECK(max_diff(d, g, 100) < 1e-10);
    CHECK(row_residual(s, g) < 1e-9);
    CHECK(boundary_residual(s, g) < 1e-10);
  }
}

TEST_CASE("structured construction matches for the two-ghost scheme") {
  const Scheme s = cubic_interpolation(0.5, 0.2);
  for (const Complex& z : {Complex(1.4, 0.0), Complex(-0.4, 1.2), Complex(1.02, 0.05)}) {
    const SpatialGreenField d = spatial_green_direct(s, z, 8, 400);
    const SpatialGreenField g = spatial_green_structured(s, z, 8, 400);
    CHECK(max_diff(d, g, 100) < 1e-10);
    CHECK(boundary_residual(s, g) < 1e-10);
  }
}

TEST_CASE("Neumann-series oracle at large |z|") {
  const Scheme s = builtin_lf_example();
  const Complex z(2.5, 0.0);  // |z| > sum |a_ell| = 1
  const int j0 = 10, J = 400;
  GridState st = delta_state(s, j0, J);
  std::vector<Complex> series(static_cast<size_t>(J + s.r), Complex(0.0));
  Complex zpow = 1.0 / z;
  for (int n = 0; n < 140; ++n) {
    for (int j = 1 - s.r; j <= J; ++j) series[static_cast<size_t>(j - (1 - s.r))] += zpow * st.at(j);
    st = step(s, st);
    zpow /= z;
  }
  const SpatialGreenField d = spatial_green_direct(s, z, j0, J);
  double diff = 0.0;
  for (int j = 1; j <= 100; ++j)
    diff = std::max(diff, std::abs(series[static_cast<size_t>(j - (1 - s.r))] - d.at(j)));
  CHECK(diff < 1e-8);
}

TEST_CASE("solving at the eigenvalue is refused") {
  const Scheme s = builtin_lf_example();
  CHECK_THROWS_AS((void)spatial_green_direct(s, Complex(-1.0, 0.0), 10, 400), NumericalError);
  CHECK_THROWS_AS((void)spatial_green_structured(s, Complex(-1.0, 0.0), 10, 400),
                  std::runtime_error);
}

TEST_CASE("decay certificates") {
  const Scheme s = builtin_lf_example();
  const DecayCertificate away = fit_decay(spatial_green_structured(s, Complex(1.5, 0.0), 10, 400));
  CHECK(away.c > 0.0);
  CHECK(away.sup_ratio <= 1.0 + 1e-9);

  // near 1 the right-side rate tracks -log |kappa(z)|
  for (const Complex z : {Complex(1.03, 0.0), Complex(1.0, 0.04), Complex(1.02, -0.02)}) {
    const SpatialGreenField f = spatial_green_structured(s, z, 10, 500);
    std::vector<double> xs, ys;
    for (int j = f.j0; j <= 300; ++j) {
      xs.push_back(j - f.j0);
      ys.push_back(std::log(std::abs(f.at(j))));
    }
    const double rate = -fdstab::detail::fit_line(xs, ys).slope;
    const double kappa_rate = -std::log(std::abs(kappa_branch(s, z)));
    CHECK(std::abs(rate - kappa_rate) < 0.05 * kappa_rate);
    // left side keeps a z-independent positive rate
    xs.clear();
    ys.clear();
    for (int j = 1; j <= f.j0; ++j) {
      xs.push_back(f.j0 - j);
      ys.push_back(std::log(std::abs(f.at(j))));
    }
    CHECK(-fdstab::detail::fit_line(xs, ys).slope > 0.3);
  }
}

TEST_CASE("certificate prefactor blows up like 1/|z - z_k| near the eigenvalue") {
  // j0 = 2 keeps the residue term visible; at these radii the pole dominates.
  const Scheme s = builtin_lf_example();
  std::vector<double> lr, lC;
  for (double radius : {1e-3, 1e-4, 1e-5}) {
    const Complex z = Complex(-1.0, 0.0) + Complex(radius, 0.0);
    const DecayCertificate cert = fit_decay(spatial_green_structured(s, z, 2, 400));
    lr.push_back(std::log(radius));
    lC.push_back(std::log(cert.C));
  }
  const double slope = fdstab::detail::fit_line(lr, lC).slope;
  CHECK(std::abs(slope + 1.0) < 0.15);
}

TEST_CASE("pole simplicity: |G| |z - z_k| stays bounded on a radius sweep") {
  const Scheme s = builtin_lf_example();
  const auto roots = find_roots(s);
  REQUIRE(roots.size() == 1);
  const Complex zk = roots[0].z;
  std::vector<double> scaled;
  for (double radius : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const Complex z = zk + radius * Complex(std::cos(0.7), std::sin(0.7));
    const SpatialGreenField f = spatial_green_structured(s, z, 3, 300);
    double sup = 0.0;
    for (int j = 1; j <= 60; ++j) sup = std::max(sup, std::abs(f.at(j)));
    scaled.push_back(sup * radius);
  }
  for (double v : scaled) CHECK(v < 1.0);  // bounded, never blows up
  // in the pole-dominated regime the product converges to the residue scale
  CHECK(scaled[3] / scaled[2] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("residue profile: dual-method agreement and geometric structure") {
  const Scheme s = builtin_lf_example();
  const auto roots = find_roots(s);
  REQUIRE(roots.size() == 1);
  const SurfaceWaveProfile prof = residue_at_root(s, roots[0], 3, 400);
  CHECK(prof.method_diff < 1e-8);
  CHECK(prof.decay_c > 0.0);

  // w(j, 3) = c3 kappa_s^{j-1}: consecutive ratios equal the stable eigenvalue
  const Complex ks = stable_quadratic_root(s, roots[0].z);
  for (int j = 1; j <= 30; ++j)
    CHECK(std::abs(prof.at(j + 1) / prof.at(j) - ks) < 1e-9);
  CHECK(std::abs(prof.at(1)) > 1e-6);

  // one evolution step multiplies the profile by z_k = -1
  std::vector<Complex> interior(prof.values.begin() + s.r, prof.values.end());
  interior.resize(interior.size() + 8, Complex(0.0));  // room for the support to move
  GridState st = state_from_interior(s, interior);
  const GridState next = step(s, st);
  double resid = 0.0;
  for (int j = 1; j <= 200; ++j)
    resid = std::max(resid, std::abs(next.at(j) - roots[0].z * st.at(j)));
  CHECK(resid < 1e-8);

  // source decay: |w(1, j0)| shrinks with rate 1/|kappa_u|
  const SurfaceWaveProfile p4 = residue_at_root(s, roots[0], 4, 400);
  const SurfaceWaveProfile p5 = residue_at_root(s, roots[0], 5, 400);
  const double ku = std::abs(Complex(-5.0 - 2.0 * std::sqrt(5.0)));
  CHECK(std::abs(std::abs(p4.at(1) / prof.at(1)) - 1.0 / ku) < 1e-3);
  CHECK(std::abs(std::abs(p5.at(1) / p4.at(1)) - 1.0 / ku) < 1e-3);
}

TEST_CASE("remainder after pole subtraction is bounded and decays") {
  const Scheme s = builtin_lf_example();
  const auto roots = find_roots(s);
  const SurfaceWaveProfile prof = residue_at_root(s, roots[0], 3, 300);

  const DecayCertificate cert = remainder_bound_check(s, roots[0], prof, 3, 1e-2, 16);
  CHECK(cert.c > 0.0);
  CHECK(cert.sup_ratio <= 1.0 + 1e-9);

  // bounded as z -> z_k along shrinking radii (pole removed)
  const DecayCertificate c3 = remainder_bound_check(s, roots[0], prof, 3, 1e-3, 8);
  const DecayCertificate c4 = remainder_bound_check(s, roots[0], prof, 3, 1e-4, 8);
  CHECK(c3.C < 10.0 * cert.C + 10.0);
  CHECK(c4.C / c3.C < 2.0);  // no hidden pole left

  // a deliberately wrong residue leaves the pole uncancelled: C ~ 1/radius
  SurfaceWaveProfile wrong = prof;
  for (auto& v : wrong.values) v *= 1.1;
  const DecayCertificate bad3 = remainder_bound_check(s, roots[0], wrong, 3, 1e-3, 8);
  const DecayCertificate bad4 = remainder_bound_check(s, roots[0], wrong, 3, 1e-4, 8);
  CHECK(bad4.C / bad3.C > 5.0);
}
