#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fdstab/io.hpp"
#include "fdstab/spectral.hpp"

using namespace fdstab;

namespace {

// Quadratic-formula oracle for three-point schemes: roots of
// a1 k^2 + (a0 - z) k + a_{-1} = 0.
std::pair<Complex, Complex> quadratic_roots(const Scheme& s, Complex z) {
  const Complex a1 = s.coeff(1), a0 = s.coeff(0), am1 = s.coeff(-1);
  const Complex disc = std::sqrt((a0 - z) * (a0 - z) - 4.0 * a1 * am1);
  const Complex k1 = (-(a0 - z) + disc) / (2.0 * a1);
  const Complex k2 = (-(a0 - z) - disc) / (2.0 * a1);
  return std::abs(k1) < std::abs(k2) ? std::make_pair(k1, k2) : std::make_pair(k2, k1);
}

Complex symbol_at_kappa(const Scheme& s, Complex k) {
  Complex acc = 0.0;
  for (int l = -s.r; l <= s.p; ++l) acc += s.coeff(l) * std::pow(k, l);
  return acc;
}

}  // namespace

TEST_CASE("companion matrix entries and eigenvalues at z = 1 (LF)") {
  const Scheme s = builtin_lf_example();
  const Eigen::MatrixXcd M = companion(s, 1.0);
  REQUIRE(M.rows() == 2);
  CHECK(std::abs(M(0, 0) - Complex(6.0)) < 1e-13);
  CHECK(std::abs(M(0, 1) - Complex(-5.0)) < 1e-13);
  CHECK(std::abs(M(1, 0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(M(1, 1)) < 1e-15);

  const SpectralSplit sp = split(s, 1.0);
  REQUIRE(sp.central.size() == 1);
  REQUIRE(sp.unstable.size() == 1);
  CHECK(sp.stable.empty());  // r - 1 = 0
  CHECK(std::abs(sp.central[0] - Complex(1.0)) < 1e-9);
  CHECK(std::abs(sp.unstable[0] - Complex(5.0)) < 1e-9);
}

TEST_CASE("companion matrix is invertible for arbitrary z") {
  const Scheme s = builtin_lf_example();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Complex z(std::uniform_real_distribution<>(-2, 2)(rng),
                    std::uniform_real_distribution<>(-2, 2)(rng));
    CHECK(std::abs(companion(s, z).determinant()) > 1e-12);
  }
}

TEST_CASE("spectral splitting at z = -1 and z = 1.5 against the quadratic oracle") {
  const Scheme s = builtin_lf_example();
  const double k_s = -5.0 + 2.0 * std::sqrt(5.0);
  const double k_u = -5.0 - 2.0 * std::sqrt(5.0);

  const SpectralSplit sm = split(s, -1.0);
  REQUIRE(sm.clean(1, 1));
  CHECK(std::abs(sm.stable[0] - Complex(k_s)) < 1e-10);
  CHECK(std::abs(sm.unstable[0] - Complex(k_u)) < 1e-9);
  CHECK(std::abs(std::abs(sm.stable[0]) - 0.5278640450004204) < 1e-10);
  CHECK(std::abs(std::abs(sm.unstable[0]) - 9.47213595499958) < 1e-9);

  const SpectralSplit sp = split(s, 1.5);
  REQUIRE(sp.clean(1, 1));
  const auto [os, ou] = quadratic_roots(s, 1.5);
  CHECK(std::abs(sp.stable[0] - os) < 1e-10);
  CHECK(std::abs(sp.unstable[0] - ou) < 1e-9);
}

TEST_CASE("200 pseudo-random z in the annulus (1, 3]: counts and residuals") {
  std::mt19937_64 rng(20240811);
  for (const Scheme& s : {builtin_lf_example(), lax_wendroff(0.5)}) {
    for (int t = 0; t < 200; ++t) {
      const double rho = 1.0 + 2.0 * ((rng() >> 11) * 0x1.0p-53);
      const double th = 2.0 * M_PI * ((rng() >> 11) * 0x1.0p-53);
      const Complex z = rho * Complex(std::cos(th), std::sin(th));
      const SpectralSplit sp = split(s, z);
      REQUIRE(sp.clean(s.r, s.p));
      for (const Complex& k : sp.stable)
        CHECK(std::abs(z - symbol_at_kappa(s, k)) < 1e-9 * (1.0 + std::abs(z)));
      for (const Complex& k : sp.unstable)
        CHECK(std::abs(z - symbol_at_kappa(s, k)) < 1e-9 * (1.0 + std::abs(z)));
    }
  }
}

TEST_CASE("kappa branch near 1") {
  const Scheme s = builtin_lf_example();
  CHECK(std::abs(kappa_branch(s, 1.0) - Complex(1.0)) < 1e-12);

  // derivative -1/(la a) = -2
  const double h = 1e-6;
  const Complex slope = (kappa_branch(s, 1.0 + h) - 1.0) / h;
  CHECK(std::abs(slope - Complex(-2.0)) < 1e-4);

  CHECK(std::abs(kappa_branch(s, 1.01) - Complex(1.0 - 0.02)) < 1e-3);

  // consistency with the stable eigenvalue reported by split outside C
  for (const Complex z : {Complex(1.05, 0.0), Complex(1.0, 0.05), Complex(1.02, -0.03)}) {
    const SpectralSplit sp = split(s, z);
    REQUIRE(sp.clean(1, 1));
    CHECK(std::abs(kappa_branch(s, z) - sp.stable[0]) < 1e-10);
  }
}

TEST_CASE("stable basis: Vandermonde columns, invariance, extension at 1") {
  const Scheme s = builtin_lf_example();
  const double k_s = -5.0 + 2.0 * std::sqrt(5.0);

  const StableBasis at_m1 = stable_basis(s, -1.0);
  REQUIRE(at_m1.columns.cols() == 1);
  CHECK(std::abs(at_m1.columns(0, 0) - Complex(k_s)) < 1e-10);
  CHECK(std::abs(at_m1.columns(1, 0) - Complex(1.0)) < 1e-14);

  const StableBasis at_1 = stable_basis(s, 1.0);
  CHECK(at_1.includes_kappa_branch);
  CHECK(std::abs(at_1.columns(0, 0) - Complex(1.0)) < 1e-9);
  CHECK(std::abs(at_1.columns(1, 0) - Complex(1.0)) < 1e-14);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const double rho = 1.05 + ((rng() >> 11) * 0x1.0p-53);
    const double th = 2.0 * M_PI * ((rng() >> 11) * 0x1.0p-53);
    const Complex z = rho * Complex(std::cos(th), std::sin(th));
    const StableBasis sb = stable_basis(s, z);
    const Eigen::MatrixXcd M = companion(s, z);
    // invariance residual ||(I - V V^+) M V||
    const Eigen::MatrixXcd V = sb.columns;
    const Eigen::MatrixXcd P = V * (V.adjoint() * V).inverse() * V.adjoint();
    const double resid = ((Eigen::MatrixXcd::Identity(2, 2) - P) * (M * V)).norm();
    CHECK(resid < 1e-10);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    CHECK(svd.singularValues()(svd.singularValues().size() - 1) > 1e-10);
  }
}

TEST_CASE("stable basis for a two-ghost scheme stays invariant") {
  const Scheme s = cubic_interpolation(0.5);
  for (const Complex z : {Complex(1.4, 0.2), Complex(-1.1, 0.4), Complex(0.2, 1.2)}) {
    const StableBasis sb = stable_basis(s, z);
    REQUIRE(sb.columns.cols() == 2);
    const Eigen::MatrixXcd M = companion(s, z);
    const Eigen::MatrixXcd V = sb.columns;
    const Eigen::MatrixXcd P = V * (V.adjoint() * V).inverse() * V.adjoint();
    const double resid = ((Eigen::MatrixXcd::Identity(3, 3) - P) * (M * V)).norm();
    CHECK(resid < 1e-9);
  }
}

TEST_CASE("boundary matrix layout and rank") {
  const Scheme lf = builtin_lf_example();
  const Eigen::MatrixXd B = boundary_matrix(lf);
  REQUIRE(B.rows() == 1);
  REQUIRE(B.cols() == 2);
  CHECK(B(0, 0) == doctest::Approx(-lf.b[0][0]));
  CHECK(B(0, 1) == doctest::Approx(1.0));

  const Eigen::MatrixXd Bd = boundary_matrix(lax_wendroff(0.5, 0.0));
  CHECK(Bd(0, 0) == doctest::Approx(0.0));
  CHECK(Bd(0, 1) == doctest::Approx(1.0));

  const Eigen::MatrixXd B2 = boundary_matrix(cubic_interpolation(0.5, 0.3));
  REQUIRE(B2.rows() == 2);
  REQUIRE(B2.cols() == 3);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B2);
  CHECK(svd.singularValues()(1) > 0.5);  // rank r
  CHECK(B2(0, 0) == doctest::Approx(-0.3));
  CHECK(B2(0, 1) == doctest::Approx(1.0));
  CHECK(B2(1, 0) == doctest::Approx(-0.3));
  CHECK(B2(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("determinant values for the worked example") {
  const Scheme s = builtin_lf_example();
  CHECK(std::abs(lopatinskii(s, Complex(-1.0, 0.0))) < 1e-10);
  const double expected = 1.0 - 1.0 / (-5.0 + 2.0 * std::sqrt(5.0));
  CHECK(std::abs(lopatinskii(s, Complex(1.0, 0.0)) - Complex(expected)) < 1e-9);

  const Scheme dirichlet = modified_lax_friedrichs(0.5, 0.75, 0.0);
  for (double th : {0.5, 1.5, 3.0})
    CHECK(std::abs(lopatinskii(dirichlet, Complex(std::cos(th), std::sin(th))) - Complex(1.0)) <
          1e-12);
}

TEST_CASE("root finding on the worked example") {
  const Scheme s = builtin_lf_example();
  const auto roots = find_roots(s);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0].z + Complex(1.0)) < 1e-8);
  CHECK(std::abs(std::abs(roots[0].z) - 1.0) < 1e-10);
  CHECK(roots[0].delta_abs < 1e-8);
  CHECK(roots[0].simple);

  // each root yields a nontrivial kernel of B restricted to the stable basis
  const Eigen::MatrixXcd BE =
      boundary_matrix(s).cast<Complex>() * stable_basis(s, roots[0].z).columns;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(BE);
  CHECK(svd.singularValues()(svd.singularValues().size() - 1) < 1e-8);
}

TEST_CASE("root finding: Dirichlet and out-of-range boundary coefficients find nothing") {
  CHECK(find_roots(modified_lax_friedrichs(0.5, 0.75, 0.0)).empty());
  // 1/b = 3.33 is never attained by the stable eigenvalue on the circle
  CHECK(find_roots(modified_lax_friedrichs(0.5, 0.75, 0.3)).empty());
}

TEST_CASE("root locations are basis independent (Vandermonde vs Schur)") {
  const Scheme s = builtin_lf_example();
  const auto vander = find_roots_with(s, 4096, 1e-8, false, true);
  const auto schur = find_roots_with(s, 4096, 1e-8, true, true);
  REQUIRE(vander.size() == schur.size());
  for (size_t i = 0; i < vander.size(); ++i) CHECK(std::abs(vander[i].z - schur[i].z) < 1e-8);
}

TEST_CASE("boundary restriction at z = 1 is an isomorphism for the example") {
  CHECK(boundary_iso_margin_at_one(builtin_lf_example()) > 1e-3);
}

TEST_CASE("determinant derivative matches the closed form for the example") {
  // Delta(z) = 1 - b kappa_s(z):  Delta'(-1) = -b kappa_s'(-1)
  const Scheme s = builtin_lf_example();
  const double b = s.b[0][0];
  const double h = 1e-6;
  const Complex ks_p = stable_quadratic_root(s, Complex(-1.0 + h));
  const Complex ks_m = stable_quadratic_root(s, Complex(-1.0 - h));
  const Complex oracle = -b * (ks_p - ks_m) / (2.0 * h);
  const Complex fd = lopatinskii_derivative(s, Complex(-1.0, 0.0));
  CHECK(std::abs(fd - oracle) < 1e-5);
}
