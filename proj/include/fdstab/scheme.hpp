#pragma once

#include <optional>
#include <utility>

#include "fdstab/types.hpp"

namespace fdstab {

/// One-step explicit scheme on the half-line j >= 1: interior stencil
/// coefficients a_{-r}..a_p plus boundary extrapolation rows that fill the
/// r ghost cells nu = 1-r..0 from the first p_b interior cells.
struct Scheme {
  int r = 1;                           // left stencil width (= ghost count)
  int p = 1;                           // right stencil width
  double lambda_a = 0.0;               // Courant number
  std::vector<double> a;               // a_{-r}..a_p in stencil order
  int p_b = 1;                         // boundary rows reach u_1..u_{p_b}, p_b <= p
  std::vector<std::vector<double>> b;  // rows nu = 1-r..0, each of length p_b
  std::optional<int> declared_mu;      // dissipation order pinned by the config, if any

  double coeff(int ell) const { return a[static_cast<size_t>(ell + r)]; }
  /// b_{ell,nu} with ell = 1..p_b and nu = 1-r..0.
  double bc(int ell, int nu) const {
    return b[static_cast<size_t>(nu - (1 - r))][static_cast<size_t>(ell - 1)];
  }
  int size() const { return p + r; }  // companion dimension
};

/// Interior scheme u^{n+1}_j = u_j + D/2 (u_{j-1} - 2u_j + u_{j+1}) - la/2 (u_{j+1} - u_{j-1}),
/// boundary u_0 = b_coef * u_1.
Scheme modified_lax_friedrichs(double lambda_a, double D, double b_coef);

/// Lax-Wendroff interior with u_0 = b_coef * u_1.
Scheme lax_wendroff(double lambda_a, double b_coef = 0.0);

/// Four-point cubic-interpolation advection scheme (r = 2, p = 1) with
/// Dirichlet-type boundary rows u_0 = u_{-1} = b_coef * u_1.
Scheme cubic_interpolation(double lambda_a, double b_coef = 0.0);

/// Stable root of a1 k^2 + (a0 - z) k + a_{-1} = 0 for three-point schemes.
Complex stable_quadratic_root(const Scheme& s, Complex z);

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // signed distance to the failure boundary where meaningful
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
};

/// Fitted small-theta model |F(theta)| = exp(-beta * theta^{2 mu}).
struct DissipationFit {
  int mu = 0;
  double beta = 0.0;
  double fit_residual = 0.0;  // max relative deviation of -log|F| from the model
  double theta_window = 0.0;  // half-width of the fitting interval
};

/// Star-shaped envelope { rho e^{i phi} : rho <= 1 - c0 phi^{2 mu} } that
/// contains the sampled symbol curve.  c0 is the sampled-sharp constant;
/// c0_conservative additionally satisfies c0 * pi^{2 mu} <= delta0.
struct EnvelopeSet {
  double c0 = 0.0;
  double c0_conservative = 0.0;
  double theta0 = 0.0;
  double delta0 = 0.0;
  int mu = 1;
};

/// Amplification factor F(theta) = sum a_ell e^{i ell theta}.
Complex symbol(const Scheme& s, double theta);

/// |F(theta)|^2 - 1 evaluated without cancellation (exact at theta -> 0).
double symbol_modulus_sq_minus_one(const Scheme& s, double theta);

/// F on the uniform grid theta_i = -pi + 2 pi i / n, i = 0..n-1.
std::vector<Complex> sample_symbol_curve(const Scheme& s, int n, bool parallel = true);
std::vector<Complex> sample_symbol_curve_serial(const Scheme& s, int n);

/// Samples |F| on a uniform grid.  Outside the origin window the samples must
/// stay below 1; inside it |F|^2 - 1 must be strictly negative.  Returns the
/// pass flag and the margin delta0 = 1 - max |F| outside the window.
std::pair<bool, double> check_dissipativity(const Scheme& s, int n_samples,
                                            double theta_window = 0.1);

/// Determines mu and beta from -log|F| on a geometric grid.  Throws
/// AssumptionError when the leading order is odd, non-integer, or beta <= 0.
DissipationFit fit_dissipation(const Scheme& s);

/// beta from least squares at a fixed order (diagnostic for declared orders).
double beta_at_fixed_mu(const Scheme& s, int mu);

/// Runs every structural and spectral scheme check; failures are rows, not
/// exceptions.
ValidationReport validate(const Scheme& s);

/// Largest c0 (bisection, tol 1e-6) such that all sampled curve points satisfy
/// rho <= 1 - c0 phi^{2 mu}.
EnvelopeSet envelope_c0(const Scheme& s, const DissipationFit& fit);

bool in_set_C(const EnvelopeSet& env, Complex z);

}  // namespace fdstab
