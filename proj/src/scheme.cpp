#include "fdstab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fdstab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFitThetaLo = 1e-4;
constexpr double kFitThetaHi = 1e-1;
constexpr int kFitPoints = 64;
// Below this, -log|F| is dominated by rounding of |F|^2 - 1.
constexpr double kUsableFloor = 1e-13;
constexpr double kZeroCoeff = 1e-14;

double sum_a(const Scheme& s) {
  double acc = 0;
  for (int l = -s.r; l <= s.p; ++l) acc += s.coeff(l);
  return acc;
}

double drift_a(const Scheme& s) {
  double acc = 0;
  for (int l = -s.r; l <= s.p; ++l) acc += l * s.coeff(l);
  return acc;
}

// -log|F(theta)|, accurate for theta -> 0.
double neg_log_modulus(const Scheme& s, double theta) {
  return -0.5 * std::log1p(symbol_modulus_sq_minus_one(s, theta));
}

std::vector<double> fit_grid() {
  std::vector<double> th(kFitPoints);
  for (int i = 0; i < kFitPoints; ++i)
    th[i] = kFitThetaLo * std::pow(kFitThetaHi / kFitThetaLo, i / double(kFitPoints - 1));
  return th;
}

std::string structural_issue(const Scheme& s) {
  if (s.r < 1 || s.p < 1) return "stencil widths must satisfy min(r, p) >= 1";
  if (static_cast<int>(s.a.size()) != s.r + s.p + 1) return "coefficient array has wrong length";
  if (s.p_b < 1 || s.p_b > s.p) return "boundary width p_b must lie in [1, p]";
  if (static_cast<int>(s.b.size()) != s.r) return "boundary table must have r rows";
  for (const auto& row : s.b)
    if (static_cast<int>(row.size()) != s.p_b) return "boundary row has wrong length";
  if (!(s.lambda_a > 0.0)) return "Courant number must be positive";
  return {};
}

}  // namespace

Scheme modified_lax_friedrichs(double lambda_a, double D, double b_coef) {
  Scheme s;
  s.r = 1;
  s.p = 1;
  s.lambda_a = lambda_a;
  s.a = {(D + lambda_a) / 2.0, 1.0 - D, (D - lambda_a) / 2.0};
  s.p_b = 1;
  s.b = {{b_coef}};
  return s;
}

Scheme lax_wendroff(double lambda_a, double b_coef) {
  Scheme s;
  s.r = 1;
  s.p = 1;
  s.lambda_a = lambda_a;
  const double v = lambda_a;
  s.a = {v * (1.0 + v) / 2.0, 1.0 - v * v, -v * (1.0 - v) / 2.0};
  s.p_b = 1;
  s.b = {{b_coef}};
  return s;
}

Scheme cubic_interpolation(double lambda_a, double b_coef) {
  Scheme s;
  s.r = 2;
  s.p = 1;
  s.lambda_a = lambda_a;
  const double x = -lambda_a;  // Lagrange weights on nodes {-2,-1,0,1} at x
  s.a = {(x + 1.0) * x * (x - 1.0) / -6.0, (x + 2.0) * x * (x - 1.0) / 2.0,
         (x + 2.0) * (x + 1.0) * (x - 1.0) / -2.0, (x + 2.0) * (x + 1.0) * x / 6.0};
  s.p_b = 1;
  s.b = {{b_coef}, {b_coef}};
  return s;
}

Complex stable_quadratic_root(const Scheme& s, Complex z) {
  if (s.r != 1 || s.p != 1) throw NumericalError("stable_quadratic_root: needs r = p = 1");
  const double a1 = s.coeff(1), a0 = s.coeff(0), am1 = s.coeff(-1);
  const Complex c = (-z + a0) / (2.0 * a1);
  const Complex d = std::sqrt(c * c - am1 / a1);
  const Complex k1 = -c + d, k2 = -c - d;
  return std::abs(k1) < std::abs(k2) ? k1 : k2;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Complex symbol(const Scheme& s, double theta) {
  Complex acc = 0.0;
  for (int l = -s.r; l <= s.p; ++l)
    acc += s.coeff(l) * Complex(std::cos(l * theta), std::sin(l * theta));
  return acc;
}

double symbol_modulus_sq_minus_one(const Scheme& s, double theta) {
  // |F|^2 = (sum a)^2 - 4 sum_{l<m} a_l a_m sin^2((m-l) theta / 2).
  const double sa = sum_a(s);
  double acc = sa * sa - 1.0;
  for (int l = -s.r; l <= s.p; ++l)
    for (int m = l + 1; m <= s.p; ++m) {
      const double sh = std::sin(0.5 * (m - l) * theta);
      acc -= 4.0 * s.coeff(l) * s.coeff(m) * sh * sh;
    }
  return acc;
}

std::vector<Complex> sample_symbol_curve(const Scheme& s, int n, bool parallel) {
  std::vector<Complex> out(static_cast<size_t>(n));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = symbol(s, -kPi + 2.0 * kPi * i / n);
  } else {
    for (int i = 0; i < n; ++i) out[i] = symbol(s, -kPi + 2.0 * kPi * i / n);
  }
  return out;
}

std::vector<Complex> sample_symbol_curve_serial(const Scheme& s, int n) {
  return sample_symbol_curve(s, n, false);
}

std::pair<bool, double> check_dissipativity(const Scheme& s, int n_samples, double theta_window) {
  if (n_samples < 1024) throw NumericalError("check_dissipativity: need n_samples >= 1024");
  bool ok = true;
  double max_mod = 0.0;
  for (int i = 0; i <= n_samples; ++i) {
    const double theta = -kPi + 2.0 * kPi * i / n_samples;
    if (theta == 0.0) continue;
    if (std::abs(theta) >= theta_window) {
      max_mod = std::max(max_mod, std::abs(symbol(s, theta)));
    } else if (symbol_modulus_sq_minus_one(s, theta) >= 0.0) {
      ok = false;  // |F| reaches 1 inside the origin window
    }
  }
  const double delta0 = 1.0 - max_mod;
  return {ok && delta0 > 0.0, delta0};
}

double beta_at_fixed_mu(const Scheme& s, int mu) {
  double num = 0, den = 0;
  for (double th : fit_grid()) {
    const double g = neg_log_modulus(s, th);
    const double t = std::pow(th, 2.0 * mu);
    num += g * t;
    den += t * t;
  }
  return num / den;
}

DissipationFit fit_dissipation(const Scheme& s) {
  const auto th = fit_grid();
  std::vector<double> lt, lg, thetas, gs;
  for (double t : th) {
    const double g = neg_log_modulus(s, t);
    thetas.push_back(t);
    gs.push_back(g);
    if (g > kUsableFloor) {
      lt.push_back(std::log(t));
      lg.push_back(std::log(g));
    }
  }
  if (lt.size() < 8)
    throw AssumptionError(
        "dissipation fit: -log|F| vanishes (or is negative) on the fitting window; "
        "beta <= 0, the scheme is not dissipative");
  const auto line = detail::fit_line(lt, lg);
  const int order = static_cast<int>(std::lround(line.slope));
  if (std::abs(line.slope - order) > 0.1)
    throw AssumptionError("dissipation fit: leading order " + std::to_string(line.slope) +
                          " is not an integer within tolerance 0.1");
  if (order <= 0 || order % 2 != 0)
    throw AssumptionError("dissipation fit: leading order " + std::to_string(order) +
                          " is not a positive even integer");
  DissipationFit fit;
  fit.mu = order / 2;
  fit.theta_window = kFitThetaHi;

  // beta from the lower half of the usable window (log-space mean) where the
  // O(theta^{2mu+2}) correction is negligible.
  const double theta_beta_max = std::sqrt(kFitThetaLo * kFitThetaHi);
  double acc = 0;
  int cnt = 0;
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (gs[i] > kUsableFloor && thetas[i] <= theta_beta_max) {
      acc += std::log(gs[i]) - order * std::log(thetas[i]);
      ++cnt;
    }
  }
  if (cnt < 4) throw AssumptionError("dissipation fit: too few points for the beta fit");
  fit.beta = std::exp(acc / cnt);
  if (!(fit.beta > 0.0)) throw AssumptionError("dissipation fit: beta <= 0");

  double resid = 0;
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (gs[i] <= kUsableFloor) continue;
    const double model = fit.beta * std::pow(thetas[i], 2.0 * fit.mu);
    resid = std::max(resid, std::abs(gs[i] - model) / model);
  }
  fit.fit_residual = resid;
  return fit;
}

ValidationReport validate(const Scheme& s) {
  ValidationReport rep;
  auto add = [&rep](std::string name, bool pass, double margin, std::string detail = {}) {
    rep.checks.push_back({std::move(name), pass, margin, std::move(detail)});
  };

  const std::string structural = structural_issue(s);
  add("structure", structural.empty(), structural.empty() ? 1.0 : 0.0, structural);
  if (!structural.empty()) return rep;  // nothing below is well defined

  const double edge = std::min(std::abs(s.coeff(-s.r)), std::abs(s.coeff(s.p)));
  add("edge-coefficients", edge > kZeroCoeff, edge,
      edge > kZeroCoeff ? "" : "a_{-r} a_p = 0 violates the stencil-width declaration");

  const double cons = std::abs(sum_a(s) - 1.0);
  add("consistency-sum", cons < 1e-12, cons);
  const double drift = std::abs(drift_a(s) + s.lambda_a);
  add("consistency-drift", drift < 1e-12, drift);
  add("bernstein", s.lambda_a < s.r, s.r - s.lambda_a);
  if (!rep.all_pass()) return rep;

  DissipationFit fit;
  bool have_fit = false;
  try {
    fit = fit_dissipation(s);
    have_fit = true;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mu=%d beta=%.12g residual=%.3g", fit.mu, fit.beta,
                  fit.fit_residual);
    add("dissipation-fit", true, fit.beta, buf);
  } catch (const AssumptionError& e) {
    add("dissipation-fit", false, 0.0, e.what());
  }

  if (have_fit && s.declared_mu) {
    const bool match = fit.mu == *s.declared_mu;
    char buf[160];
    const double beta_decl = beta_at_fixed_mu(s, *s.declared_mu);
    std::snprintf(buf, sizeof(buf),
                  "declared mu=%d, detected leading order %d (beta at declared order %.3g)",
                  *s.declared_mu, 2 * fit.mu, beta_decl);
    add("declared-mu", match, match ? 1.0 : 0.0, buf);
  }

  const auto [diss_ok, delta0] =
      check_dissipativity(s, 4096, have_fit ? fit.theta_window : kFitThetaHi);
  add("dissipativity", diss_ok, delta0,
      diss_ok ? "" : "|F(theta)| reaches 1 away from theta = 0");

  if (have_fit && diss_ok) {
    try {
      const EnvelopeSet env = envelope_c0(s, fit);
      char buf[128];
      std::snprintf(buf, sizeof(buf), "c0=%.6g c0_conservative=%.6g", env.c0,
                    env.c0_conservative);
      add("envelope", env.c0 > 0.0, env.c0, buf);
    } catch (const AssumptionError& e) {
      add("envelope", false, 0.0, e.what());
    }
  }
  return rep;
}

EnvelopeSet envelope_c0(const Scheme& s, const DissipationFit& fit) {
  constexpr int kGrid = 4096;
  const auto curve = sample_symbol_curve(s, kGrid);
  std::vector<double> rho(curve.size()), phi(curve.size());
  for (size_t i = 0; i < curve.size(); ++i) {
    rho[i] = std::abs(curve[i]);
    phi[i] = std::arg(curve[i]);
  }
  const double two_mu = 2.0 * fit.mu;
  auto admissible = [&](double c) {
    for (size_t i = 0; i < curve.size(); ++i)
      if (rho[i] > 1.0 - c * std::pow(phi[i], two_mu) + 1e-15) return false;
    return true;
  };
  if (!admissible(0.0))
    throw AssumptionError("envelope: symbol curve leaves the closed unit disk");

  double hi = 1.0;
  while (admissible(hi) && hi < 1e6) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) throw AssumptionError("envelope: no positive c0 exists");

  EnvelopeSet env;
  env.c0 = lo;
  env.mu = fit.mu;
  env.theta0 = fit.theta_window;
  env.delta0 = check_dissipativity(s, kGrid, fit.theta_window).second;
  env.c0_conservative = std::min(lo, env.delta0 / std::pow(kPi, two_mu));
  return env;
}

bool in_set_C(const EnvelopeSet& env, Complex z) {
  const double rho = std::abs(z);
  const double phi = std::arg(z);
  return rho <= 1.0 - env.c0 * std::pow(phi, 2.0 * env.mu);
}

}  // namespace fdstab
