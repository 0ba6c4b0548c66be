#include "fdstab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fdstab/resolvent.hpp"

namespace fdstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void rebuild_ghosts(const Scheme& s, GridState& st) {
  for (int nu = 1 - s.r; nu <= 0; ++nu) {
    Complex acc = 0.0;
    for (int ell = 1; ell <= s.p_b; ++ell) acc += s.bc(ell, nu) * st.interior[static_cast<size_t>(ell - 1)];
    st.ghosts[static_cast<size_t>(nu - (1 - s.r))] = acc;
  }
}

// Deterministic uniforms in [-1, 1); avoids platform-dependent distributions.
double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

double GridState::norm() const {
  double acc = 0.0;
  for (const Complex& v : interior) acc += std::norm(v);
  return std::sqrt(acc);
}

GridState zero_state(const Scheme& s, int J) {
  GridState st;
  st.J = J;
  st.r = s.r;
  st.ghosts.assign(static_cast<size_t>(s.r), Complex(0.0));
  st.interior.assign(static_cast<size_t>(J), Complex(0.0));
  st.supp_lo = 1;
  st.supp_hi = 0;
  return st;
}

GridState delta_state(const Scheme& s, int j0, int J) {
  if (j0 < 1 || j0 > J) throw NumericalError("delta_state: j0 outside the window");
  GridState st = zero_state(s, J);
  st.interior[static_cast<size_t>(j0 - 1)] = 1.0;
  st.supp_lo = st.supp_hi = j0;
  rebuild_ghosts(s, st);
  return st;
}

GridState state_from_interior(const Scheme& s, std::vector<Complex> interior) {
  GridState st = zero_state(s, static_cast<int>(interior.size()));
  st.interior = std::move(interior);
  st.supp_lo = 1;
  st.supp_hi = st.J;
  for (int j = st.J; j >= 1; --j) {
    if (std::abs(st.interior[static_cast<size_t>(j - 1)]) != 0.0) break;
    st.supp_hi = j - 1;
  }
  rebuild_ghosts(s, st);
  return st;
}

double ghost_residual(const Scheme& s, const GridState& st) {
  double res = 0.0;
  for (int nu = 1 - s.r; nu <= 0; ++nu) {
    Complex acc = -st.at(nu);
    for (int ell = 1; ell <= s.p_b; ++ell) acc += s.bc(ell, nu) * st.at(ell);
    res = std::max(res, std::abs(acc));
  }
  return res;
}

GridState step(const Scheme& s, const GridState& st) {
  GridState out = zero_state(s, st.J);
  if (st.supp_hi < st.supp_lo) return out;  // zero stays zero
  // Leftmost nonzero source cell, ghosts included (ghosts are fed by u_1..u_{p_b}).
  const int lo_src = (st.supp_lo <= s.p_b) ? (1 - s.r) : st.supp_lo;
  const int lo_new = std::max(1, lo_src - s.p);
  const int hi_new = st.supp_hi + s.r;
  if (hi_new > st.J)
    throw NumericalError("step: support reached the right edge; window too small");
  for (int j = lo_new; j <= hi_new; ++j) {
    Complex acc = 0.0;
    for (int ell = -s.r; ell <= s.p; ++ell) acc += s.coeff(ell) * st.at(j + ell);
    out.interior[static_cast<size_t>(j - 1)] = acc;
  }
  out.supp_lo = lo_new;
  out.supp_hi = hi_new;
  rebuild_ghosts(s, out);
  return out;
}

TemporalGreenField temporal_green(const Scheme& s, int j0, int n, int J) {
  if (J <= j0 + s.r * n + s.p + s.r)
    throw NumericalError("temporal_green: window must exceed j0 + r n + p + r");
  GridState st = delta_state(s, j0, J);
  for (int k = 0; k < n; ++k) st = step(s, st);
  TemporalGreenField f;
  f.n = n;
  f.j0 = j0;
  f.alpha = s.lambda_a;
  f.J = J;
  f.r = s.r;
  f.values.reserve(static_cast<size_t>(J + s.r));
  for (int j = 1 - s.r; j <= J; ++j) f.values.push_back(st.at(j));
  return f;
}

std::vector<TemporalGreenField> temporal_green_snapshots(const Scheme& s, int j0,
                                                         const std::vector<int>& ns, int J) {
  if (ns.empty()) return {};
  if (!std::is_sorted(ns.begin(), ns.end()))
    throw NumericalError("temporal_green_snapshots: snapshot list must be sorted");
  if (J <= j0 + s.r * ns.back() + s.p + s.r)
    throw NumericalError("temporal_green_snapshots: window must exceed j0 + r n + p + r");
  std::vector<TemporalGreenField> out;
  GridState st = delta_state(s, j0, J);
  int n = 0;
  for (int target : ns) {
    for (; n < target; ++n) st = step(s, st);
    TemporalGreenField f;
    f.n = n;
    f.j0 = j0;
    f.alpha = s.lambda_a;
    f.J = J;
    f.r = s.r;
    f.values.reserve(static_cast<size_t>(J + s.r));
    for (int j = 1 - s.r; j <= J; ++j) f.values.push_back(st.at(j));
    out.push_back(std::move(f));
  }
  return out;
}

TemporalGreenField temporal_green_contour(const Scheme& s, int j0, int n, double rho, int n_nodes,
                                          int J, bool parallel) {
  if (!(rho > 1.0))
    throw NumericalError("temporal_green_contour: contour radius must exceed 1");
  if (n_nodes < 256 || (n_nodes & (n_nodes - 1)) != 0)
    throw NumericalError("temporal_green_contour: node count must be a power of two >= 256");

  std::vector<std::vector<Complex>> node_fields(static_cast<size_t>(n_nodes));
#pragma omp parallel for schedule(static) if (parallel)
  for (int m = 0; m < n_nodes; ++m) {
    const double phi = 2.0 * kPi * m / n_nodes;
    const Complex zm = rho * Complex(std::cos(phi), std::sin(phi));
    node_fields[static_cast<size_t>(m)] = spatial_green_structured(s, zm, j0, J).values;
  }

  TemporalGreenField f;
  f.n = n;
  f.j0 = j0;
  f.alpha = s.lambda_a;
  f.J = J;
  f.r = s.r;
  f.values.assign(static_cast<size_t>(J + s.r), Complex(0.0));
  for (int m = 0; m < n_nodes; ++m) {
    const double phi = 2.0 * kPi * m / n_nodes;
    const Complex zm = rho * Complex(std::cos(phi), std::sin(phi));
    const Complex w = zm / double(n_nodes) * std::pow(zm, n);
    const auto& g = node_fields[static_cast<size_t>(m)];
    for (size_t i = 0; i < g.size(); ++i) f.values[i] += w * g[i];
  }
  return f;
}

std::vector<PowerProbePoint> power_norm_probe(const Scheme& s, int n_max, int J0, int trials,
                                              std::uint64_t seed, bool parallel) {
  const int J = J0 + s.r * n_max + s.p + s.r + 8;

  std::vector<std::vector<Complex>> inputs;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<Complex> v(static_cast<size_t>(J), Complex(0.0));
    for (int j = 0; j < J0; ++j) v[static_cast<size_t>(j)] = uniform_pm1(rng);
    inputs.push_back(std::move(v));
  }
  for (int j0 : {1, 2, 3}) {
    std::vector<Complex> v(static_cast<size_t>(J), Complex(0.0));
    if (j0 <= J0) v[static_cast<size_t>(j0 - 1)] = 1.0;
    inputs.push_back(std::move(v));
  }
  try {
    const auto roots = find_roots(s);
    if (!roots.empty() && roots.front().simple) {
      const auto prof = residue_at_root(s, roots.front(), 1, std::min(J, 200));
      std::vector<Complex> v(static_cast<size_t>(J), Complex(0.0));
      for (int j = 1; j <= std::min(J0, prof.J); ++j) v[static_cast<size_t>(j - 1)] = prof.at(j);
      inputs.push_back(std::move(v));
    }
  } catch (const std::exception&) {
    // no aligned input when the root machinery declines
  }

  const int n_inputs = static_cast<int>(inputs.size());
  std::vector<std::vector<double>> ratios(static_cast<size_t>(n_inputs));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int t = 0; t < n_inputs; ++t) {
    GridState st = state_from_interior(s, inputs[static_cast<size_t>(t)]);
    const double n0 = st.norm();
    std::vector<double> rs(static_cast<size_t>(n_max + 1));
    rs[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      st = step(s, st);
      rs[static_cast<size_t>(n)] = n0 > 0 ? st.norm() / n0 : 0.0;
    }
    ratios[static_cast<size_t>(t)] = std::move(rs);
  }

  std::vector<PowerProbePoint> out(static_cast<size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    double sup = 0.0;
    for (int t = 0; t < n_inputs; ++t) sup = std::max(sup, ratios[static_cast<size_t>(t)][static_cast<size_t>(n)]);
    out[static_cast<size_t>(n)] = {n, sup};
  }
  return out;
}

}  // namespace fdstab
