#pragma once

#include <cstdint>

#include "fdstab/scheme.hpp"

namespace fdstab {

/// One snapshot of the evolution: interior cells j = 1..J plus the r ghost
/// cells, which always satisfy the boundary rows with respect to the interior.
struct GridState {
  int J = 0;
  int r = 1;
  std::vector<Complex> ghosts;    // nu = 1-r..0
  std::vector<Complex> interior;  // j = 1..J
  int supp_lo = 1, supp_hi = 0;   // interior support bounds (empty if hi < lo)

  Complex at(int j) const {
    return j >= 1 ? interior[static_cast<size_t>(j - 1)]
                  : ghosts[static_cast<size_t>(j - (1 - r))];
  }
  double norm() const;  // l2 over the interior
};

GridState zero_state(const Scheme& s, int J);
GridState delta_state(const Scheme& s, int j0, int J);
GridState state_from_interior(const Scheme& s, std::vector<Complex> interior);

/// Max violation of the boundary rows by the current state.
double ghost_residual(const Scheme& s, const GridState& st);

/// One application of the evolution operator: interior first from the old
/// interior + ghosts, then ghosts rebuilt from the new interior.  Aborts when
/// the support would touch the right edge.
GridState step(const Scheme& s, const GridState& st);

struct TemporalGreenField {
  int n = 0;
  int j0 = 1;
  double alpha = 0.0;  // drift lambda a
  int J = 0;
  int r = 1;
  std::vector<Complex> values;  // j = 1-r..J
  Complex at(int j) const { return values[static_cast<size_t>(j - (1 - r))]; }
};

/// n applications of the stepping operator to delta_{j0}; exact thanks to the
/// finite stencil (the window must contain the support cone).
TemporalGreenField temporal_green(const Scheme& s, int j0, int n, int J);

/// Snapshots at every n in ns from a single run (ns must be sorted).
std::vector<TemporalGreenField> temporal_green_snapshots(const Scheme& s, int j0,
                                                         const std::vector<int>& ns, int J);

/// Trapezoidal contour quadrature of z^n G_z(j, j0) over |z| = rho > 1 using
/// the structured resolvent kernel at each node.
TemporalGreenField temporal_green_contour(const Scheme& s, int j0, int n, double rho, int n_nodes,
                                          int J, bool parallel = true);

struct PowerProbePoint {
  int n = 0;
  double sup_ratio = 0.0;  // max over trial inputs of ||T^n f|| / ||f||
};

/// Empirical lower envelope of ||T^n||: random trials supported in [1, J0],
/// delta sources at the boundary, and the surface-wave-aligned input when a
/// determinant root exists.
std::vector<PowerProbePoint> power_norm_probe(const Scheme& s, int n_max, int J0, int trials,
                                              std::uint64_t seed, bool parallel = true);

}  // namespace fdstab
