#pragma once

#include "fdstab/spectral.hpp"

namespace fdstab {

/// Sampled resolvent kernel G_z(j, j0) on the window j = 1-r..J.
struct SpatialGreenField {
  Complex z;
  int j0 = 1;
  int J = 0;
  int r = 1;                    // ghost count, fixes the index offset
  std::vector<Complex> values;  // index j - (1 - r)
  Complex at(int j) const { return values[static_cast<size_t>(j - (1 - r))]; }
  double edge_magnitude(int p) const;  // max |G| over the last p interior cells
};

/// Truncated banded solve of (zI - T) G = delta_{j0} with the boundary rows
/// and homogeneous Dirichlet closure at the right edge.  J is grown until the
/// edge cells fall below 1e-12.
SpatialGreenField spatial_green_direct(const Scheme& s, Complex z, int j0, int J);

/// Same kernel assembled from the stable/unstable subspace recurrences of the
/// companion matrix (no truncation).
SpatialGreenField spatial_green_structured(const Scheme& s, Complex z, int j0, int J);

struct DecayCertificate {
  double C = 0.0;
  double c = 0.0;
  double sup_ratio = 0.0;  // max |G| e^{c|j-j0|} / C over the fitted window
};

/// Two-sided exponential fit |G(j)| <= C exp(-c |j - j0|); the weaker side
/// sets c.  Throws when the field does not decay.
DecayCertificate fit_decay(const SpatialGreenField& field);

/// Boundary-localized eigenfunction data extracted at a determinant root.
struct SurfaceWaveProfile {
  LopatinskiiRoot root;
  int j0 = 1;
  int J = 0;
  int r = 1;
  std::vector<Complex> values;  // w(j, j0), index j - (1 - r)
  double decay_C = 0.0;
  double decay_c = 0.0;
  double method_diff = 0.0;  // max |quadrature - closed form| on the checked window
  Complex at(int j) const { return values[static_cast<size_t>(j - (1 - r))]; }
};

/// Residue of G_z at a simple root, computed by contour quadrature (64-node
/// trapezoid, radius 1e-3) and by the adjugate closed form; both must agree
/// to 1e-6 or the call aborts.  Stored values come from the closed form.
SurfaceWaveProfile residue_at_root(const Scheme& s, const LopatinskiiRoot& root, int j0, int J,
                                   bool parallel = true);

/// Certifies that R_z = G_z - w/(z - z_k) stays bounded with a z-uniform
/// exponential decay on a circle |z - z_k| = radius.
DecayCertificate remainder_bound_check(const Scheme& s, const LopatinskiiRoot& root,
                                       const SurfaceWaveProfile& profile, int j0, double radius,
                                       int n_samples);

}  // namespace fdstab
