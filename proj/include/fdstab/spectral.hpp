#pragma once

#include <Eigen/Dense>

#include "fdstab/scheme.hpp"

namespace fdstab {

/// Companion matrix of the spatial recurrence: kappa is an eigenvalue of
/// M(z) iff z = sum a_ell kappa^ell.
Eigen::MatrixXcd companion(const Scheme& s, Complex z);

struct SpectralSplit {
  std::vector<Complex> stable;    // |kappa| < 1 - tol
  std::vector<Complex> unstable;  // |kappa| > 1 + tol
  std::vector<Complex> central;   // within tol of the unit circle
  double tol = 1e-8;
  bool clean(int r, int p) const {
    return central.empty() && static_cast<int>(stable.size()) == r &&
           static_cast<int>(unstable.size()) == p;
  }
};

/// Eigenvalues of M(z) classified by modulus.  Each eigenvalue is verified
/// against the defining relation to 1e-9 * (1 + |z|).
SpectralSplit split(const Scheme& s, Complex z, double tol = 1e-8);

/// Radius of the neighborhood of z = 1 on which the kappa branch is tracked.
double branch_radius(const Scheme& s);

/// The eigenvalue of M(z) continuously connected to kappa(1) = 1, selected as
/// the one closest to the first-order prediction 1 - (z - 1)/(lambda a).
Complex kappa_branch(const Scheme& s, Complex z);

struct StableBasis {
  Complex z;
  Eigen::MatrixXcd columns;      // (p+r) x r
  std::vector<Complex> kappas;   // eigenvalues in column order (empty on the Schur path)
  bool includes_kappa_branch = false;
  bool schur = false;
};

/// Basis of the stable (or extended-through-1) invariant subspace.  Columns
/// are unnormalized Vandermonde eigenvectors ordered by ascending modulus then
/// ascending argument; falls back to ordered Schur vectors when stable
/// eigenvalues nearly collide.
StableBasis stable_basis(const Scheme& s, Complex z);

/// Schur-vector variant of the same subspace (for basis-independence checks).
StableBasis stable_basis_schur(const Scheme& s, Complex z);

/// Boundary-condition matrix: r x (p+r), one row per ghost cell, acting on
/// the augmented vector [w_p, ..., w_{1-r}].
Eigen::MatrixXd boundary_matrix(const Scheme& s);

/// Lopatinskii determinant det[B e_1(z) ... B e_r(z)] with the deterministic
/// Vandermonde basis.  Zero locations are basis independent; values are not.
Complex lopatinskii(const Scheme& s, Complex z);
Complex lopatinskii_schur(const Scheme& s, Complex z);

/// Holomorphic-derivative estimate of the determinant at z0 (five-point
/// complex finite differences on a basis whose eigenvalue ordering is
/// anchored at z0).
Complex lopatinskii_derivative(const Scheme& s, Complex z0, double h = 1e-5);

struct LopatinskiiRoot {
  Complex z;          // on the unit circle
  double theta = 0.0; // argument in [-pi, pi] \ {0}
  double delta_abs = 0.0;
  double dprime_abs = 0.0;
  bool simple = false;
};

/// Unit-circle zeros of the determinant away from z = 1.  Non-simple roots
/// are reported with simple = false, never dropped.
std::vector<LopatinskiiRoot> find_roots(const Scheme& s, int n_theta = 4096, double tol = 1e-8);
std::vector<LopatinskiiRoot> find_roots_with(const Scheme& s, int n_theta, double tol,
                                             bool schur_basis, bool parallel);

/// |Delta(e^{i theta})| over a list of angles; the theta-scan kernel.
std::vector<double> lopatinskii_profile(const Scheme& s, const std::vector<double>& thetas,
                                        bool parallel = true);
std::vector<double> lopatinskii_profile_serial(const Scheme& s,
                                               const std::vector<double>& thetas);

/// Smallest singular value of B restricted to the extended stable subspace at
/// z = 1 (the z = 1 clause of the eigenvalue assumption).
double boundary_iso_margin_at_one(const Scheme& s);

/// Invariant-subspace machinery shared with the resolvent construction.
/// M Vs = Vs As and M Vu = Vu Au; Cs/Cu are the top/bottom row blocks of
/// [Vs Vu]^{-1}, so pi^s = Vs Cs and pi^u = Vu Cu.
struct InvariantSplit {
  Complex z;
  Eigen::MatrixXcd Vs, Vu;
  Eigen::MatrixXcd As, Au;
  Eigen::MatrixXcd Cs, Cu;
  std::vector<Complex> stable_evals, unstable_evals;
  bool extended = false;  // kappa-branch inclusion near z = 1
  bool schur = false;
};

InvariantSplit invariant_split(const Scheme& s, Complex z, bool force_schur = false);

}  // namespace fdstab
