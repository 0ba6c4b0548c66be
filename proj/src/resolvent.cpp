#include "fdstab/resolvent.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>

namespace fdstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Apply Au^{-1} to a coefficient vector (diagonal or triangular restriction).
Eigen::VectorXcd apply_inverse(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& v) {
  if (A.rows() == 1) return v / A(0, 0);
  return A.triangularView<Eigen::Upper>().solve(v);
}

Eigen::VectorXcd apply_inverse_pow(const Eigen::MatrixXcd& A, Eigen::VectorXcd v, int k) {
  bool diagonal = true;
  for (int i = 0; i < A.rows() && diagonal; ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) != Complex(0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    for (int i = 0; i < A.rows(); ++i) v(i) *= std::pow(A(i, i), -k);
    return v;
  }
  for (int m = 0; m < k; ++m) v = apply_inverse(A, v);
  return v;
}

double one_norm(const SpMat& A) {
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(A.cols());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) colsum(it.col()) += std::abs(it.value());
  return colsum.maxCoeff();
}

SpatialGreenField structured_impl(const Scheme& s, Complex z, int j0, int J,
                                  double singular_guard) {
  const SpectralSplit sp = split(s, z);
  if (!sp.clean(s.r, s.p))
    throw NumericalError("structured Green's function: eigenvalue counts are not (r, p); "
                         "z lies on or too close to the spectrum");
  const InvariantSplit I = invariant_split(s, z);
  const Eigen::MatrixXcd B = boundary_matrix(s).cast<Complex>();
  const double ap = s.coeff(s.p);

  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.size());
  e(0) = 1.0;
  const Eigen::VectorXcd cu = I.Cu * e;
  const Eigen::VectorXcd cs = I.Cs * e;

  // q1 = a_p^{-1} M^{-j0} pi^u e, the unstable component of W_1.
  const Eigen::VectorXcd du1 = apply_inverse_pow(I.Au, cu, j0) / ap;
  const Eigen::VectorXcd q1 = I.Vu * du1;

  // Stable coefficients of W_1 solve (B Vs) g1 = -B q1.
  const Eigen::MatrixXcd BVs = B * I.Vs;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(BVs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= B.norm() / singular_guard)
    throw NumericalError("boundary restriction to the stable subspace is numerically singular; "
                         "z is an eigenvalue (use the residue construction instead)");
  const Eigen::VectorXcd g1 = svd.solve(-(B * q1));

  SpatialGreenField field;
  field.z = z;
  field.j0 = j0;
  field.J = J;
  field.r = s.r;
  field.values.assign(static_cast<size_t>(J + s.r), Complex(0.0));

  Eigen::VectorXcd gA = g1;                               // As^{j-1} g1
  Eigen::VectorXcd gB = Eigen::VectorXcd::Zero(s.r);      // tail term, alive for j > j0
  Eigen::VectorXcd du = du1;                              // unstable coefficients
  for (int j = 1; j <= J + s.r; ++j) {
    Eigen::VectorXcd W = I.Vs * (gA - gB);
    if (j <= j0) W += I.Vu * du;
    const Complex w_last = W(s.size() - 1);  // scalar component w_{j-r}
    const int jv = j - s.r;
    if (jv >= 1 - s.r && jv <= J) field.values[static_cast<size_t>(jv - (1 - s.r))] = w_last;

    gA = (I.As * gA).eval();
    if (j == j0) gB = cs / ap;      // enters at j = j0 + 1 as As^{j-j0-1} cs / a_p
    else if (j > j0) gB = (I.As * gB).eval();
    if (j < j0) du = (I.Au * du).eval();
  }
  return field;
}

}  // namespace

double SpatialGreenField::edge_magnitude(int p) const {
  double m = 0.0;
  for (int j = std::max(1, J - p + 1); j <= J; ++j) m = std::max(m, std::abs(at(j)));
  return m;
}

SpatialGreenField spatial_green_direct(const Scheme& s, Complex z, int j0, int J) {
  if (J < j0 + 50 + s.p + s.r)
    throw NumericalError("spatial_green_direct: J must exceed j0 + 50 + p + r");

  for (int attempt = 0; attempt < 8; ++attempt) {
    const int n = J + s.r;  // unknowns w_{1-r}..w_J
    auto idx = [&](int j) { return j - (1 - s.r); };
    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(n) * (s.p + s.r + 2));
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

    for (int nu = 1 - s.r; nu <= 0; ++nu) {
      const int row = idx(nu);
      trip.emplace_back(row, idx(nu), Complex(1.0));
      for (int ell = 1; ell <= s.p_b; ++ell)
        trip.emplace_back(row, idx(ell), Complex(-s.bc(ell, nu)));
    }
    for (int j = 1; j <= J; ++j) {
      const int row = idx(j);
      trip.emplace_back(row, idx(j), z);
      for (int ell = -s.r; ell <= s.p; ++ell) {
        const int col = j + ell;
        if (col > J) continue;  // homogeneous Dirichlet closure
        trip.emplace_back(row, idx(col), Complex(-s.coeff(ell)));
      }
      if (j == j0) rhs(row) = 1.0;
    }

    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw NumericalError("spatial_green_direct: factorization failed; z in the spectrum?");

    // crude condition estimate from two random solves
    std::mt19937_64 rng(0x5eedu);
    double inv_norm = 0.0;
    for (int t = 0; t < 2; ++t) {
      Eigen::VectorXcd b(n);
      for (int i = 0; i < n; ++i)
        b(i) = Complex(std::uniform_real_distribution<double>(-1, 1)(rng),
                       std::uniform_real_distribution<double>(-1, 1)(rng));
      b /= b.norm();
      inv_norm = std::max(inv_norm, lu.solve(b).norm());
    }
    if (one_norm(A) * inv_norm > 1e12)
      throw NumericalError("spatial_green_direct: condition estimate above 1e12; "
                           "z is effectively in the spectrum");

    const Eigen::VectorXcd x = lu.solve(rhs);
    SpatialGreenField field;
    field.z = z;
    field.j0 = j0;
    field.J = J;
    field.r = s.r;
    field.values.assign(x.data(), x.data() + n);
    if (field.edge_magnitude(s.p) < 1e-12) return field;
    J += std::max(100, J / 2);  // truncation visible: grow the window
  }
  throw NumericalError("spatial_green_direct: window kept growing; decay too slow near z");
}

SpatialGreenField spatial_green_structured(const Scheme& s, Complex z, int j0, int J) {
  return structured_impl(s, z, j0, J, 1e8);
}

DecayCertificate fit_decay(const SpatialGreenField& field) {
  const int j0 = field.j0;
  auto side_rate = [&](int from, int to, int dir) -> double {
    std::vector<double> xs, ys;
    for (int j = from; dir > 0 ? j <= to : j >= to; j += dir) {
      const double m = std::abs(field.at(j));
      if (m < 1e-250) break;
      xs.push_back(std::abs(j - j0));
      ys.push_back(std::log(m));
    }
    if (xs.size() < 6) return std::numeric_limits<double>::infinity();
    return -detail::fit_line(xs, ys).slope;
  };
  const double c_left = side_rate(j0, 1, -1);
  const double c_right = side_rate(j0, field.J - 2 * field.r, +1);
  const double c = std::min(c_left, c_right);
  if (!(c > 0.0) || !std::isfinite(c))
    throw NumericalError("fit_decay: field does not decay; z inside or near the spectrum");

  double C = 0.0;
  for (int j = 1; j <= field.J; ++j) {
    const double m = std::abs(field.at(j));
    if (m < 1e-250) continue;
    C = std::max(C, m * std::exp(c * std::abs(j - j0)));
  }
  DecayCertificate cert;
  cert.c = c;
  cert.C = C;
  double ratio = 0.0;
  for (int j = 1; j <= field.J; ++j) {
    const double m = std::abs(field.at(j));
    if (m < 1e-250) continue;
    ratio = std::max(ratio, m * std::exp(c * std::abs(j - j0)) / C);
  }
  cert.sup_ratio = ratio;
  return cert;
}

SurfaceWaveProfile residue_at_root(const Scheme& s, const LopatinskiiRoot& root, int j0, int J,
                                   bool parallel) {
  if (!root.simple)
    throw AssumptionError("residue_at_root: root is not simple; decomposition refused");
  if (j0 < 1) throw NumericalError("residue_at_root: j0 must be >= 1");
  const Complex zk = root.z;

  // Closed form: W(j0) = E D (-a_p^{-1} B M^{-j0} pi^u e) with D = adj(B E)/Delta'.
  const InvariantSplit I = invariant_split(s, zk);
  const StableBasis sb = stable_basis(s, zk);  // unnormalized Vandermonde, determinant basis
  const Eigen::MatrixXcd B = boundary_matrix(s).cast<Complex>();
  const double ap = s.coeff(s.p);

  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.size());
  e(0) = 1.0;
  const Eigen::VectorXcd du1 = apply_inverse_pow(I.Au, (I.Cu * e).eval(), j0) / ap;
  const Eigen::VectorXcd arg = -(B * (I.Vu * du1));

  const Eigen::MatrixXcd BE = B * sb.columns;
  Eigen::MatrixXcd adj(s.r, s.r);
  if (s.r == 1) {
    adj(0, 0) = 1.0;
  } else {
    for (int i = 0; i < s.r; ++i)
      for (int j = 0; j < s.r; ++j) {
        Eigen::MatrixXcd minor(s.r - 1, s.r - 1);
        for (int a = 0, ai = 0; a < s.r; ++a) {
          if (a == j) continue;
          for (int b = 0, bi = 0; b < s.r; ++b) {
            if (b == i) continue;
            minor(ai, bi++) = BE(a, b);
          }
          ++ai;
        }
        adj(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * minor.determinant();
      }
  }
  const Complex dprime = lopatinskii_derivative(s, zk);
  const Eigen::VectorXcd gamma = (adj / dprime) * arg;  // coefficients of W(j0) in sb.columns

  SurfaceWaveProfile prof;
  prof.root = root;
  prof.j0 = j0;
  prof.J = J;
  prof.r = s.r;
  prof.values.assign(static_cast<size_t>(J + s.r), Complex(0.0));

  // w(j, j0) = last entry of M^{j+r-1} W(j0); iterate inside the stable basis.
  Eigen::MatrixXcd As_det = Eigen::MatrixXcd::Zero(s.r, s.r);
  if (!sb.schur && !sb.kappas.empty())
    for (int i = 0; i < s.r; ++i) As_det(i, i) = sb.kappas[static_cast<size_t>(i)];
  else
    As_det = sb.columns.adjoint() * companion(s, zk) * sb.columns;  // unitary columns
  Eigen::VectorXcd g = gamma;
  for (int m = 0; m <= J + s.r - 1; ++m) {
    const Eigen::VectorXcd W = sb.columns * g;
    const int jv = (1 - s.r) + m;
    Complex v = W(s.size() - 1);
    if (std::abs(v) < 1e-300) v = 0.0;
    prof.values[static_cast<size_t>(m)] = v;
    g = (As_det * g).eval();
  }

  // Quadrature cross-check on a window around the boundary.
  const int Jq = std::min(J, std::max(80, j0 + 70));
  const int n_nodes = 64;
  const double radius = 1e-3;
  std::vector<std::vector<Complex>> node_fields(n_nodes);
#pragma omp parallel for schedule(static) if (parallel)
  for (int m = 0; m < n_nodes; ++m) {
    const double phi = 2.0 * kPi * (m + 0.5) / n_nodes;
    const Complex zm = zk + radius * Complex(std::cos(phi), std::sin(phi));
    node_fields[static_cast<size_t>(m)] = structured_impl(s, zm, j0, Jq, 1e14).values;
  }
  std::vector<Complex> quad(static_cast<size_t>(Jq + s.r), Complex(0.0));
  for (int m = 0; m < n_nodes; ++m) {
    const double phi = 2.0 * kPi * (m + 0.5) / n_nodes;
    const Complex w = radius * Complex(std::cos(phi), std::sin(phi)) / double(n_nodes);
    for (size_t i = 0; i < quad.size(); ++i) quad[i] += w * node_fields[static_cast<size_t>(m)][i];
  }
  double diff = 0.0;
  for (size_t i = 0; i < quad.size(); ++i) diff = std::max(diff, std::abs(quad[i] - prof.values[i]));
  prof.method_diff = diff;
  if (diff > 1e-6)
    throw NumericalError("residue_at_root: quadrature and closed form disagree beyond 1e-6 "
                         "(multiple root or conditioning failure)");

  // decay certificate |w| <= C exp(-c (j + j0))
  std::vector<double> xs, ys;
  for (int j = 1; j <= J; ++j) {
    const double m = std::abs(prof.at(j));
    if (m < 1e-250) break;
    xs.push_back(j);
    ys.push_back(std::log(m));
  }
  if (xs.size() >= 4) {
    const auto line = detail::fit_line(xs, ys);
    prof.decay_c = -line.slope;
    double C = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
      C = std::max(C, std::exp(ys[i] + prof.decay_c * (xs[i] + j0)));
    prof.decay_C = C;
  }
  return prof;
}

DecayCertificate remainder_bound_check(const Scheme& s, const LopatinskiiRoot& root,
                                       const SurfaceWaveProfile& profile, int j0, double radius,
                                       int n_samples) {
  const int J = profile.J;
  DecayCertificate cert;
  cert.c = std::numeric_limits<double>::infinity();
  double sup_ratio = 0.0;
  std::vector<std::pair<int, double>> all;  // (|j-j0|, |R|)
  for (int m = 0; m < n_samples; ++m) {
    const double phi = 2.0 * kPi * (m + 0.5) / n_samples;
    const Complex z = root.z + radius * Complex(std::cos(phi), std::sin(phi));
    const SpatialGreenField G = structured_impl(s, z, j0, J, 1e14);
    std::vector<double> xs, ys;
    for (int j = 1; j <= J - 2 * s.r; ++j) {
      const double R = std::abs(G.at(j) - profile.at(j) / (z - root.z));
      if (R < 1e-250) continue;
      all.emplace_back(std::abs(j - j0), R);
      xs.push_back(std::abs(j - j0));
      ys.push_back(std::log(R));
    }
    if (xs.size() >= 6) cert.c = std::min(cert.c, -detail::fit_line(xs, ys).slope);
  }
  if (!std::isfinite(cert.c) || cert.c <= 0.0) cert.c = 0.0;
  for (const auto& [d, R] : all) cert.C = std::max(cert.C, R * std::exp(cert.c * d));
  for (const auto& [d, R] : all)
    sup_ratio = std::max(sup_ratio, R * std::exp(cert.c * d) / cert.C);
  cert.sup_ratio = sup_ratio;
  return cert;
}

}  // namespace fdstab
