#include "fdstab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace fdstab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCoalesceGap = 1e-6;   // Vandermonde -> Schur fallback threshold
constexpr double kSplitGap = 1e-8;      // modulus gap below which the splitting is undefined
constexpr double kScanThreshold = 0.2;  // coarse |Delta| threshold for root candidates

std::vector<Complex> eigenvalues_of(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
  std::vector<Complex> ev(M.rows());
  for (int i = 0; i < M.rows(); ++i) ev[static_cast<size_t>(i)] = es.eigenvalues()(i);
  return ev;
}

bool modulus_arg_less(Complex a, Complex b) {
  const double da = std::abs(a), db = std::abs(b);
  if (std::abs(da - db) > 1e-12) return da < db;
  return std::arg(a) < std::arg(b);
}

Eigen::MatrixXcd vandermonde_columns(int n, const std::vector<Complex>& kappas) {
  Eigen::MatrixXcd V(n, static_cast<int>(kappas.size()));
  for (size_t c = 0; c < kappas.size(); ++c) {
    Complex pw = 1.0;
    for (int i = n - 1; i >= 0; --i) {
      V(i, static_cast<int>(c)) = pw;
      pw *= kappas[c];
    }
  }
  return V;
}

struct Selection {
  std::vector<Complex> stable, unstable;
  bool extended = false;
};

Selection select_stable(const Scheme& s, Complex z, std::vector<Complex> ev) {
  Selection sel;
  std::sort(ev.begin(), ev.end(), modulus_arg_less);
  const int r = s.r;
  if (std::abs(z - 1.0) < branch_radius(s)) {
    sel.extended = true;
    const Complex kb = kappa_branch(s, z);
    size_t kb_idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ev.size(); ++i) {
      const double d = std::abs(ev[i] - kb);
      if (d < best) {
        best = d;
        kb_idx = i;
      }
    }
    std::vector<Complex> rest;
    for (size_t i = 0; i < ev.size(); ++i)
      if (i != kb_idx) rest.push_back(ev[i]);
    if (r >= 2 && std::abs(rest[static_cast<size_t>(r - 1)]) - std::abs(rest[static_cast<size_t>(r - 2)]) < kSplitGap)
      throw NumericalError("stable splitting undefined: modulus gap below 1e-8 near z = 1");
    sel.stable.assign(rest.begin(), rest.begin() + (r - 1));
    sel.stable.push_back(ev[kb_idx]);
    std::sort(sel.stable.begin(), sel.stable.end(), modulus_arg_less);
    sel.unstable.assign(rest.begin() + (r - 1), rest.end());
  } else {
    if (std::abs(ev[static_cast<size_t>(r)]) - std::abs(ev[static_cast<size_t>(r - 1)]) < kSplitGap)
      throw NumericalError("stable splitting undefined: modulus gap below 1e-8");
    sel.stable.assign(ev.begin(), ev.begin() + r);
    sel.unstable.assign(ev.begin() + r, ev.end());
  }
  return sel;
}

double min_pairwise_gap(const std::vector<Complex>& ev) {
  double g = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ev.size(); ++i)
    for (size_t j = i + 1; j < ev.size(); ++j) g = std::min(g, std::abs(ev[i] - ev[j]));
  return g;
}

struct SchurOrdered {
  Eigen::MatrixXcd Q, T;
};

// Move the selected eigenvalues to the leading diagonal block by adjacent
// unitary swaps of the complex Schur form.
SchurOrdered ordered_schur(const Eigen::MatrixXcd& A,
                           const std::function<bool(Complex)>& lead) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  Eigen::MatrixXcd Q = schur.matrixU();
  Eigen::MatrixXcd T = schur.matrixT();
  const int n = static_cast<int>(A.rows());
  std::vector<int> score(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) score[static_cast<size_t>(i)] = lead(T(i, i)) ? 0 : 1;

  auto swap_at = [&](int k) {
    const Complex t11 = T(k, k), t12 = T(k, k + 1), t22 = T(k + 1, k + 1);
    Eigen::Matrix2cd W;
    const Complex v1 = t12, v2 = t22 - t11;
    const double nn = std::sqrt(std::norm(v1) + std::norm(v2));
    if (nn < 1e-300) {
      W << 0, 1, 1, 0;  // identical block, plain permutation
    } else {
      W << v1 / nn, -std::conj(v2) / nn, v2 / nn, std::conj(v1) / nn;
    }
    T.block(k, 0, 2, n) = (W.adjoint() * T.block(k, 0, 2, n)).eval();
    T.block(0, k, n, 2) = (T.block(0, k, n, 2) * W).eval();
    Q.block(0, k, n, 2) = (Q.block(0, k, n, 2) * W).eval();
    T(k + 1, k) = 0.0;
  };

  for (int pass = 0; pass < n; ++pass) {
    bool moved = false;
    for (int k = 0; k + 1 < n; ++k) {
      if (score[static_cast<size_t>(k)] > score[static_cast<size_t>(k + 1)]) {
        swap_at(k);
        std::swap(score[static_cast<size_t>(k)], score[static_cast<size_t>(k + 1)]);
        moved = true;
      }
    }
    if (!moved) break;
  }
  return {Q, T};
}

std::function<bool(Complex)> membership_predicate(const std::vector<Complex>& inside,
                                                  const std::vector<Complex>& outside) {
  return [inside, outside](Complex k) {
    double din = std::numeric_limits<double>::infinity();
    double dout = std::numeric_limits<double>::infinity();
    for (const Complex& v : inside) din = std::min(din, std::abs(k - v));
    for (const Complex& v : outside) dout = std::min(dout, std::abs(k - v));
    return din <= dout;
  };
}

// Stable Vandermonde basis at z with column order matched to an anchor
// eigenvalue list (keeps the determinant holomorphic across a FD stencil).
Eigen::MatrixXcd stable_vandermonde_anchored(const Scheme& s, Complex z,
                                             const std::vector<Complex>& anchor) {
  auto ev = eigenvalues_of(companion(s, z));
  std::vector<Complex> matched;
  std::vector<bool> used(ev.size(), false);
  for (const Complex& a : anchor) {
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ev.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(ev[i] - a);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = true;
    matched.push_back(ev[best]);
  }
  return vandermonde_columns(s.size(), matched);
}

Complex determinant_with(const Scheme& s, Complex z, bool schur_basis) {
  return schur_basis ? lopatinskii_schur(s, z) : lopatinskii(s, z);
}

}  // namespace

Eigen::MatrixXcd companion(const Scheme& s, Complex z) {
  const int n = s.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  const double ap = s.coeff(s.p);
  for (int c = 0; c < n; ++c) {
    const int ell = s.p - 1 - c;
    M(0, c) = ((ell == 0 ? z : Complex(0.0)) - s.coeff(ell)) / ap;
  }
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  return M;
}

SpectralSplit split(const Scheme& s, Complex z, double tol) {
  if (!(tol > 0.0 && tol < 0.1)) throw NumericalError("split: tol must lie in (0, 0.1)");
  SpectralSplit out;
  out.tol = tol;
  for (const Complex& k : eigenvalues_of(companion(s, z))) {
    // every eigenvalue must solve z = sum a_ell kappa^ell
    Complex acc = 0.0;
    for (int l = -s.r; l <= s.p; ++l) acc += s.coeff(l) * std::pow(k, l);
    if (std::abs(z - acc) > 1e-9 * (1.0 + std::abs(z)))
      throw NumericalError("split: eigenvalue fails the symbol relation");
    const double m = std::abs(k);
    if (m < 1.0 - tol)
      out.stable.push_back(k);
    else if (m > 1.0 + tol)
      out.unstable.push_back(k);
    else
      out.central.push_back(k);
  }
  auto cmp = [](Complex a, Complex b) { return modulus_arg_less(a, b); };
  std::sort(out.stable.begin(), out.stable.end(), cmp);
  std::sort(out.unstable.begin(), out.unstable.end(), cmp);
  std::sort(out.central.begin(), out.central.end(), cmp);
  return out;
}

double branch_radius(const Scheme& s) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Complex& k : eigenvalues_of(companion(s, 1.0))) {
    if (std::abs(k - 1.0) < 1e-6) continue;
    gap = std::min(gap, std::abs(std::abs(k) - 1.0));
  }
  return 0.2 * std::min(1.0, gap);
}

Complex kappa_branch(const Scheme& s, Complex z) {
  if (std::abs(z - 1.0) > branch_radius(s) * (1.0 + 1e-12))
    throw NumericalError("kappa_branch: z outside the branch neighborhood of 1");
  const Complex pred = 1.0 - (z - 1.0) / s.lambda_a;
  const auto ev = eigenvalues_of(companion(s, z));
  int hits = 0;
  Complex best = ev[0];
  double bd = std::numeric_limits<double>::infinity();
  for (const Complex& k : ev) {
    const double d = std::abs(k - pred);
    if (d < 1e-8) ++hits;
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  if (hits >= 2) throw NumericalError("kappa_branch: two eigenvalues match the prediction");
  return best;
}

StableBasis stable_basis(const Scheme& s, Complex z) {
  const auto sel = select_stable(s, z, eigenvalues_of(companion(s, z)));
  if (min_pairwise_gap(sel.stable) < kCoalesceGap) {
    StableBasis sb = stable_basis_schur(s, z);
    sb.includes_kappa_branch = sel.extended;
    return sb;
  }
  StableBasis sb;
  sb.z = z;
  sb.kappas = sel.stable;
  sb.columns = vandermonde_columns(s.size(), sel.stable);
  sb.includes_kappa_branch = sel.extended;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sb.columns);
  if (svd.singularValues()(svd.singularValues().size() - 1) <= 1e-10)
    throw NumericalError("stable basis columns are numerically dependent");
  return sb;
}

StableBasis stable_basis_schur(const Scheme& s, Complex z) {
  const auto sel = select_stable(s, z, eigenvalues_of(companion(s, z)));
  const auto ord = ordered_schur(companion(s, z), membership_predicate(sel.stable, sel.unstable));
  StableBasis sb;
  sb.z = z;
  sb.columns = ord.Q.leftCols(s.r);
  sb.includes_kappa_branch = sel.extended;
  sb.schur = true;
  for (int i = 0; i < s.r; ++i) sb.kappas.push_back(ord.T(i, i));
  return sb;
}

Eigen::MatrixXd boundary_matrix(const Scheme& s) {
  // Augmented vector order: [w_p, ..., w_1, w_0, ..., w_{1-r}]; component w_m
  // sits at column p - m.  Rows run nu = 0 down to 1-r.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(s.r, s.size());
  for (int nu = 0; nu >= 1 - s.r; --nu) {
    const int row = -nu;
    B(row, s.p - nu) = 1.0;
    for (int ell = 1; ell <= s.p_b; ++ell) B(row, s.p - ell) = -s.bc(ell, nu);
  }
  return B;
}

Complex lopatinskii(const Scheme& s, Complex z) {
  const StableBasis sb = stable_basis(s, z);
  const Eigen::MatrixXcd BE = boundary_matrix(s).cast<Complex>() * sb.columns;
  return BE.determinant();
}

Complex lopatinskii_schur(const Scheme& s, Complex z) {
  const StableBasis sb = stable_basis_schur(s, z);
  const Eigen::MatrixXcd BE = boundary_matrix(s).cast<Complex>() * sb.columns;
  return BE.determinant();
}

Complex lopatinskii_derivative(const Scheme& s, Complex z0, double h) {
  const StableBasis sb = stable_basis(s, z0);
  const Eigen::MatrixXcd B = boundary_matrix(s).cast<Complex>();
  auto f = [&](Complex z) -> Complex {
    if (!sb.kappas.empty() && !sb.schur)
      return (B * stable_vandermonde_anchored(s, z, sb.kappas)).determinant();
    return lopatinskii(s, z);
  };
  return (-f(z0 + 2.0 * h) + 8.0 * f(z0 + h) - 8.0 * f(z0 - h) + f(z0 - 2.0 * h)) / (12.0 * h);
}

std::vector<double> lopatinskii_profile(const Scheme& s, const std::vector<double>& thetas,
                                        bool parallel) {
  std::vector<double> out(thetas.size());
  const auto eval = [&s](double th) {
    try {
      return std::abs(lopatinskii(s, Complex(std::cos(th), std::sin(th))));
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const int n = static_cast<int>(thetas.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = eval(thetas[static_cast<size_t>(i)]);
  } else {
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = eval(thetas[static_cast<size_t>(i)]);
  }
  return out;
}

std::vector<double> lopatinskii_profile_serial(const Scheme& s, const std::vector<double>& thetas) {
  return lopatinskii_profile(s, thetas, false);
}

std::vector<LopatinskiiRoot> find_roots(const Scheme& s, int n_theta, double tol) {
  return find_roots_with(s, n_theta, tol, /*schur_basis=*/false, /*parallel=*/true);
}

std::vector<LopatinskiiRoot> find_roots_with(const Scheme& s, int n_theta, double tol,
                                             bool schur_basis, bool parallel) {
  if (n_theta < 2048) throw NumericalError("find_roots: need n_theta >= 2048");
  const double excl = branch_radius(s);
  std::vector<double> thetas(static_cast<size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) thetas[static_cast<size_t>(i)] = -kPi + 2.0 * kPi * i / n_theta;

  std::vector<double> prof;
  if (schur_basis) {
    prof.resize(thetas.size());
    const int n = n_theta;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
      const double th = thetas[static_cast<size_t>(i)];
      try {
        prof[static_cast<size_t>(i)] =
            std::abs(lopatinskii_schur(s, Complex(std::cos(th), std::sin(th))));
      } catch (const std::exception&) {
        prof[static_cast<size_t>(i)] = std::numeric_limits<double>::infinity();
      }
    }
  } else {
    prof = lopatinskii_profile(s, thetas, parallel);
  }

  auto excluded = [&](double th) { return std::abs(th) < excl; };
  std::vector<double> seeds;
  for (int i = 0; i < n_theta; ++i) {
    const double th = thetas[static_cast<size_t>(i)];
    if (excluded(th)) continue;
    const double v = prof[static_cast<size_t>(i)];
    const double vm = prof[static_cast<size_t>((i + n_theta - 1) % n_theta)];
    const double vp = prof[static_cast<size_t>((i + 1) % n_theta)];
    if (v <= vm && v <= vp && v < kScanThreshold) seeds.push_back(th);
  }

  const double hfd = 1e-7;
  auto refine = [&](double th) {
    for (int it = 0; it < 60; ++it) {
      const Complex f = determinant_with(s, Complex(std::cos(th), std::sin(th)), schur_basis);
      const Complex fp = determinant_with(s, Complex(std::cos(th + hfd), std::sin(th + hfd)), schur_basis);
      const Complex fm = determinant_with(s, Complex(std::cos(th - hfd), std::sin(th - hfd)), schur_basis);
      const Complex df = (fp - fm) / (2.0 * hfd);
      if (std::abs(df) == 0.0) break;
      double step = -(std::conj(df) * f).real() / std::norm(df);
      const double cap = 2.0 * kPi / n_theta;
      step = std::clamp(step, -2.0 * cap, 2.0 * cap);
      th += step;
      if (th > kPi) th -= 2.0 * kPi;
      if (th < -kPi) th += 2.0 * kPi;
      if (std::abs(step) < 1e-14) break;
    }
    return th;
  };

  std::vector<LopatinskiiRoot> roots;
  for (double seed : seeds) {
    const double th = refine(seed);
    if (excluded(th)) continue;
    const Complex z(std::cos(th), std::sin(th));
    const double da = std::abs(determinant_with(s, z, schur_basis));
    if (da >= std::max(tol, 1e-8)) continue;
    bool dup = false;
    for (const auto& rt : roots)
      if (std::abs(rt.z - z) < 1e-9) dup = true;
    if (dup) continue;
    LopatinskiiRoot root;
    root.z = z;
    root.theta = th;
    root.delta_abs = da;
    root.dprime_abs = std::abs(lopatinskii_derivative(s, z));
    root.simple = root.dprime_abs > 1e-3;
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end(),
            [](const LopatinskiiRoot& a, const LopatinskiiRoot& b) { return a.theta < b.theta; });
  return roots;
}

double boundary_iso_margin_at_one(const Scheme& s) {
  Eigen::MatrixXcd cols = stable_basis(s, 1.0).columns;
  for (int c = 0; c < cols.cols(); ++c) cols.col(c).normalize();
  const Eigen::MatrixXcd BE = boundary_matrix(s).cast<Complex>() * cols;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(BE);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

InvariantSplit invariant_split(const Scheme& s, Complex z, bool force_schur) {
  const Eigen::MatrixXcd M = companion(s, z);
  const auto sel = select_stable(s, z, eigenvalues_of(M));
  InvariantSplit out;
  out.z = z;
  out.extended = sel.extended;
  out.stable_evals = sel.stable;
  out.unstable_evals = sel.unstable;

  std::vector<Complex> all(sel.stable);
  all.insert(all.end(), sel.unstable.begin(), sel.unstable.end());
  const bool vander_ok = !force_schur && min_pairwise_gap(all) >= kCoalesceGap;
  if (vander_ok) {
    out.Vs = vandermonde_columns(s.size(), sel.stable);
    out.Vu = vandermonde_columns(s.size(), sel.unstable);
    for (int c = 0; c < out.Vs.cols(); ++c) out.Vs.col(c).normalize();
    for (int c = 0; c < out.Vu.cols(); ++c) out.Vu.col(c).normalize();
    out.As = Eigen::MatrixXcd::Zero(s.r, s.r);
    out.Au = Eigen::MatrixXcd::Zero(s.p, s.p);
    for (int i = 0; i < s.r; ++i) out.As(i, i) = sel.stable[static_cast<size_t>(i)];
    for (int i = 0; i < s.p; ++i) out.Au(i, i) = sel.unstable[static_cast<size_t>(i)];
  } else {
    out.schur = true;
    const auto pred = membership_predicate(sel.stable, sel.unstable);
    const auto os = ordered_schur(M, pred);
    out.Vs = os.Q.leftCols(s.r);
    out.As = os.T.topLeftCorner(s.r, s.r);
    const auto ou = ordered_schur(M, [pred](Complex k) { return !pred(k); });
    out.Vu = ou.Q.leftCols(s.p);
    out.Au = ou.T.topLeftCorner(s.p, s.p);
  }

  Eigen::MatrixXcd full(s.size(), s.size());
  full << out.Vs, out.Vu;
  const Eigen::MatrixXcd Y = full.partialPivLu().inverse();
  out.Cs = Y.topRows(s.r);
  out.Cu = Y.bottomRows(s.p);
  return out;
}

}  // namespace fdstab
