#include "fdstab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace fdstab {

namespace {

// Relative floor of the checked set: the certificate covers scaled remainder
// values within two decades of the pooled peak.
constexpr double kCheckedFloor = 1e-2;
constexpr int kBins = 96;

struct ScaledPoint {
  double x;  // (j - j0 - alpha n) / n^{1/(2mu)}
  double u;  // |x|^{2mu/(2mu-1)}
  double y;  // |R^n(j)| * n^{1/(2mu)}
};

}  // namespace

DecompositionReport decompose(const Scheme& s, int j0, const std::vector<int>& n_list,
                              const std::vector<SurfaceWaveProfile>& profiles, int J) {
  for (const auto& prof : profiles) {
    if (!prof.root.simple)
      throw AssumptionError("decompose: non-simple determinant root; decomposition refused");
    if (prof.J < J || prof.j0 != j0)
      throw NumericalError("decompose: profile window does not cover the requested window");
  }
  const auto snaps = temporal_green_snapshots(s, j0, n_list, J);

  DecompositionReport rep;
  rep.j0 = j0;
  rep.J = J;
  rep.r = s.r;
  rep.n_list = n_list;
  rep.surface = profiles;

  for (const auto& snap : snaps) {
    std::vector<Complex> R(snap.values);
    for (const auto& prof : profiles) {
      const Complex zn = std::pow(prof.root.z, snap.n);
      for (int j = 1 - s.r; j <= J; ++j)
        R[static_cast<size_t>(j - (1 - s.r))] -= prof.at(j) * zn;
    }
    double sup = 0.0;
    const int lo = std::max(1, j0 - s.p * snap.n);
    const int hi = std::min(J, j0 + s.r * snap.n);
    for (int j = lo; j <= hi; ++j) {
      const Complex v = R[static_cast<size_t>(j - (1 - s.r))];
      rep.max_imag = std::max(rep.max_imag, std::abs(v.imag()));
      sup = std::max(sup, std::abs(v));
    }
    rep.remainder_sup[snap.n] = sup;
    rep.remainders.push_back(std::move(R));
  }
  return rep;
}

GaussianCertificate fit_gaussian(const DecompositionReport& report, const DissipationFit& fit,
                                 const Scheme& s) {
  if (report.n_list.empty() || report.n_list.front() < 100)
    throw NumericalError("fit_gaussian: snapshot list must start at n >= 100");
  if (report.n_list.back() < 8 * report.n_list.front())
    throw NumericalError("fit_gaussian: snapshot range must span max/min >= 8");

  const int mu = fit.mu;
  const double alpha = s.lambda_a;
  const double q = 2.0 * mu / (2.0 * mu - 1.0);

  std::vector<std::vector<ScaledPoint>> per_n(report.n_list.size());
  double ymax = 0.0;
  for (size_t ni = 0; ni < report.n_list.size(); ++ni) {
    const int n = report.n_list[static_cast<size_t>(ni)];
    const double scale = std::pow(double(n), 1.0 / (2.0 * mu));
    const int lo = std::max(1, report.j0 - s.p * n);
    const int hi = std::min(report.J, report.j0 + s.r * n);
    for (int j = lo; j <= hi; ++j) {
      const double y = std::abs(report.remainder_at(ni, j)) * scale;
      if (y <= 0.0) continue;
      const double x = (j - report.j0 - alpha * n) / scale;
      per_n[ni].push_back({x, std::pow(std::abs(x), q), y});
      ymax = std::max(ymax, y);
    }
  }

  // Per-snapshot upper envelope over x-bins of the checked set; oscillatory
  // kernels dip to zero between nodes, the envelope is what the bound is about.
  double xmin = 0.0, xmax = 0.0;
  for (const auto& pts : per_n)
    for (const auto& p : pts)
      if (p.y >= kCheckedFloor * ymax) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
      }
  const double width = std::max(1e-9, (xmax - xmin) / kBins);
  std::vector<ScaledPoint> checked;  // one envelope point per (n, bin)
  for (const auto& pts : per_n) {
    std::vector<ScaledPoint> env(static_cast<size_t>(kBins) + 1, ScaledPoint{0, 0, -1});
    for (const auto& p : pts) {
      if (p.y < kCheckedFloor * ymax) continue;
      const size_t b = static_cast<size_t>(std::min(double(kBins), (p.x - xmin) / width));
      if (p.y > env[b].y) env[b] = p;
    }
    for (const auto& e : env)
      if (e.y > 0.0) checked.push_back(e);
  }
  if (checked.size() < 6) throw NumericalError("fit_gaussian: too few envelope samples");
  std::vector<double> us, lys;
  for (const auto& e : checked) {
    us.push_back(e.u);
    lys.push_back(std::log(e.y));
  }
  const auto line = detail::fit_line(us, lys);

  GaussianCertificate cert;
  cert.mu = mu;
  cert.alpha = alpha;
  cert.omega = -line.slope;
  cert.C = std::exp(line.intercept);
  cert.n_range = report.n_list;
  if (!(cert.omega > 0.0))
    throw AssumptionError("fit_gaussian: fitted envelope does not decay (omega <= 0); "
                          "wrong mu or a missed root");

  double viol = 0.0;
  for (const auto& p : checked)
    viol = std::max(viol, p.y / (cert.C * std::exp(-cert.omega * p.u)));
  cert.max_violation = viol;
  if (viol > 2.0)
    throw AssumptionError("fit_gaussian: pooled profiles do not collapse (violation " +
                          std::to_string(viol) + " > 2); wrong mu or a missed root");
  return cert;
}

PowerBoundCertificate certify_power_bound(const Scheme& s, const DecompositionReport& report,
                                          const GaussianCertificate& cert,
                                          const std::vector<PowerProbePoint>& probe) {
  PowerBoundCertificate out;

  // Surface kernels: |w_k(j, j0)| <= C_k exp(-c_k (j + j0)) fitted over several
  // sources, then the Cauchy-Schwarz operator bound C_k S(c_k) with
  // S(c) = e^{-2c} / (1 - e^{-2c}).
  for (const auto& prof : report.surface) {
    const int Jw = std::min(prof.J, 200);
    std::vector<SurfaceWaveProfile> extra;
    for (int j0 : {1, 2, 4, 8}) {
      if (j0 == prof.j0) continue;
      extra.push_back(residue_at_root(s, prof.root, j0, Jw));
    }
    std::vector<const SurfaceWaveProfile*> profs = {&prof};
    for (const auto& e : extra) profs.push_back(&e);

    // rate in j at fixed source, rate in the source index at fixed j
    std::vector<double> xs, ys;
    for (int j = 1; j <= Jw; ++j) {
      const double m = std::abs(prof.at(j));
      if (m < 1e-250) break;
      xs.push_back(j);
      ys.push_back(std::log(m));
    }
    double c_j = xs.size() >= 4 ? -detail::fit_line(xs, ys).slope : 0.0;
    xs.clear();
    ys.clear();
    for (const auto* pr : profs) {
      const double m = std::abs(pr->at(1));
      if (m < 1e-250) continue;
      xs.push_back(pr->j0);
      ys.push_back(std::log(m));
    }
    double c_src = xs.size() >= 3 ? -detail::fit_line(xs, ys).slope : c_j;
    const double c = std::max(1e-6, std::min(c_j, c_src));

    double C = 0.0;
    for (const auto* pr : profs)
      for (int j = 1; j <= Jw; ++j) {
        const double m = std::abs(pr->at(j));
        if (m < 1e-250) continue;
        C = std::max(C, m * std::exp(c * (j + pr->j0)));
      }
    const double Sc = std::exp(-2.0 * c) / (1.0 - std::exp(-2.0 * c));
    out.surface_term += C * Sc;
  }

  // Bulk kernel: worst l1 mass of the fitted envelope over the certified range.
  const double q = 2.0 * cert.mu / (2.0 * cert.mu - 1.0);
  for (int n : cert.n_range) {
    const double scale = std::pow(double(n), 1.0 / (2.0 * cert.mu));
    double mass = 0.0;
    for (int m = -s.p * n; m <= s.r * n; ++m) {
      const double x = std::abs(m - cert.alpha * n) / scale;
      mass += cert.C * cert.max_violation / scale * std::exp(-cert.omega * std::pow(x, q));
    }
    out.gaussian_term = std::max(out.gaussian_term, mass);
  }

  out.bound = out.surface_term + out.gaussian_term;
  for (const auto& pt : probe) out.probe_max = std::max(out.probe_max, pt.sup_ratio);
  if (out.probe_max > out.bound)
    throw AssumptionError("certify_power_bound: probe envelope exceeds the certified constant; "
                          "fitted constants are invalid");
  return out;
}

}  // namespace fdstab
