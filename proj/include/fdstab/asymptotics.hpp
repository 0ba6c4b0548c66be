#pragma once

#include <map>

#include "fdstab/evolution.hpp"
#include "fdstab/resolvent.hpp"

namespace fdstab {

/// Temporal kernel minus the surface-wave sum, per snapshot time.
struct DecompositionReport {
  int j0 = 1;
  int J = 0;
  int r = 1;
  std::vector<int> n_list;
  std::vector<SurfaceWaveProfile> surface;         // one entry per determinant root
  std::vector<std::vector<Complex>> remainders;    // [n_index][j - (1-r)]
  std::map<int, double> remainder_sup;             // sup_j |R^n| over the support cone
  double max_imag = 0.0;                           // must vanish for real data

  Complex remainder_at(size_t ni, int j) const {
    return remainders[ni][static_cast<size_t>(j - (1 - r))];
  }
};

/// R^n(j, j0) = G^n(j, j0) - sum_k w_k(j, j0) z_k^n for each n in n_list.
/// Profiles must cover the window J; non-simple roots are refused.
DecompositionReport decompose(const Scheme& s, int j0, const std::vector<int>& n_list,
                              const std::vector<SurfaceWaveProfile>& profiles, int J);

/// Fitted bound |R^n| <= C n^{-1/(2mu)} exp(-omega (|j-j0-alpha n| / n^{1/(2mu)})^{2mu/(2mu-1)}).
struct GaussianCertificate {
  int mu = 1;
  double alpha = 0.0;
  double C = 0.0;
  double omega = 0.0;
  std::vector<int> n_range;
  double max_violation = 0.0;  // over the checked set (scaled values above 1e-2 of the peak)
};

/// Rescales each remainder snapshot, extracts the per-bin envelope, fits C and
/// omega by least squares of log y against x^{2mu/(2mu-1)} pooled over n, and
/// reports the worst exceedance.  Throws when the profiles do not collapse
/// (violation > 2): wrong mu or a missed root.
GaussianCertificate fit_gaussian(const DecompositionReport& report, const DissipationFit& fit,
                                 const Scheme& s);

struct PowerBoundCertificate {
  double bound = 0.0;          // sup_n ||T^n|| <= bound
  double surface_term = 0.0;   // Cauchy-Schwarz mass of the surface-wave kernels
  double gaussian_term = 0.0;  // worst l1 mass of the fitted bulk kernel
  double probe_max = 0.0;      // largest probed ||T^n f|| / ||f||
};

/// Two-term bound: exponential surface kernels (via their (C, c) certificates
/// over several sources) plus the l1 mass of the fitted bulk kernel, checked
/// against the norm probe.  Throws when the probe exceeds the bound.
PowerBoundCertificate certify_power_bound(const Scheme& s, const DecompositionReport& report,
                                          const GaussianCertificate& cert,
                                          const std::vector<PowerProbePoint>& probe);

}  // namespace fdstab
