#pragma once

#include <filesystem>

#include "fdstab/asymptotics.hpp"

namespace fdstab {

/// Flat structured-text scheme config.  Keys: r, p, lambda_a, a (array in
/// stencil order -r..p), p_b, b (one row per line, nu = 1-r..0), optional mu.
Scheme read_scheme_config(const std::filesystem::path& path);
void write_scheme_config(const std::filesystem::path& path, const Scheme& s);

/// The worked half-line example: modified Lax-Friedrichs with lambda a = 1/2,
/// D = 3/4 and the boundary coefficient tuned to place an eigenvalue at -1.
Scheme builtin_lf_example();

// CSV emitters.  All numbers are printed with %.17g, so repeated runs are
// byte-stable.
void write_spectrum_csv(const std::filesystem::path& path, const Scheme& s, int n_theta);
void write_eigencloud_csv(const std::filesystem::path& path, const Scheme& s, int n_theta,
                          const std::vector<double>& radii);
void write_lopatinskii_csv(const std::filesystem::path& path, const Scheme& s, int n_theta);
void write_spatial_csv(const std::filesystem::path& path, const SpatialGreenField& f);
void write_profile_csv(const std::filesystem::path& path, const SurfaceWaveProfile& p);
void write_temporal_csv(const std::filesystem::path& path,
                        const std::vector<TemporalGreenField>& snaps);
void write_probe_csv(const std::filesystem::path& path, const std::vector<PowerProbePoint>& pts);
void write_collapse_csv(const std::filesystem::path& path, const DecompositionReport& rep,
                        const GaussianCertificate& cert);
void write_certificate_csv(const std::filesystem::path& path, const GaussianCertificate& cert);

}  // namespace fdstab
