// Command-line driver: scheme validation, spectrum and determinant scans,
// resolvent and temporal kernels, surface-wave extraction, and the full
// stability certification pipeline.

#include <CLI11.hpp>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>

#include "fdstab/io.hpp"
#include "fdstab/svg.hpp"

using namespace fdstab;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  bool builtin_lf = false;
  std::string out = ".";
  int j0 = 3;
  int n_max = 2000;
  int window = 0;  // 0 = sized from the support cone
  double rho = 1.2;
  int nodes = 512;
  double tol = 1e-8;
  std::uint64_t seed = 20240811;
  int n_theta = 4096;
  double z_re = 1.5;
  double z_im = 0.0;
  int trials = 12;
};

bool g_failed = false;

void check_line(bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? " ok " : "FAIL", name.c_str(), detail.c_str());
  if (!ok) g_failed = true;
}

void warn_line(const std::string& name, const std::string& detail) {
  std::printf("[warn] %s: %s\n", name.c_str(), detail.c_str());
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

Scheme load_scheme(const Options& opt) {
  if (opt.builtin_lf) return builtin_lf_example();
  if (opt.config.empty()) throw NumericalError("no scheme config given (path or --builtin-lf)");
  return read_scheme_config(opt.config);
}

int auto_window(const Scheme& s, int j0, int n) { return j0 + s.r * n + s.p + s.r + 8; }

void print_report(const ValidationReport& rep) {
  for (const auto& c : rep.checks)
    check_line(c.pass, "validate." + c.name,
               c.detail.empty() ? fmt("margin=%.6g", c.margin) : c.detail);
}

int cmd_validate(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const ValidationReport rep = validate(s);
  print_report(rep);
  if (!rep.all_pass()) {
    std::printf("RESULT FAIL kind=assumption\n");
    return 2;
  }
  std::printf("RESULT PASS\n");
  return 0;
}

int cmd_spectrum(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  write_spectrum_csv(out / "spectrum.csv", s, opt.n_theta);
  write_eigencloud_csv(out / "eigencloud.csv", s, std::max(64, opt.n_theta / 16), {1.0, 1.2, 2.0});
  std::vector<LopatinskiiRoot> roots;
  try {
    roots = find_roots(s, opt.n_theta, opt.tol);
  } catch (const std::exception& e) {
    warn_line("spectrum.roots", e.what());
  }
  write_spectrum_svg(out / "spectrum.svg", s, roots);
  const auto [ok, delta0] = check_dissipativity(s, std::max(1024, opt.n_theta), 0.1);
  check_line(ok, "spectrum.dissipativity", fmt("delta0=%.6g", delta0));
  std::printf("wrote %s, %s, %s\n", (out / "spectrum.csv").c_str(),
              (out / "eigencloud.csv").c_str(), (out / "spectrum.svg").c_str());
  std::printf("RESULT %s\n", g_failed ? "FAIL kind=assumption" : "PASS");
  return g_failed ? 2 : 0;
}

int cmd_lopatinskii(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  write_lopatinskii_csv(out / "lopatinskii.csv", s, opt.n_theta);
  const double margin = boundary_iso_margin_at_one(s);
  check_line(margin > 1e-8, "lopatinskii.at-one", fmt("sigma_min=%.6g", margin));
  const auto roots = find_roots(s, opt.n_theta, opt.tol);
  std::printf("roots: %zu\n", roots.size());
  for (const auto& rt : roots) {
    std::printf("  z = %.12g + %.12gi  theta=%.12g  |Delta|=%.3g  |Delta'|=%.3g  simple=%d\n",
                rt.z.real(), rt.z.imag(), rt.theta, rt.delta_abs, rt.dprime_abs, rt.simple);
    check_line(rt.simple, "lopatinskii.simple", fmt("|Delta'|=%.6g", rt.dprime_abs));
  }
  std::printf("RESULT %s\n", g_failed ? "FAIL kind=assumption" : "PASS");
  return g_failed ? 2 : 0;
}

int cmd_green_spatial(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  const Complex z(opt.z_re, opt.z_im);
  const int J = opt.window > 0 ? opt.window : std::max(400, opt.j0 + 100);
  const SpatialGreenField direct = spatial_green_direct(s, z, opt.j0, J);
  const SpatialGreenField structured = spatial_green_structured(s, z, opt.j0, direct.J);
  double diff = 0.0;
  for (int j = 1; j <= std::min(direct.J, structured.J) - 2 * s.p; ++j)
    diff = std::max(diff, std::abs(direct.at(j) - structured.at(j)));
  check_line(diff < 1e-10, "green-spatial.two-routes", fmt("max|direct-structured|=%.3g", diff));
  const DecayCertificate cert = fit_decay(structured);
  std::printf("decay: C=%.6g c=%.6g\n", cert.C, cert.c);
  write_spatial_csv(out / "green_spatial.csv", structured);
  std::printf("wrote %s\n", (out / "green_spatial.csv").c_str());
  std::printf("RESULT %s\n", g_failed ? "FAIL kind=numerical" : "PASS");
  return g_failed ? 3 : 0;
}

int cmd_green_temporal(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  std::vector<int> ns;
  for (int k = 4; k >= 1; --k) {
    const int n = opt.n_max / (1 << (k - 1));
    if (n >= 1 && (ns.empty() || n > ns.back())) ns.push_back(n);
  }
  const int J = opt.window > 0 ? opt.window : auto_window(s, opt.j0, ns.back());
  const auto snaps = temporal_green_snapshots(s, opt.j0, ns, J);
  write_temporal_csv(out / "green_temporal.csv", snaps);
  write_temporal_svg(out / "green_temporal.svg", snaps, nullptr, nullptr);

  const int nc = std::min(50, ns.front());
  const TemporalGreenField steps = temporal_green(s, opt.j0, nc, auto_window(s, opt.j0, nc));
  const TemporalGreenField quad =
      temporal_green_contour(s, opt.j0, nc, opt.rho, opt.nodes, steps.J);
  double diff = 0.0;
  for (int j = 1; j <= steps.J - s.p; ++j) diff = std::max(diff, std::abs(steps.at(j) - quad.at(j)));
  check_line(diff < 1e-8, "green-temporal.contour-check",
             fmt("n=%d max|step-contour|=%.3g", nc, diff));
  std::printf("wrote %s, %s\n", (out / "green_temporal.csv").c_str(),
              (out / "green_temporal.svg").c_str());
  std::printf("RESULT %s\n", g_failed ? "FAIL kind=numerical" : "PASS");
  return g_failed ? 3 : 0;
}

int cmd_residue(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  const auto roots = find_roots(s, opt.n_theta, opt.tol);
  if (roots.empty()) {
    std::printf("no determinant roots on the circle; nothing to extract\n");
    std::printf("RESULT PASS\n");
    return 0;
  }
  const int J = opt.window > 0 ? opt.window : 400;
  int k = 0;
  for (const auto& rt : roots) {
    check_line(rt.simple, "residue.simple-root", fmt("theta=%.6g", rt.theta));
    if (!rt.simple) continue;
    const SurfaceWaveProfile prof = residue_at_root(s, rt, opt.j0, J);
    check_line(prof.method_diff < 1e-8, "residue.two-routes",
               fmt("max|quadrature-closed|=%.3g", prof.method_diff));
    const DecayCertificate rem = remainder_bound_check(s, rt, prof, opt.j0, 1e-2, 16);
    std::printf("surface wave %d: |w(1,j0)|=%.6g decay_c=%.6g remainder: C=%.4g c=%.4g\n", k,
                std::abs(prof.at(1)), prof.decay_c, rem.C, rem.c);
    write_profile_csv(out / fmt("residue_%d.csv", k), prof);
    ++k;
  }
  std::printf("RESULT %s\n", g_failed ? "FAIL kind=assumption" : "PASS");
  return g_failed ? 2 : 0;
}

int cmd_power_bound(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);
  const auto probe = power_norm_probe(s, opt.n_max, 40, opt.trials, opt.seed);
  write_probe_csv(out / "power_probe.csv", probe);
  double sup = 0.0;
  for (const auto& pt : probe) sup = std::max(sup, pt.sup_ratio);
  std::printf("probe: n_max=%d sup=%.6g last=%.6g\n", opt.n_max, sup,
              probe.back().sup_ratio);
  std::printf("wrote %s\n", (out / "power_probe.csv").c_str());
  std::printf("RESULT PASS\n");
  return 0;
}

int cmd_certify(const Options& opt) {
  const Scheme s = load_scheme(opt);
  const fs::path out(opt.out);
  fs::create_directories(out);

  const ValidationReport rep = validate(s);
  print_report(rep);
  if (!rep.all_pass()) {
    std::printf("RESULT FAIL kind=assumption\n");
    return 2;
  }
  const DissipationFit fit = fit_dissipation(s);
  const EnvelopeSet env = envelope_c0(s, fit);
  std::printf("fit: mu=%d beta=%.12g  envelope: c0=%.6g delta0=%.6g\n", fit.mu, fit.beta, env.c0,
              env.delta0);

  const double margin = boundary_iso_margin_at_one(s);
  check_line(margin > 1e-8, "certify.at-one", fmt("sigma_min=%.6g", margin));
  const auto roots = find_roots(s, opt.n_theta, opt.tol);
  std::printf("determinant roots on the circle: %zu\n", roots.size());
  for (const auto& rt : roots)
    check_line(rt.simple, "certify.simple-root",
               fmt("theta=%.6g |Delta'|=%.3g", rt.theta, rt.dprime_abs));
  if (g_failed) {
    std::printf("RESULT FAIL kind=assumption\n");
    return 2;
  }

  const std::vector<int> n_list = {100, 200, 400, 800, 1600};
  if (opt.n_max < n_list.back())
    throw NumericalError("certify: needs --n-max >= 1600 for the snapshot sweep");
  const int J = opt.window > 0 ? opt.window : auto_window(s, opt.j0, n_list.back());

  std::vector<SurfaceWaveProfile> profiles;
  for (const auto& rt : roots) {
    profiles.push_back(residue_at_root(s, rt, opt.j0, J));
    check_line(profiles.back().method_diff < 1e-8, "certify.residue-two-routes",
               fmt("max diff=%.3g", profiles.back().method_diff));
  }
  const DecompositionReport report = decompose(s, opt.j0, n_list, profiles, J);
  check_line(report.max_imag < 1e-12, "certify.real-remainder",
             fmt("max imag=%.3g", report.max_imag));

  GaussianCertificate cert;
  try {
    cert = fit_gaussian(report, fit, s);
  } catch (const AssumptionError& e) {
    check_line(false, "certify.collapse", e.what());
    std::printf("RESULT FAIL kind=assumption\n");
    return 2;
  }
  check_line(true, "certify.collapse",
             fmt("C=%.4g omega=%.4g max_violation=%.4g", cert.C, cert.omega, cert.max_violation));
  if (cert.max_violation > 1.05)
    warn_line("certify.collapse",
              fmt("max_violation %.4g above the 1.05 target (skewed kernel tails)",
                  cert.max_violation));

  if (!profiles.empty()) {
    const auto g500 = temporal_green(s, opt.j0, 500, auto_window(s, opt.j0, 500));
    double dev = 0.0;
    for (int j = 1; j <= 10; ++j) {
      Complex wsum = 0.0;
      for (const auto& p : profiles) wsum += p.at(j) * std::pow(p.root.z, 500);
      dev = std::max(dev, std::abs(std::abs(g500.at(j)) - std::abs(wsum)));
    }
    const double ref = 0.05 * std::abs(profiles.front().at(1));
    check_line(dev < ref, "certify.boundary-envelope",
               fmt("n=500 max dev=%.3g (5%% ref %.3g)", dev, ref));
  }

  const auto probe = power_norm_probe(s, opt.n_max, 40, opt.trials, opt.seed);
  PowerBoundCertificate pb;
  try {
    pb = certify_power_bound(s, report, cert, probe);
  } catch (const AssumptionError& e) {
    check_line(false, "certify.power-bound", e.what());
    std::printf("RESULT FAIL kind=assumption\n");
    return 2;
  }
  check_line(pb.probe_max <= pb.bound, "certify.power-bound",
             fmt("bound=%.4g (surface=%.4g bulk=%.4g) probe=%.4g", pb.bound, pb.surface_term,
                 pb.gaussian_term, pb.probe_max));

  write_spectrum_csv(out / "spectrum.csv", s, opt.n_theta);
  write_spectrum_svg(out / "spectrum.svg", s, roots);
  write_lopatinskii_csv(out / "lopatinskii.csv", s, opt.n_theta);
  for (size_t k = 0; k < profiles.size(); ++k)
    write_profile_csv(out / fmt("residue_%zu.csv", k), profiles[k]);
  const auto snaps = temporal_green_snapshots(s, opt.j0, {100, 400, 1600}, J);
  write_temporal_csv(out / "green_temporal.csv", snaps);
  write_temporal_svg(out / "green_temporal.svg", snaps, &cert,
                     profiles.empty() ? nullptr : &profiles.front());
  write_collapse_csv(out / "collapse.csv", report, cert);
  write_certificate_csv(out / "certificate.csv", cert);
  write_probe_csv(out / "power_probe.csv", probe);
  std::printf("artifacts written to %s\n", out.c_str());

  std::printf("RESULT %s\n", g_failed ? "FAIL kind=assumption" : "PASS");
  return g_failed ? 2 : 0;
}

int cmd_example_lf(const Options& opt) {
  const fs::path out(opt.out);
  fs::create_directories(out);
  const Scheme s = builtin_lf_example();
  const fs::path path = out / "lf_example.cfg";
  write_scheme_config(path, s);
  const Complex ks = stable_quadratic_root(s, Complex(-1.0));
  const DissipationFit fit = fit_dissipation(s);
  std::printf("kappa_s(-1) = %.17g\n", ks.real());
  std::printf("b = %.17g\n", s.b[0][0]);
  std::printf("mu = %d\nbeta = %.12g\n", fit.mu, fit.beta);
  std::printf("wrote %s\n", path.c_str());
  std::printf("RESULT PASS\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability toolkit for half-line finite difference schemes"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_scheme) {
    if (needs_scheme) {
      sub->add_option("config", opt.config, "scheme config file");
      sub->add_flag("--builtin-lf", opt.builtin_lf, "use the built-in worked example");
    }
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--j0", opt.j0, "source index");
    sub->add_option("--n-max", opt.n_max, "largest time index");
    sub->add_option("--window", opt.window, "truncation window J (0 = auto)");
    sub->add_option("--rho", opt.rho, "contour radius");
    sub->add_option("--nodes", opt.nodes, "contour quadrature nodes");
    sub->add_option("--tol", opt.tol, "root/classification tolerance");
    sub->add_option("--seed", opt.seed, "probe seed");
    sub->add_option("--n-theta", opt.n_theta, "circle scan resolution");
    sub->add_option("--trials", opt.trials, "random probe trials");
    sub->add_option("--z-re", opt.z_re, "Re z for spatial kernels");
    sub->add_option("--z-im", opt.z_im, "Im z for spatial kernels");
    return sub;
  };

  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const std::vector<Cmd> cmds = {
      {"validate", "check every scheme assumption", cmd_validate},
      {"spectrum", "emit the symbol curve and eigenvalue cloud", cmd_spectrum},
      {"lopatinskii", "scan the determinant and locate circle roots", cmd_lopatinskii},
      {"green-spatial", "resolvent kernel at a point z, two routes", cmd_green_spatial},
      {"green-temporal", "temporal kernel snapshots plus contour cross-check", cmd_green_temporal},
      {"residue", "surface-wave profiles at determinant roots", cmd_residue},
      {"certify", "full decomposition and power-bound certification", cmd_certify},
      {"power-bound", "empirical norm probe", cmd_power_bound},
      {"example-lf", "emit the worked example config and constants", cmd_example_lf},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = add_common(app.add_subcommand(c.name, c.help),
                               std::string(c.name) != "example-lf");
    subs.emplace_back(sub, c.fn);
  }

  CLI11_PARSE(app, argc, argv);
  try {
    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) return fn(opt);
  } catch (const AssumptionError& e) {
    std::printf("[FAIL] assumption: %s\nRESULT FAIL kind=assumption\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::printf("[FAIL] numerical: %s\nRESULT FAIL kind=numerical\n", e.what());
    return 3;
  }
  return 3;
}
