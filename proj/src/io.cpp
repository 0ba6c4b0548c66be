#include "fdstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw NumericalError("cannot open " + path.string() + " for writing");
    out_ << header << "\n";
  }
  void row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      if (!first) out_ << ",";
      out_ << num(v);
      first = false;
    }
    out_ << "\n";
  }
  void raw(const std::string& line) { out_ << line << "\n"; }

 private:
  std::ofstream out_;
};

}  // namespace

Scheme read_scheme_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NumericalError("cannot open scheme config " + path.string());
  Scheme s;
  s.a.clear();
  s.b.clear();
  bool have_r = false, have_p = false, have_la = false, have_a = false, have_pb = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    auto numbers = [&ss, &path, lineno]() {
      std::vector<double> vals;
      double v;
      while (ss >> v) vals.push_back(v);
      if (vals.empty())
        throw NumericalError(path.string() + ":" + std::to_string(lineno) + ": missing value");
      return vals;
    };
    if (key == "r") {
      s.r = static_cast<int>(numbers().front());
      have_r = true;
    } else if (key == "p") {
      s.p = static_cast<int>(numbers().front());
      have_p = true;
    } else if (key == "lambda_a") {
      s.lambda_a = numbers().front();
      have_la = true;
    } else if (key == "a") {
      s.a = numbers();
      have_a = true;
    } else if (key == "p_b") {
      s.p_b = static_cast<int>(numbers().front());
      have_pb = true;
    } else if (key == "b") {
      s.b.push_back(numbers());
    } else if (key == "mu") {
      s.declared_mu = static_cast<int>(numbers().front());
    } else {
      throw NumericalError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" +
                           key + "'");
    }
  }
  if (!(have_r && have_p && have_la && have_a && have_pb) || s.b.empty())
    throw NumericalError(path.string() + ": config must set r, p, lambda_a, a, p_b and b");
  // A single b line carrying r*p_b values is accepted as the row-major table.
  if (static_cast<int>(s.b.size()) == 1 && s.r > 1 &&
      static_cast<int>(s.b.front().size()) == s.r * s.p_b) {
    const std::vector<double> flat = s.b.front();
    s.b.clear();
    for (int i = 0; i < s.r; ++i)
      s.b.emplace_back(flat.begin() + i * s.p_b, flat.begin() + (i + 1) * s.p_b);
  }
  return s;
}

void write_scheme_config(const std::filesystem::path& path, const Scheme& s) {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open " + path.string() + " for writing");
  out << "r " << s.r << "\n";
  out << "p " << s.p << "\n";
  out << "lambda_a " << num(s.lambda_a) << "\n";
  out << "a";
  for (double v : s.a) out << " " << num(v);
  out << "\n";
  out << "p_b " << s.p_b << "\n";
  for (const auto& row : s.b) {
    out << "b";
    for (double v : row) out << " " << num(v);
    out << "\n";
  }
  if (s.declared_mu) out << "mu " << *s.declared_mu << "\n";
}

Scheme builtin_lf_example() {
  const double lambda_a = 0.5, D = 0.75;
  Scheme plain = modified_lax_friedrichs(lambda_a, D, 0.0);
  const Complex ks = stable_quadratic_root(plain, -1.0);
  Scheme s = modified_lax_friedrichs(lambda_a, D, 1.0 / ks.real());
  s.declared_mu = 1;
  return s;
}

void write_spectrum_csv(const std::filesystem::path& path, const Scheme& s, int n_theta) {
  Csv csv(path, "theta,re,im,modulus");
  for (int i = 0; i <= n_theta; ++i) {
    const double th = -kPi + 2.0 * kPi * i / n_theta;
    const Complex F = symbol(s, th);
    csv.row({th, F.real(), F.imag(), std::abs(F)});
  }
}

void write_eigencloud_csv(const std::filesystem::path& path, const Scheme& s, int n_theta,
                          const std::vector<double>& radii) {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open " + path.string() + " for writing");
  out << "z_re,z_im,kappa_re,kappa_im,class\n";
  for (double rho : radii) {
    for (int i = 0; i < n_theta; ++i) {
      const double th = -kPi + 2.0 * kPi * i / n_theta;
      const Complex z = rho * Complex(std::cos(th), std::sin(th));
      SpectralSplit sp;
      try {
        sp = split(s, z);
      } catch (const std::exception&) {
        continue;
      }
      auto emit = [&](const std::vector<Complex>& ks, const char* cls) {
        for (const Complex& k : ks)
          out << num(z.real()) << "," << num(z.imag()) << "," << num(k.real()) << ","
              << num(k.imag()) << "," << cls << "\n";
      };
      emit(sp.stable, "stable");
      emit(sp.unstable, "unstable");
      emit(sp.central, "central");
    }
  }
}

void write_lopatinskii_csv(const std::filesystem::path& path, const Scheme& s, int n_theta) {
  std::vector<double> thetas(static_cast<size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) thetas[static_cast<size_t>(i)] = -kPi + 2.0 * kPi * i / n_theta;
  const auto prof = lopatinskii_profile(s, thetas);
  Csv csv(path, "theta,abs_delta");
  for (size_t i = 0; i < thetas.size(); ++i)
    if (std::isfinite(prof[i])) csv.row({thetas[i], prof[i]});
}

void write_spatial_csv(const std::filesystem::path& path, const SpatialGreenField& f) {
  Csv csv(path, "j,re,im,abs");
  for (int j = 1 - f.r; j <= f.J; ++j) {
    const Complex v = f.at(j);
    csv.row({double(j), v.real(), v.imag(), std::abs(v)});
  }
}

void write_profile_csv(const std::filesystem::path& path, const SurfaceWaveProfile& p) {
  Csv csv(path, "j,re,im");
  for (int j = 1 - p.r; j <= p.J; ++j) {
    const Complex v = p.at(j);
    csv.row({double(j), v.real(), v.imag()});
  }
}

void write_temporal_csv(const std::filesystem::path& path,
                        const std::vector<TemporalGreenField>& snaps) {
  Csv csv(path, "n,j,value");
  for (const auto& f : snaps)
    for (int j = 1 - f.r; j <= f.J; ++j) csv.row({double(f.n), double(j), f.at(j).real()});
}

void write_probe_csv(const std::filesystem::path& path, const std::vector<PowerProbePoint>& pts) {
  Csv csv(path, "n,norm");
  for (const auto& pt : pts) csv.row({double(pt.n), pt.sup_ratio});
}

void write_collapse_csv(const std::filesystem::path& path, const DecompositionReport& rep,
                        const GaussianCertificate& cert) {
  Csv csv(path, "n,x,y");
  for (size_t ni = 0; ni < rep.n_list.size(); ++ni) {
    const int n = rep.n_list[ni];
    const double scale = std::pow(double(n), 1.0 / (2.0 * cert.mu));
    for (int j = 1; j <= rep.J; ++j) {
      const double y = std::abs(rep.remainder_at(ni, j)) * scale;
      if (y <= 0.0) continue;
      const double x = (j - rep.j0 - cert.alpha * n) / scale;
      csv.row({double(n), x, y});
    }
  }
}

void write_certificate_csv(const std::filesystem::path& path, const GaussianCertificate& cert) {
  Csv csv(path, "mu,alpha,C,omega,max_violation");
  csv.row({double(cert.mu), cert.alpha, cert.C, cert.omega, cert.max_violation});
}

}  // namespace fdstab
