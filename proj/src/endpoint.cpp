#include "windlab/endpoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "windlab/errors.hpp"

namespace windlab {

TorusDensity evolve_density(std::span<const TorusKernel> kernels, const BoundaryCondition& nu) {
  if (kernels.empty()) throw ConfigError("t: at least one kernel is required");
  TorusDensity rho = nu.to_density(kernels.front().cells, kernels.front().dx);
  rho.log_mass = rho.normalize();
  for (const auto& k : kernels) rho = apply(k, rho).first;
  return rho;
}

TorusDensity backward_density(std::span<const TorusKernel> kernels, const BoundaryCondition& nu) {
  if (kernels.empty()) throw ConfigError("t: at least one kernel is required");
  TorusDensity rho = nu.to_density(kernels.front().cells, kernels.front().dx);
  rho.log_mass = rho.normalize();
  for (auto it = kernels.rbegin(); it != kernels.rend(); ++it) rho = apply_transpose(*it, rho).first;
  return rho;
}

int default_line_width(int N, int J) {
  return static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(N)))) + J;
}

LineDensity line_evolve(std::span<const WindingKernel> kernels, int j_tot, const BoundaryCondition& nu0) {
  if (kernels.empty()) throw ConfigError("N: at least one kernel is required");
  const WindingKernel& first = kernels.front();
  const int n = first.cells;
  const double dx = first.dx;
  const int J = first.half_width;
  const int N = static_cast<int>(kernels.size());
  if (j_tot <= 0) j_tot = default_line_width(N, J);

  LineDensity u;
  u.j_max = j_tot;
  u.cells = n;
  u.dx = dx;
  u.period = static_cast<int>(std::lround(n * dx));
  u.values.assign(static_cast<std::size_t>(u.windings()) * n, 0.0);
  TorusDensity start = nu0.to_density(n, dx);
  u.log_mass = start.normalize();
  std::copy(start.values.begin(), start.values.end(), u.values.begin() + static_cast<std::ptrdiff_t>(j_tot) * n);

  std::vector<double> next(u.values.size());
  std::vector<double> colsum(static_cast<std::size_t>(first.windings()) * n);
  int reach = 0;  // occupied rows satisfy |j| <= reach
  double kept_fraction = 1.0;

  for (const auto& kernel : kernels) {
    if (kernel.cells != n || kernel.half_width != J) throw ConfigError("winding kernels differ in shape");
    for (int l = -J; l <= J; ++l) {
      for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int x = 0; x < n; ++x) s += kernel(l, x, y);
        colsum[static_cast<std::size_t>(l + J) * n + y] = s;
      }
    }
    std::fill(next.begin(), next.end(), 0.0);
    double total = 0.0;
    double kept = 0.0;
    for (int jp = -reach; jp <= reach; ++jp) {
      const double* v = u.values.data() + static_cast<std::size_t>(jp + j_tot) * n;
      for (int l = -J; l <= J; ++l) {
        const double* cs = colsum.data() + static_cast<std::size_t>(l + J) * n;
        double mass = 0.0;
        for (int y = 0; y < n; ++y) mass += cs[y] * v[y];
        mass *= dx * dx;
        total += mass;
        const int j = jp + l;
        if (j < -j_tot || j > j_tot) continue;
        kept += mass;
        double* out = next.data() + static_cast<std::size_t>(j + j_tot) * n;
        const auto layer = kernel.layer(l);
        for (int x = 0; x < n; ++x) {
          const double* row = layer.data() + static_cast<std::size_t>(x) * n;
          double acc = 0.0;
          for (int y = 0; y < n; ++y) acc += row[y] * v[y];
          out[x] += acc * dx;
        }
      }
    }
    reach = std::min(j_tot, reach + J);
    if (!(kept > 0.0)) throw DegenerateInput("line density lost all mass");
    kept_fraction *= kept / total;
    double norm = 0.0;
    for (double v : next) norm += v;
    norm *= dx;
    for (double& v : next) v /= norm;
    u.log_mass += std::log(norm) + kernel.log_norm;
    u.values.swap(next);
  }

  u.mass_lost = 1.0 - kept_fraction;
  if (u.mass_lost > kLineLossFail) {
    throw ConfigError("J_tot: line truncation at " + std::to_string(j_tot) + " dropped mass " +
                      std::to_string(u.mass_lost));
  }
  if (u.mass_lost > kLineLossWarn) {
    u.warnings.push_back("line truncation at J_tot=" + std::to_string(j_tot) + " dropped mass " +
                         std::to_string(u.mass_lost));
  }
  return u;
}

IntegerLaw integer_part_law(const LineDensity& d) {
  IntegerLaw law;
  law.j_min = -d.j_max;
  law.p.resize(static_cast<std::size_t>(d.windings()));
  for (int j = -d.j_max; j <= d.j_max; ++j) {
    double s = 0.0;
    for (int x = 0; x < d.cells; ++x) s += d.at(j, x);
    law.p[static_cast<std::size_t>(j + d.j_max)] = s * d.dx;
  }
  return law;
}

QuenchedMoments quenched_moments(const LineDensity& d) {
  double m0 = 0.0;
  double m1 = 0.0;
  for (int j = -d.j_max; j <= d.j_max; ++j) {
    for (int x = 0; x < d.cells; ++x) {
      const double w = d.at(j, x) * d.dx;
      m0 += w;
      m1 += w * d.position(j, x);
    }
  }
  const double mean = m1 / m0;
  double var = 0.0;
  for (int j = -d.j_max; j <= d.j_max; ++j) {
    for (int x = 0; x < d.cells; ++x) {
      const double z = d.position(j, x) - mean;
      var += d.at(j, x) * d.dx * z * z;
    }
  }
  return {mean, var / m0};
}

std::vector<double> contraction_profile(std::span<const TorusKernel> kernels, const BoundaryCondition& nu,
                                        const BoundaryCondition& nu_prime) {
  if (kernels.empty()) throw ConfigError("t: at least one kernel is required");
  const int n = kernels.front().cells;
  const double dx = kernels.front().dx;
  TorusDensity rho = nu.to_density(n, dx);
  rho.normalize();
  TorusDensity other = nu_prime.to_density(n, dx);
  other.normalize();

  // Evolve rho and the difference d = rho' - rho; the difference keeps full
  // relative precision long after it drops below rounding level of rho.
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) d[static_cast<std::size_t>(x)] = other.values[static_cast<std::size_t>(x)] - rho.values[static_cast<std::size_t>(x)];
  std::vector<double> gr(static_cast<std::size_t>(n));
  std::vector<double> gd(static_cast<std::size_t>(n));
  std::vector<double> gaps;
  gaps.reserve(kernels.size());
  for (const auto& k : kernels) {
    double z = 0.0;
    double md = 0.0;
    for (int x = 0; x < n; ++x) {
      const auto row = k.row(x);
      double a = 0.0;
      double b = 0.0;
      for (int y = 0; y < n; ++y) {
        a += row[static_cast<std::size_t>(y)] * rho.values[static_cast<std::size_t>(y)];
        b += row[static_cast<std::size_t>(y)] * d[static_cast<std::size_t>(y)];
      }
      gr[static_cast<std::size_t>(x)] = a * dx;
      gd[static_cast<std::size_t>(x)] = b * dx;
      z += a * dx;
      md += b * dx;
    }
    z *= dx;
    md *= dx;
    const double zp = z + md;
    if (!(z > 0.0) || !(zp > 0.0)) throw DegenerateInput("contraction: evolved density has no mass");
    double gap = 0.0;
    for (int x = 0; x < n; ++x) {
      const std::size_t i = static_cast<std::size_t>(x);
      d[i] = (z * gd[i] - md * gr[i]) / (z * zp);
      rho.values[i] = gr[i] / z;
      gap = std::max(gap, std::abs(d[i]));
    }
    gaps.push_back(gap);
  }
  return gaps;
}

double contraction_gap(std::span<const TorusKernel> kernels, const BoundaryCondition& nu,
                       const BoundaryCondition& nu_prime) {
  return contraction_profile(kernels, nu, nu_prime).back();
}

}  // namespace windlab
