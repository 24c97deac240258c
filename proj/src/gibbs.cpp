#include "windlab/gibbs.hpp"

#include <cmath>
#include <string>

#include "windlab/errors.hpp"

namespace windlab {
namespace {

// End weight as a function on the grid: Lebesgue is the constant 1.
std::vector<double> end_weights(const BoundaryCondition& f, int cells, double dx) {
  if (f.kind() == BoundaryCondition::Kind::lebesgue) return std::vector<double>(static_cast<std::size_t>(cells), 1.0);
  return f.to_density(cells, dx).values;
}

void check_kernels(std::span<const TorusKernel> kernels) {
  if (kernels.empty()) throw ConfigError("N: at least one kernel is required");
  for (const auto& k : kernels) {
    if (k.cells != kernels.front().cells) throw ConfigError("kernels differ in grid size");
  }
}

}  // namespace

int sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DegenerateInput("categorical weight is negative or non-finite");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateInput("categorical weights are all zero");
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = static_cast<int>(i);
    if (target < acc) return last_positive;
  }
  return last_positive;
}

ForwardPass forward_pass(std::span<const TorusKernel> kernels, const BoundaryCondition& g,
                         const BoundaryCondition& f) {
  check_kernels(kernels);
  const int n = kernels.front().cells;
  const double dx = kernels.front().dx;
  ForwardPass pass;
  pass.forward.reserve(kernels.size() + 1);
  TorusDensity a = g.to_density(n, dx);
  double log_z = a.normalize();
  a.log_mass = log_z;
  pass.forward.push_back(a);
  for (const auto& kernel : kernels) {
    auto [next, increment] = apply(kernel, pass.forward.back());
    log_z += increment;
    pass.forward.push_back(std::move(next));
  }
  const auto fw = end_weights(f, n, dx);
  const auto& last = pass.forward.back().values;
  double overlap = 0.0;
  for (int x = 0; x < n; ++x) overlap += fw[static_cast<std::size_t>(x)] * last[static_cast<std::size_t>(x)];
  overlap *= dx;
  if (!(overlap > 0.0)) throw DegenerateInput("end boundary has no overlap with the forward density");
  pass.log_partition = log_z + std::log(overlap);
  return pass;
}

PathSample sample_path(std::span<const TorusKernel> kernels, const ForwardPass& pass, const BoundaryCondition& f,
                       Rng& rng) {
  check_kernels(kernels);
  if (pass.forward.size() != kernels.size() + 1) throw ConfigError("forward pass does not match kernels");
  const int n = kernels.front().cells;
  const double dx = kernels.front().dx;
  const int N = static_cast<int>(kernels.size());

  PathSample path;
  path.log_partition = pass.log_partition;
  path.x.assign(static_cast<std::size_t>(N) + 1, 0);
  std::vector<double> w(static_cast<std::size_t>(n));

  const auto fw = end_weights(f, n, dx);
  const auto& aN = pass.forward.back().values;
  for (int x = 0; x < n; ++x) w[static_cast<std::size_t>(x)] = fw[static_cast<std::size_t>(x)] * aN[static_cast<std::size_t>(x)];
  path.x[static_cast<std::size_t>(N)] = sample_categorical(w, rng);

  for (int k = N; k >= 1; --k) {
    const auto row = kernels[static_cast<std::size_t>(k - 1)].row(path.x[static_cast<std::size_t>(k)]);
    const auto& prev = pass.forward[static_cast<std::size_t>(k - 1)].values;
    for (int y = 0; y < n; ++y) w[static_cast<std::size_t>(y)] = row[static_cast<std::size_t>(y)] * prev[static_cast<std::size_t>(y)];
    path.x[static_cast<std::size_t>(k - 1)] = sample_categorical(w, rng);
  }
  return path;
}

PathSample sample_path(std::span<const TorusKernel> kernels, const BoundaryCondition& f, const BoundaryCondition& g,
                       Rng& rng) {
  const ForwardPass pass = forward_pass(kernels, g, f);
  return sample_path(kernels, pass, f, rng);
}

WindingLaw increment_law(const WindingKernel& kernel, int x_to, int x_from) {
  if (x_to < 0 || x_to >= kernel.cells || x_from < 0 || x_from >= kernel.cells) {
    throw IndexError("increment law cell out of range");
  }
  WindingLaw law;
  law.half_width = kernel.half_width;
  law.p.resize(static_cast<std::size_t>(kernel.windings()));
  double total = 0.0;
  for (int j = -kernel.half_width; j <= kernel.half_width; ++j) {
    const double v = kernel(j, x_to, x_from);
    law.p[static_cast<std::size_t>(j + kernel.half_width)] = v;
    total += v;
  }
  if (!(total > 0.0)) {
    throw DegenerateInput("zero propagator mass between cells " + std::to_string(x_from) + " and " +
                          std::to_string(x_to));
  }
  for (double& v : law.p) v /= total;
  return law;
}

StepMoments step_moments(const WindingLaw& law) {
  StepMoments m;
  const int J = law.half_width;
  for (int j = -J; j <= J; ++j) {
    const double p = law(j);
    m.mean += j * p;
    m.second += static_cast<double>(j) * j * p;
    if (j > 0) m.p_pos += p;
    if (j < 0) m.p_neg += p;
  }
  m.edge = law(-J) + law(J);
  return m;
}

WindingSample sample_increments(const PathSample& path, std::span<const WindingKernel> kernels, Rng& rng) {
  const int N = path.steps();
  if (N != static_cast<int>(kernels.size())) throw ConfigError("path length does not match kernel count");
  WindingSample s;
  s.eta.resize(static_cast<std::size_t>(N));
  s.Y.resize(static_cast<std::size_t>(N));
  long running = 0;
  for (int k = 1; k <= N; ++k) {
    const auto law = increment_law(kernels[static_cast<std::size_t>(k - 1)], path.x[static_cast<std::size_t>(k)],
                                   path.x[static_cast<std::size_t>(k - 1)]);
    const int eta = sample_categorical(law.p, rng) - law.half_width;
    s.eta[static_cast<std::size_t>(k - 1)] = eta;
    running += eta;
    s.Y[static_cast<std::size_t>(k - 1)] = running;
  }
  return s;
}

std::complex<double> conditional_cf(const PathSample& path, std::span<const WindingKernel> kernels, double theta,
                                    int k_lo, int k_hi) {
  const int N = path.steps();
  if (N != static_cast<int>(kernels.size())) throw ConfigError("path length does not match kernel count");
  if (k_lo < 1 || k_hi > N || k_lo > k_hi) throw IndexError("conditional_cf: step range outside 1..N");
  const double scale = theta / std::sqrt(static_cast<double>(N));
  std::complex<double> product(1.0, 0.0);
  if (theta == 0.0) return product;
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto law = increment_law(kernels[static_cast<std::size_t>(k - 1)], path.x[static_cast<std::size_t>(k)],
                                   path.x[static_cast<std::size_t>(k - 1)]);
    std::complex<double> term(0.0, 0.0);
    for (int j = -law.half_width; j <= law.half_width; ++j) term += law(j) * std::polar(1.0, scale * j);
    product *= term;
  }
  return product;
}

}  // namespace windlab
