#include "windlab/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "windlab/errors.hpp"
#include "windlab/noise.hpp"
#include "windlab/stationary.hpp"

namespace windlab {
namespace {

std::shared_ptr<const WindingKernel> free_kernel(const GridSpec& spec) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const WindingKernel>> cache;
  const std::string key = spec.canonical();
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const NoiseGrid quiet = NoiseGrid::from_increments(
      spec, 1, std::vector<double>(static_cast<std::size_t>(spec.steps_per_unit) * spec.cells(), 0.0));
  auto k = std::make_shared<const WindingKernel>(unit_kernel(slab(quiet, 1), spec));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(k)).first->second;
}

PathRecord record_path(const KernelStack& kernels, const PathSample& path, double period,
                       const std::vector<double>& thetas, Rng& rng) {
  const int N = path.steps();
  const double dx = kernels.torus.front().dx;
  PathRecord r;
  r.x0 = path.x.front();
  r.xN = path.x.back();
  r.eta.resize(static_cast<std::size_t>(N));
  r.steps.resize(static_cast<std::size_t>(N));
  r.cf.assign(thetas.size(), std::complex<double>(1.0, 0.0));
  const double root = std::sqrt(static_cast<double>(N));
  double var_sum = 0.0;
  for (int k = 1; k <= N; ++k) {
    const auto law = increment_law(kernels.winding[static_cast<std::size_t>(k - 1)], path.x[static_cast<std::size_t>(k)],
                                   path.x[static_cast<std::size_t>(k - 1)]);
    const StepMoments m = step_moments(law);
    r.steps[static_cast<std::size_t>(k - 1)] = m;
    r.max_edge = std::max(r.max_edge, m.edge);
    r.exact_Y += m.mean;
    var_sum += m.second - m.mean * m.mean;
    const int eta = sample_categorical(law.p, rng) - law.half_width;
    r.eta[static_cast<std::size_t>(k - 1)] = eta;
    r.Y += eta;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      if (thetas[t] == 0.0) continue;
      std::complex<double> term(0.0, 0.0);
      for (int j = -law.half_width; j <= law.half_width; ++j) term += law(j) * std::polar(1.0, thetas[t] * j / root);
      r.cf[t] *= term;
    }
  }
  const double shift = (r.xN - r.x0) * dx;
  r.exact_Y2 = var_sum + r.exact_Y * r.exact_Y;
  r.displacement = shift + period * static_cast<double>(r.Y);
  const double mean_d = shift + period * r.exact_Y;
  r.exact_D2 = period * period * var_sum + mean_d * mean_d;
  return r;
}

}  // namespace

KernelStack replica_kernels(const GridSpec& spec, std::uint64_t seed, int N) {
  spec.validate();
  if (N < 1) throw ConfigError("N: must be >= 1, got " + std::to_string(N));
  KernelStack s;
  s.winding.reserve(static_cast<std::size_t>(N));
  s.torus.reserve(static_cast<std::size_t>(N));
  if (spec.beta == 0.0) {
    const auto k = free_kernel(spec);
    const TorusKernel g = torus_reduce(*k);
    for (int i = 0; i < N; ++i) {
      s.winding.push_back(*k);
      s.torus.push_back(g);
    }
    return s;
  }
  const NoiseGrid noise(spec, seed, N);
  for (int unit = 1; unit <= N; ++unit) {
    s.winding.push_back(unit_kernel(slab(noise, unit), spec));
    s.torus.push_back(torus_reduce(s.winding.back()));
  }
  return s;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t seed_of(const RunSettings& settings, int replica) {
  return replica_seed(settings.seed, static_cast<std::uint64_t>(replica));
}

ReplicaRecord study_replica(const RunSettings& settings, const StudyOptions& options, int replica) {
  const std::uint64_t seed = seed_of(settings, replica);
  try {
    ReplicaRecord rec;
    rec.seed = seed;
    const KernelStack kernels = replica_kernels(settings.spec, seed, options.N);
    Rng path_rng = make_rng(seed, Stream::path);
    Rng eta_rng = make_rng(seed, Stream::increments);
    const double period = settings.spec.length();
    if (options.pinned) {
      const auto f = BoundaryCondition::lebesgue();
      const auto path = sample_path(kernels.torus, f, BoundaryCondition::delta(0), path_rng);
      rec.pinned = record_path(kernels, path, period, options.thetas, eta_rng);
    }
    if (options.stationary) {
      Rng boundary_rng = make_rng(seed, Stream::boundary);
      auto [rho, rho_tilde] = stationary_boundaries(boundary_rng, settings.spec);
      const auto f = BoundaryCondition::density(std::move(rho_tilde));
      const auto path = sample_path(kernels.torus, f, BoundaryCondition::density(std::move(rho)), path_rng);
      rec.stationary = record_path(kernels, path, period, options.thetas, eta_rng);
    }
    return rec;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ReplicaError(e.what(), replica, seed);
  }
}

Study winding_study(const RunSettings& settings, const StudyOptions& options, int replicas) {
  if (replicas < 2) throw ConfigError("replicas: at least 2 are required, got " + std::to_string(replicas));
  if (options.N < 1) throw ConfigError("N: must be >= 1");
  Study study{settings, options, std::vector<ReplicaRecord>(static_cast<std::size_t>(replicas))};
  parallel_for(replicas, settings.threads,
               [&](int i) { study.replicas[static_cast<std::size_t>(i)] = study_replica(settings, options, i); });
  return study;
}

}  // namespace windlab
