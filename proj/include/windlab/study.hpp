#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "windlab/gibbs.hpp"
#include "windlab/grid.hpp"
#include "windlab/kernel.hpp"

namespace windlab {

/// What every estimator needs to reproduce a run.
struct RunSettings {
  GridSpec spec;
  std::uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency
};

/// Kernels of one replica for units 1..N.
struct KernelStack {
  std::vector<WindingKernel> winding;
  std::vector<TorusKernel> torus;
};

/// Fresh noise from `seed` and one kernel per unit. At beta = 0 the kernel
/// does not depend on the noise and is computed once per spec.
KernelStack replica_kernels(const GridSpec& spec, std::uint64_t seed, int N);

/// Runs fn(i) for i in [0, count) on a bounded pool. Results must be written
/// by index; exceptions are rethrown for the lowest failing index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Replica seeds are derived from the master seed and the index alone.
std::uint64_t seed_of(const RunSettings& settings, int replica);

struct StudyOptions {
  int N = 64;
  bool pinned = true;
  bool stationary = false;
  std::vector<double> thetas;
};

/// One sampled path with its winding increments and exact conditional
/// summaries given the path.
struct PathRecord {
  long Y = 0;
  double displacement = 0.0;  // x_N - x_0 + L * Y, in length units
  double exact_Y = 0.0;       // E_x[Y_N]
  double exact_Y2 = 0.0;      // E_x[Y_N^2]
  double exact_D2 = 0.0;      // E_x[displacement^2]
  int x0 = 0;
  int xN = 0;
  std::vector<int> eta;
  std::vector<StepMoments> steps;
  std::vector<std::complex<double>> cf;  // one per option theta
  double max_edge = 0.0;
};

struct ReplicaRecord {
  std::uint64_t seed = 0;
  PathRecord pinned;
  PathRecord stationary;
};

struct Study {
  RunSettings settings;
  StudyOptions options;
  std::vector<ReplicaRecord> replicas;
};

/// Per replica: fresh noise and kernels, then a path with boundaries
/// (Lebesgue end, delta start at cell 0) and/or one with stationary
/// boundaries, sharing the kernels.
Study winding_study(const RunSettings& settings, const StudyOptions& options, int replicas);

/// Single replica of a study, for replay.
ReplicaRecord study_replica(const RunSettings& settings, const StudyOptions& options, int replica);

}  // namespace windlab
