#include "windlab/kernel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <numbers>
#include <string>

#include "windlab/errors.hpp"

namespace windlab {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// A batch of real columns of equal length sharing one r2c/c2r plan pair.
class FftBatch {
 public:
  FftBatch(int length, int batch) : length_(length), batch_(batch), modes_(length / 2 + 1) {
    real_ = fftw_alloc_real(static_cast<std::size_t>(length) * batch);
    spectrum_ = fftw_alloc_complex(static_cast<std::size_t>(modes_) * batch);
    if (real_ == nullptr || spectrum_ == nullptr) {
      fftw_free(real_);
      fftw_free(spectrum_);
      throw std::bad_alloc();
    }
    int n[1] = {length};
    // FFTW_ESTIMATE keeps plan selection, and therefore rounding, reproducible.
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_many_dft_r2c(1, n, batch, real_, nullptr, 1, length, spectrum_, nullptr, 1, modes_,
                                      FFTW_ESTIMATE);
    inverse_ = fftw_plan_many_dft_c2r(1, n, batch, spectrum_, nullptr, 1, modes_, real_, nullptr, 1, length,
                                      FFTW_ESTIMATE);
  }

  FftBatch(const FftBatch&) = delete;
  FftBatch& operator=(const FftBatch&) = delete;

  ~FftBatch() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spectrum_);
  }

  int length() const { return length_; }
  int batch() const { return batch_; }
  int modes() const { return modes_; }
  double* column(int b) { return real_ + static_cast<std::size_t>(b) * length_; }
  double* data() { return real_; }
  std::size_t size() const { return static_cast<std::size_t>(length_) * batch_; }

  /// Multiplies every column's spectrum by `multiplier` (which includes the
  /// 1/length inverse normalization).
  void filter(const std::vector<double>& multiplier) {
    fftw_execute(forward_);
    for (int b = 0; b < batch_; ++b) {
      fftw_complex* s = spectrum_ + static_cast<std::size_t>(b) * modes_;
      for (int k = 0; k < modes_; ++k) {
        s[k][0] *= multiplier[k];
        s[k][1] *= multiplier[k];
      }
    }
    fftw_execute(inverse_);
  }

 private:
  int length_;
  int batch_;
  int modes_;
  double* real_ = nullptr;
  fftw_complex* spectrum_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

FftBatch& fft_batch(int length, int batch) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FftBatch>> cache;
  auto& slot = cache[{length, batch}];
  if (!slot) slot = std::make_unique<FftBatch>(length, batch);
  return *slot;
}

/// exp(-2 pi^2 k^2 tau) / length for the modes of a periodic domain of
/// `length` points at spacing dx.
std::vector<double> heat_multiplier(int length, double dx, double tau) {
  const int modes = length / 2 + 1;
  std::vector<double> m(static_cast<std::size_t>(modes));
  const double domain = length * dx;
  for (int k = 0; k < modes; ++k) {
    const double freq = k / domain;
    m[static_cast<std::size_t>(k)] = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * freq * freq * tau) / length;
  }
  return m;
}

constexpr int kRescaleEvery = 16;

/// Keeps magnitudes inside [2^-400, 2^400] by exact power-of-two scaling.
void rescale(FftBatch& ws, double& log_scale, long global_step) {
  double peak = 0.0;
  const double* v = ws.data();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!std::isfinite(v[i])) throw NumericalInstability("non-finite propagator value", global_step);
    peak = std::max(peak, std::abs(v[i]));
  }
  if (!(peak > 0.0)) throw NumericalInstability("propagator vanished", global_step);
  if (peak > 0x1.0p400 || peak < 0x1.0p-400) {
    const int e = std::ilogb(peak);
    double* w = ws.data();
    for (std::size_t i = 0; i < ws.size(); ++i) w[i] = std::ldexp(w[i], -e);
    log_scale += e * std::numbers::ln2;
  }
}

/// Runs one time unit of the splitting scheme on every column of `ws`. The
/// domain spans `ws.length() / n` periods; noise is tiled with period n.
/// Returns the accumulated log scale.
double propagate(FftBatch& ws, const NoiseSlab& slab, const GridSpec& spec) {
  const int n = spec.cells();
  const int copies = ws.length() / n;
  const double dt = spec.dt();
  const double dx = spec.dx();
  const double amplitude = spec.beta * std::sqrt(dt / dx);
  const double ito = spec.beta * spec.beta * dt / (2.0 * dx);
  const auto half = heat_multiplier(ws.length(), dx, 0.5 * dt);
  const auto full = heat_multiplier(ws.length(), dx, dt);
  std::vector<double> factor(static_cast<std::size_t>(n));
  double log_scale = 0.0;

  ws.filter(half);
  const int steps = spec.steps_per_unit;
  for (int s = 0; s < steps; ++s) {
    if (spec.beta != 0.0) {
      const auto w = slab.row(s);
      for (int i = 0; i < n; ++i) factor[static_cast<std::size_t>(i)] = std::exp(amplitude * w[static_cast<std::size_t>(i)] - ito);
      for (int b = 0; b < ws.batch(); ++b) {
        double* col = ws.column(b);
        for (int c = 0; c < copies; ++c) {
          double* block = col + static_cast<std::size_t>(c) * n;
          for (int i = 0; i < n; ++i) block[i] *= factor[static_cast<std::size_t>(i)];
        }
      }
    }
    const bool last = s + 1 == steps;
    ws.filter(last ? half : full);
    if (last || (s + 1) % kRescaleEvery == 0) rescale(ws, log_scale, slab.first_step() + s);
  }
  return log_scale;
}

void check_slab(const NoiseSlab& slab, const GridSpec& spec) {
  spec.validate();
  const GridSpec& s = slab.spec();
  if (s.cells() != spec.cells() || s.steps_per_unit != spec.steps_per_unit) {
    throw ConfigError("slab: noise grid does not match the grid spec");
  }
}

void seed_deltas(FftBatch& ws, int n, int offset, double dx) {
  std::fill(ws.data(), ws.data() + ws.size(), 0.0);
  for (int y = 0; y < n; ++y) ws.column(y)[offset + y] = 1.0 / dx;
}

}  // namespace

double heat_density(double t, double x) noexcept {
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

WindingKernel unit_kernel(const NoiseSlab& slab, const GridSpec& spec) {
  check_slab(slab, spec);
  const int n = spec.cells();
  const int J = spec.winding_half_width;
  const int copies = spec.windings();
  const int length = copies * n;
  FftBatch& ws = fft_batch(length, n);
  seed_deltas(ws, n, J * n, spec.dx());
  const double log_scale = propagate(ws, slab, spec);

  double peak = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) peak = std::max(peak, ws.data()[i]);

  WindingKernel k;
  k.half_width = J;
  k.cells = n;
  k.dx = spec.dx();
  k.data.resize(static_cast<std::size_t>(copies) * n * n);
  const double inv = 1.0 / peak;
  for (int y = 0; y < n; ++y) {
    const double* col = ws.column(y);
    for (int c = 0; c < copies; ++c) {
      for (int x = 0; x < n; ++x) {
        // Far windings of a long period sit below FFT roundoff and can come
        // out slightly negative; the exact kernel is positive.
        k.data[(static_cast<std::size_t>(c) * n + x) * n + y] = std::max(col[c * n + x] * inv, 0.0);
      }
    }
  }
  k.log_norm = log_scale + std::log(peak);
  return k;
}

TorusKernel torus_reduce(const WindingKernel& kernel) {
  const std::size_t n2 = static_cast<std::size_t>(kernel.cells) * kernel.cells;
  TorusKernel g{kernel.cells, kernel.dx, std::vector<double>(n2, 0.0), kernel.log_norm};
  for (int c = 0; c < kernel.windings(); ++c) {
    const double* layer = kernel.data.data() + static_cast<std::size_t>(c) * n2;
    for (std::size_t i = 0; i < n2; ++i) g.data[i] += layer[i];
  }
  return g;
}

TorusKernel direct_torus_kernel(const NoiseSlab& slab, const GridSpec& spec) {
  check_slab(slab, spec);
  const int n = spec.cells();
  FftBatch& ws = fft_batch(n, n);
  seed_deltas(ws, n, 0, spec.dx());
  const double log_scale = propagate(ws, slab, spec);

  double peak = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) peak = std::max(peak, ws.data()[i]);
  TorusKernel g{n, spec.dx(), std::vector<double>(static_cast<std::size_t>(n) * n), 0.0};
  const double inv = 1.0 / peak;
  for (int y = 0; y < n; ++y) {
    const double* col = ws.column(y);
    for (int x = 0; x < n; ++x) g.data[static_cast<std::size_t>(x) * n + y] = std::max(col[x] * inv, 0.0);
  }
  g.log_norm = log_scale + std::log(peak);
  return g;
}

namespace {

std::pair<TorusDensity, double> finish_apply(TorusDensity out, double log_norm) {
  double mass = 0.0;
  for (double v : out.values) mass += v;
  mass *= out.dx;
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DegenerateInput("kernel image has no mass");
  const double inv = 1.0 / mass;
  for (double& v : out.values) v *= inv;
  const double increment = std::log(mass) + log_norm;
  out.log_mass += increment;
  return {std::move(out), increment};
}

void check_dims(const TorusKernel& kernel, const TorusDensity& density) {
  if (density.size() != kernel.cells) throw ConfigError("density size does not match kernel");
}

}  // namespace

std::pair<TorusDensity, double> apply(const TorusKernel& kernel, const TorusDensity& density) {
  check_dims(kernel, density);
  const int n = kernel.cells;
  TorusDensity out{std::vector<double>(static_cast<std::size_t>(n), 0.0), density.dx, density.log_mass};
  for (int x = 0; x < n; ++x) {
    const auto row = kernel.row(x);
    double acc = 0.0;
    for (int y = 0; y < n; ++y) acc += row[static_cast<std::size_t>(y)] * density.values[static_cast<std::size_t>(y)];
    out.values[static_cast<std::size_t>(x)] = acc * density.dx;
  }
  return finish_apply(std::move(out), kernel.log_norm);
}

std::pair<TorusDensity, double> apply_transpose(const TorusKernel& kernel, const TorusDensity& density) {
  check_dims(kernel, density);
  const int n = kernel.cells;
  TorusDensity out{std::vector<double>(static_cast<std::size_t>(n), 0.0), density.dx, density.log_mass};
  for (int x = 0; x < n; ++x) {
    const auto row = kernel.row(x);
    const double w = density.values[static_cast<std::size_t>(x)] * density.dx;
    for (int y = 0; y < n; ++y) out.values[static_cast<std::size_t>(y)] += row[static_cast<std::size_t>(y)] * w;
  }
  return finish_apply(std::move(out), kernel.log_norm);
}

std::pair<TorusDensity, double> solve_unit(const NoiseSlab& slab, const GridSpec& spec, const TorusDensity& density) {
  check_slab(slab, spec);
  const int n = spec.cells();
  if (density.size() != n) throw ConfigError("density does not match the grid");
  FftBatch& ws = fft_batch(n, 1);
  std::copy(density.values.begin(), density.values.end(), ws.data());
  const double log_scale = propagate(ws, slab, spec);
  TorusDensity out{std::vector<double>(static_cast<std::size_t>(n)), density.dx, density.log_mass};
  for (int x = 0; x < n; ++x) out.values[static_cast<std::size_t>(x)] = std::max(ws.data()[x], 0.0);
  return finish_apply(std::move(out), log_scale);
}

TorusKernel heat_reference(double t, const GridSpec& spec) {
  if (!(t > 0.0)) throw ConfigError("t: heat reference time must be positive");
  const int n = spec.cells();
  const double dx = spec.dx();
  const double L = spec.length();
  // Images beyond |x| > sqrt(2 t * 32) contribute < 1e-14.
  const int images = static_cast<int>(std::ceil(std::sqrt(64.0 * t) / L)) + 2;
  TorusKernel g{n, dx, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0), 0.0};
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double acc = 0.0;
      for (int j = -images; j <= images; ++j) acc += heat_density(t, (x - y) * dx + j * L);
      g.data[static_cast<std::size_t>(x) * n + y] = acc;
    }
  }
  return g;
}

KernelChecksum checksum(const TorusKernel& kernel) {
  KernelChecksum c;
  c.min = kernel.data.empty() ? 0.0 : kernel.data.front();
  for (double v : kernel.data) {
    c.sum += v;
    c.max = std::max(c.max, v);
    c.min = std::min(c.min, v);
  }
  c.log_norm = kernel.log_norm;
  return c;
}

double boundary_winding_fraction(const WindingKernel& kernel) {
  const int n = kernel.cells;
  const int J = kernel.half_width;
  double worst = 0.0;
  for (int y = 0; y < n; ++y) {
    double edge = 0.0;
    double total = 0.0;
    for (int j = -J; j <= J; ++j) {
      double s = 0.0;
      for (int x = 0; x < n; ++x) s += kernel(j, x, y);
      total += s;
      if (j == -J || j == J) edge += s;
    }
    worst = std::max(worst, edge / total);
  }
  return worst;
}

double max_relative_difference(const TorusKernel& a, const TorusKernel& b) {
  if (a.cells != b.cells) throw ConfigError("kernels differ in size");
  const double scale = std::exp(a.log_norm - b.log_norm);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double denom = std::abs(b.data[i]);
    const double diff = std::abs(a.data[i] * scale - b.data[i]);
    worst = std::max(worst, denom > 0.0 ? diff / denom : diff);
  }
  return worst;
}

}  // namespace windlab
