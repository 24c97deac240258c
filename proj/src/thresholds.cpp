#include "windlab/thresholds.hpp"

#include "windlab/errors.hpp"

namespace windlab {
namespace {

template <typename F>
void for_each_field(Thresholds& t, F&& f) {
  f("periodization", t.periodization);
  f("heat_reference", t.heat_reference);
  f("winding_law", t.winding_law);
  f("oracle", t.oracle);
  f("z", t.z);
  f("quenched_relative", t.quenched_relative);
  f("ks_noisy", t.ks_noisy);
  f("ks_free", t.ks_free);
  f("sigma_margin", t.sigma_margin);
  f("free_sigma", t.free_sigma);
  f("mixing_r2", t.mixing_r2);
  f("free_rate_relative", t.free_rate_relative);
  f("tail_r2", t.tail_r2);
  f("free_tail_slope", t.free_tail_slope);
}

}  // namespace

void Thresholds::set(const std::string& name, double value) {
  bool found = false;
  for_each_field(*this, [&](const char* key, double& field) {
    if (name == key) {
      field = value;
      found = true;
    }
  });
  if (!found) throw ConfigError("threshold." + name + ": unknown threshold");
}

std::map<std::string, double> Thresholds::as_map() const {
  std::map<std::string, double> out;
  Thresholds copy = *this;
  for_each_field(copy, [&](const char* key, double& field) { out[key] = field; });
  return out;
}

}  // namespace windlab
