#include "windlab/grid.hpp"

#include <cmath>
#include <sstream>

#include "windlab/errors.hpp"

namespace windlab {

void GridSpec::validate() const {
  if (cells_per_unit < 8) {
    throw ConfigError("M: cells per unit must be an integer >= 8, got " + std::to_string(cells_per_unit));
  }
  if (steps_per_unit < 100) {
    throw ConfigError("steps: steps per unit must be an integer >= 100, got " + std::to_string(steps_per_unit));
  }
  if (winding_half_width < 2) {
    throw ConfigError("J: winding half-width must be >= 2, got " + std::to_string(winding_half_width));
  }
  if (period < 1) {
    throw ConfigError("L: period must be >= 1, got " + std::to_string(period));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta: must be finite and >= 0");
  }
}

std::string GridSpec::canonical() const {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << "M=" << cells_per_unit << ";steps=" << steps_per_unit << ";J=" << winding_half_width << ";L=" << period
      << ";beta=" << beta;
  return out.str();
}

}  // namespace windlab
