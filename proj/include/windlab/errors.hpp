#pragma once

#include <stdexcept>
#include <string>

namespace windlab {

/// Invalid configuration value or combination. The message names the key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when a solve produces non-finite values.
class NumericalInstability : public std::runtime_error {
 public:
  NumericalInstability(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Zero-mass densities, all-zero sampling rows and similar dead ends.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace windlab

namespace windlab {

/// Failure inside one replica; carries what is needed to replay it.
class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(const std::string& what, long replica, unsigned long long seed)
      : std::runtime_error("replica " + std::to_string(replica) + " (seed " + std::to_string(seed) + "): " + what),
        replica_(replica),
        seed_(seed) {}
  long replica() const noexcept { return replica_; }
  unsigned long long seed() const noexcept { return seed_; }

 private:
  long replica_;
  unsigned long long seed_;
};

}  // namespace windlab
