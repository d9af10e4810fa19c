#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "molgen/numcore/tape.hpp"
#include "molgen/rng.hpp"

namespace molgen::num {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are kept per parameter in the order the
// parameters are passed to step(); that order must not change between calls.
class Adam {
 public:
  explicit Adam(AdamConfig cfg) : cfg_(cfg) {}

  void step(std::span<Parameter* const> params);

  double learning_rate() const { return cfg_.learning_rate; }
  void set_learning_rate(double lr) { cfg_.learning_rate = lr; }
  std::uint64_t steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::uint64_t t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)), fan_in = rows, fan_out = cols.
void glorot_uniform(Matrix& m, Rng& rng);

}  // namespace molgen::num
