#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "molgen/numcore/tape.hpp"

namespace molgen::num {

struct GradCheckOptions {
  double epsilon = 1e-6;
  // Coordinates sampled per parameter block; smaller blocks are checked in full.
  std::size_t samples_per_block = 100;
  std::uint64_t seed = 0;
};

struct BlockCheck {
  std::string name;
  std::size_t coordinates = 0;
  double max_rel_error = 0.0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
  std::vector<BlockCheck> blocks;
};

// Builds a scalar (1×1) on the given tape from the current parameter values.
using ScalarFn = std::function<Var(Tape&)>;

// Compares tape gradients with central differences (f(θ+εe) − f(θ−εe)) / 2ε.
// Error per coordinate: |g_a − g_n| / (|g_a| + |g_n| + 1e-12).
// Throws DomainError for ε outside [1e-7, 1e-3] and NumericError if f is not finite.
GradCheckResult grad_check(const ScalarFn& f, std::span<Parameter* const> params,
                           const GradCheckOptions& options = {});

}  // namespace molgen::num
