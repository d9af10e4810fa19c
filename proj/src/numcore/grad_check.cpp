#include "molgen/numcore/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "molgen/error.hpp"
#include "molgen/rng.hpp"

namespace molgen::num {
namespace {

double evaluate(const ScalarFn& f) {
  Tape tape(false);
  const double v = f(tape).value()[0];
  if (!std::isfinite(v)) throw NumericError("grad_check: function value is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check(const ScalarFn& f, std::span<Parameter* const> params,
                           const GradCheckOptions& options) {
  if (!(options.epsilon >= 1e-7 && options.epsilon <= 1e-3)) {
    throw DomainError("grad_check: epsilon must lie in [1e-7, 1e-3]");
  }
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape(true);
    Var out = f(tape);
    if (!std::isfinite(out.value()[0])) {
      throw NumericError("grad_check: function value is not finite");
    }
    tape.backward(out);
  }

  Rng rng(options.seed);
  GradCheckResult result;
  for (Parameter* p : params) {
    BlockCheck block;
    block.name = p->name;
    std::vector<std::size_t> coords(p->value.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (coords.size() > options.samples_per_block) {
      rng.shuffle(coords);
      coords.resize(options.samples_per_block);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t k : coords) {
      const double saved = p->value[k];
      p->value[k] = saved + options.epsilon;
      const double fp = evaluate(f);
      p->value[k] = saved - options.epsilon;
      const double fm = evaluate(f);
      p->value[k] = saved;
      const double numeric = (fp - fm) / (2.0 * options.epsilon);
      const double analytic = p->grad[k];
      const double err =
          std::abs(analytic - numeric) / (std::abs(analytic) + std::abs(numeric) + 1e-12);
      block.max_rel_error = std::max(block.max_rel_error, err);
    }
    block.coordinates = coords.size();
    result.coordinates += coords.size();
    result.max_rel_error = std::max(result.max_rel_error, block.max_rel_error);
    result.blocks.push_back(std::move(block));
  }
  return result;
}

}  // namespace molgen::num
