#pragma once

#include "gna/matrix.hpp"
#include "gna/model.hpp"

#include <span>
#include <vector>

namespace gna {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First and second moment estimates, one pair per parameter tensor.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;
};

AdamState make_adam_state(std::span<Matrix* const> params);

// One bias-corrected Adam update; increments state.step first, so the
// first call uses t = 1.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, const AdamOptions& options);

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamOptions& options);

} // namespace gna
