#include "gna/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace gna {

AdamState make_adam_state(std::span<Matrix* const> params) {
  AdamState state;
  for (const Matrix* p : params) {
    state.m.emplace_back(p->rows(), p->cols());
    state.v.emplace_back(p->rows(), p->cols());
  }
  return state;
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, const AdamOptions& options) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: tensor count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state.m[i]))
      throw std::invalid_argument("adam_step: shape mismatch in tensor " + std::to_string(i));

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(options.beta1, t);
  const double correct2 = 1.0 - std::pow(options.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    double* w = params[i]->data();
    const double* g = grads[i]->data();
    double* m = state.m[i].data();
    double* v = state.v[i].data();
    for (std::size_t j = 0; j < params[i]->size(); ++j) {
      m[j] = options.beta1 * m[j] + (1.0 - options.beta1) * g[j];
      v[j] = options.beta2 * v[j] + (1.0 - options.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correct1;
      const double v_hat = v[j] / correct2;
      w[j] -= options.lr * m_hat / (std::sqrt(v_hat) + options.eps);
    }
  }
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamOptions& options) {
  const std::vector<Matrix*> p = params.tensors();
  const std::vector<Matrix*> g = const_cast<ModelParams&>(grads).tensors();
  const std::vector<const Matrix*> gc(g.begin(), g.end());
  adam_step(p, gc, state, options);
}

} // namespace gna
