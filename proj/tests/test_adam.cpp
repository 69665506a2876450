#include "gna/adam.hpp"

#include <doctest.h>

#include <cmath>

using namespace gna;

TEST_SUITE("neural_core") {

TEST_CASE("adam first step moves each weight by about lr against the gradient sign") {
  Matrix w(1, 3), g(1, 3);
  w(0, 0) = 1.0;
  g(0, 0) = 0.5;
  g(0, 1) = -20.0;
  g(0, 2) = 0.0;
  Matrix* params[] = {&w};
  const Matrix* grads[] = {&g};
  AdamState state = make_adam_state(params);
  adam_step(params, grads, state, {.lr = 1e-3});
  CHECK(state.step == 1);
  CHECK(w(0, 0) == doctest::Approx(1.0 - 1e-3).epsilon(1e-9));
  CHECK(w(0, 1) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(w(0, 2) == 0.0);
}

TEST_CASE("adam minimises a quadratic") {
  Matrix w(1, 1, 1.0), g(1, 1);
  Matrix* params[] = {&w};
  const Matrix* grads[] = {&g};
  AdamState state = make_adam_state(params);
  for (int i = 0; i < 100; ++i) {
    g(0, 0) = 2 * w(0, 0);
    adam_step(params, grads, state, {.lr = 0.1});
  }
  CHECK(std::abs(w(0, 0)) < 0.05);
}

TEST_CASE("adam rejects mismatched shapes") {
  Matrix w(2, 2), g(2, 3);
  Matrix* params[] = {&w};
  const Matrix* grads[] = {&g};
  AdamState state = make_adam_state(params);
  CHECK_THROWS_AS(adam_step(params, grads, state, {}), std::invalid_argument);
}

TEST_CASE("adam on full model parameters") {
  ModelParams p = init_params(8, 2, 0);
  const ModelParams before = p;
  ModelParams g = zeros_like(p);
  g.mlpp[2].b(0, 1) = 1.0;
  AdamState state = make_adam_state(p.tensors());
  adam_step(p, g, state, {});
  CHECK(p.mlpp[2].b(0, 1) == doctest::Approx(-1e-3).epsilon(1e-9));
  CHECK(p.sage[0].w_self == before.sage[0].w_self);
}

}
