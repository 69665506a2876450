#include "gna/graph_features.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace gna;

TEST_SUITE("graph_features") {

TEST_CASE("in-degree") {
  CHECK(in_degree(build_nvg_dc(std::vector<double>{3, 1, 2})) == std::vector<double>{0, 1, 2});
  CHECK(in_degree(build_nvg_dc(std::vector<double>{1, 2, 3, 4})) == std::vector<double>{0, 1, 1, 1});
}

TEST_CASE("in-degree counts earlier visible points") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto y = testing::generate(testing::kGenerators[trial % 4], 3 + trial * 3, rng);
    const auto deg = in_degree(build_nvg_dc(y));
    CHECK(deg.front() == 0.0);
    for (std::size_t u = 0; u < y.size(); ++u) {
      int count = 0;
      for (std::size_t i = 0; i < u; ++i) count += visible(y, static_cast<int>(i), static_cast<int>(u));
      CHECK(deg[u] == count);
    }
  }
}

TEST_CASE("pagerank on trivial graphs") {
  CHECK(pagerank(VisGraph::from_edges(1, {})) == std::vector<double>{1.0});
  const auto two = pagerank(VisGraph::from_edges(2, {{0, 1}}));
  // Closed form with uniform dangling redistribution: p0 = 0.5 / 1.425.
  CHECK(two[0] == doctest::Approx(0.3508771929824561).epsilon(1e-9));
  CHECK(two[1] == doctest::Approx(0.6491228070175439).epsilon(1e-9));
}

TEST_CASE("pagerank rejects bad input") {
  CHECK_THROWS_AS(pagerank(VisGraph::from_edges(0, {})), std::invalid_argument);
  CHECK_THROWS_AS(pagerank(VisGraph::from_edges(2, {{0, 1}}), {.damping = 1.0}), std::invalid_argument);
}

TEST_CASE("pagerank matches the linear-system oracle and sums to one") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const auto y = testing::generate(testing::kGenerators[trial % 4], 2 + trial * 4, rng);
    const VisGraph g = build_nvg_dc(y);
    const auto pr = pagerank_detailed(g);
    CHECK(pr.converged);
    const auto oracle = testing::pagerank_linear_solve(g);
    double sum = 0.0;
    for (std::size_t u = 0; u < pr.scores.size(); ++u) {
      CHECK(pr.scores[u] >= 0.0);
      CHECK(std::abs(pr.scores[u] - oracle[u]) < 1e-8);
      sum += pr.scores[u];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("pagerank depends only on structure (permuted-then-restored)") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial * 3;
    const VisGraph g = build_nvg_dc(testing::generate(testing::Generator::Gaussian, n, rng));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> relabeled;
    for (const auto& [i, j] : g.edges()) relabeled.emplace_back(perm[i], perm[j]);
    const auto permuted = testing::pagerank_linear_solve(n, relabeled);
    const auto pr = pagerank(g);
    for (int u = 0; u < n; ++u) CHECK(std::abs(pr[u] - permuted[perm[u]]) < 1e-8);
  }
}

TEST_CASE("non-convergence is reported, result still normalized") {
  std::mt19937_64 rng(2);
  const VisGraph g = build_nvg_dc(testing::generate(testing::Generator::Uniform, 50, rng));
  const auto r = pagerank_detailed(g, {.damping = 0.85, .tol = 1e-30, .max_iter = 3});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.residual > 0.0);
  CHECK(std::accumulate(r.scores.begin(), r.scores.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("node feature matrix") {
  const Matrix f = node_feature_matrix(build_nvg_dc(std::vector<double>{3, 1, 2}));
  REQUIRE(f.rows() == 3);
  REQUIRE(f.cols() == 2);
  CHECK(f(0, 0) == 0);
  CHECK(f(1, 0) == 1);
  CHECK(f(2, 0) == 2);
  CHECK(f(0, 1) + f(1, 1) + f(2, 1) == doctest::Approx(1.0).epsilon(1e-12));

  const Matrix z = node_feature_matrix(build_nvg_dc(std::vector<double>{1, 2, 3, 4}), true);
  CHECK(z(0, 0) == doctest::Approx(-1.7320508075688774).epsilon(1e-12));
  for (int u = 1; u < 4; ++u) CHECK(z(u, 0) == doctest::Approx(0.5773502691896258).epsilon(1e-12));

  const Matrix single = node_feature_matrix(VisGraph::from_edges(1, {}));
  CHECK(single(0, 0) == 0.0);
  CHECK(single(0, 1) == 1.0);
}

TEST_CASE("feature CSV") {
  std::ostringstream out;
  write_feature_csv(out, node_feature_matrix(VisGraph::from_edges(1, {})));
  CHECK(out.str() == "node,in_degree,pagerank\n0,0,1\n");
}

}
