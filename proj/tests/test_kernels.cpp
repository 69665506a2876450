#include "gna/kernels.hpp"
#include "gna/model.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>
#include <omp.h>

#include <random>

using namespace gna;
namespace k = gna::kernels;
namespace ks = gna::kernels::serial;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (double& v : m.values()) v = d(rng);
  return m;
}

void check_close(const Matrix& a, const Matrix& b, double tol = 1e-12) {
  REQUIRE(a.same_shape(b));
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a.data()[i] - b.data()[i]) <= tol * std::max(1.0, std::abs(b.data()[i])));
}

BatchedGraph random_batch(std::mt19937_64& rng, int graphs, MessageDirection dir) {
  const bool degree_readout = dir == MessageDirection::Both;
  static std::vector<VisGraph> keep;
  keep.clear();
  for (int g = 0; g < graphs; ++g)
    keep.push_back(build_nvg_dc(testing::generate(testing::kGenerators[g % 4], 20 + 13 * g, rng)));
  std::vector<const VisGraph*> ptrs;
  for (const auto& g : keep) ptrs.push_back(&g);
  return batch_graphs(ptrs, dir, degree_readout ? ReadoutMode::Degree : ReadoutMode::Uniform);
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels match the serial reference") {
  std::mt19937_64 rng(1);
  for (auto dir : {MessageDirection::Forward, MessageDirection::Reverse, MessageDirection::Both}) {
    const BatchedGraph b = random_batch(rng, 12, dir);
    const auto n = static_cast<std::size_t>(b.total_nodes());
    const Matrix h = random_matrix(n, 48, rng);
    const Matrix w = random_matrix(48, 40, rng);
    const Matrix g = random_matrix(n, 40, rng);
    const Matrix bias = random_matrix(1, 40, rng);

    check_close(k::matmul(h, w), ks::matmul(h, w));
    check_close(k::matmul_tn(h, g), ks::matmul_tn(h, g));
    check_close(k::matmul_nt(g, w), ks::matmul_nt(g, w));
    Matrix x = g, y = g;
    k::add_row_vector(x, bias);
    ks::add_row_vector(y, bias);
    check_close(x, y);
    check_close(k::column_sums(g), ks::column_sums(g));
    check_close(k::leaky_relu(h, 0.01), ks::leaky_relu(h, 0.01));
    check_close(k::leaky_relu_backward(g, g, 0.01), ks::leaky_relu_backward(g, g, 0.01));
    check_close(k::neighbor_mean(h, b.neighbors), ks::neighbor_mean(h, b.neighbors));
    check_close(k::neighbor_mean_backward(h, b.neighbors, b.neighbors_t),
                ks::neighbor_mean_backward(h, b.neighbors, b.neighbors_t));
    check_close(k::segment_weighted_sum(h, b.graph_offsets, b.readout_weight),
                ks::segment_weighted_sum(h, b.graph_offsets, b.readout_weight));
    const Matrix r = random_matrix(b.num_graphs(), 48, rng);
    check_close(k::segment_weighted_sum_backward(r, b.graph_offsets, b.readout_weight),
                ks::segment_weighted_sum_backward(r, b.graph_offsets, b.readout_weight));
  }
}

TEST_CASE("neighbor_mean_backward is the adjoint of neighbor_mean") {
  // <M h, g> == <h, M^T g> for random h, g.
  std::mt19937_64 rng(2);
  const BatchedGraph b = random_batch(rng, 6, MessageDirection::Both);
  const auto n = static_cast<std::size_t>(b.total_nodes());
  const Matrix h = random_matrix(n, 5, rng), g = random_matrix(n, 5, rng);
  const Matrix mh = k::neighbor_mean(h, b.neighbors);
  const Matrix mtg = k::neighbor_mean_backward(g, b.neighbors, b.neighbors_t);
  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    lhs += mh.data()[i] * g.data()[i];
    rhs += h.data()[i] * mtg.data()[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(3);
  const Matrix a = random_matrix(700, 64, rng), w = random_matrix(64, 64, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Matrix one = k::matmul(a, w);
  const Matrix one_tn = k::matmul_tn(a, one);
  omp_set_num_threads(4);
  const Matrix four = k::matmul(a, w);
  const Matrix four_tn = k::matmul_tn(a, four);
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(one_tn == four_tn);
}

TEST_CASE("dimension mismatches throw") {
  CHECK_THROWS_AS(k::matmul(Matrix(2, 3), Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(k::matmul_tn(Matrix(2, 3), Matrix(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(k::matmul_nt(Matrix(2, 3), Matrix(3, 2)), std::invalid_argument);
}

TEST_CASE("transpose of an adjacency") {
  Csr adj;
  adj.offsets = {0, 0, 1, 3};
  adj.indices = {0, 0, 1};
  const Csr t = transpose(adj, 3);
  CHECK(t.offsets == std::vector<int>{0, 2, 3, 3});
  CHECK(t.indices == std::vector<int>{1, 2, 2});
}

TEST_CASE("parallel corpus build matches serial") {
  std::mt19937_64 rng(4);
  std::vector<std::vector<double>> series;
  for (int i = 0; i < 40; ++i) series.push_back(testing::generate(testing::kGenerators[i % 4], 50 + i, rng));
  const auto par = k::build_graphs(series);
  const auto ser = ks::build_graphs(series);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i] == ser[i]);
    CHECK(par[i].series_id() == static_cast<int>(i));
  }
  series[7] = {1.0};
  CHECK_THROWS_AS(k::build_graphs(series), std::invalid_argument);
}

}
