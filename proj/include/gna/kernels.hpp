#pragma once

// Data-parallel kernels behind the network and the corpus builder.
//
// Every kernel exists twice: the OpenMP version in gna::kernels and a plain
// loop reference in gna::kernels::serial, used by the tests and the
// benchmark. The parallel versions split work only over independent outputs
// (rows, nodes, graphs, series) and keep a fixed summation order inside each
// output, so results do not depend on the thread count.

#include "gna/matrix.hpp"
#include "gna/visibility_graph.hpp"

#include <span>
#include <vector>

namespace gna {

/// Compressed row lists: row r owns indices[offsets[r] .. offsets[r+1]).
struct Csr {
  std::vector<int> offsets{0};
  std::vector<int> indices;

  std::size_t rows() const noexcept { return offsets.size() - 1; }
  std::span<const int> row(std::size_t r) const {
    return {indices.data() + offsets[r], indices.data() + offsets[r + 1]};
  }
  std::size_t row_size(std::size_t r) const { return offsets[r + 1] - offsets[r]; }
};

// Transpose of an adjacency over `cols` columns; rows of the result are sorted.
Csr transpose(const Csr& adj, std::size_t cols);

namespace kernels {

Matrix matmul(const Matrix& a, const Matrix& b);    // a * b
Matrix matmul_tn(const Matrix& a, const Matrix& b); // a^T * b
Matrix matmul_nt(const Matrix& a, const Matrix& b); // a * b^T

void add_row_vector(Matrix& m, const Matrix& bias); // m[r, :] += bias[0, :]
Matrix column_sums(const Matrix& m);                // 1 x cols

Matrix leaky_relu(const Matrix& x, double alpha);
// grad_out scaled by 1 where pre >= 0 and alpha elsewhere.
Matrix leaky_relu_backward(const Matrix& grad_out, const Matrix& pre, double alpha);

// out[u] = mean of h[v] over v in adj.row(u); zero row when empty.
Matrix neighbor_mean(const Matrix& h, const Csr& adj);
// Adjoint of neighbor_mean. adj_t is transpose(adj).
Matrix neighbor_mean_backward(const Matrix& grad_out, const Csr& adj, const Csr& adj_t);

// out[g] = sum over nodes u of graph g of weight[u] * h[u]. Graph g owns
// node rows [graph_offsets[g], graph_offsets[g+1]).
Matrix segment_weighted_sum(const Matrix& h, std::span<const int> graph_offsets,
                            std::span<const double> weight);
Matrix segment_weighted_sum_backward(const Matrix& grad_out, std::span<const int> graph_offsets,
                                     std::span<const double> weight);

// One directed visibility graph per series (divide-and-conquer builder).
std::vector<VisGraph> build_graphs(std::span<const std::vector<double>> series);

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
void add_row_vector(Matrix& m, const Matrix& bias);
Matrix column_sums(const Matrix& m);
Matrix leaky_relu(const Matrix& x, double alpha);
Matrix leaky_relu_backward(const Matrix& grad_out, const Matrix& pre, double alpha);
Matrix neighbor_mean(const Matrix& h, const Csr& adj);
Matrix neighbor_mean_backward(const Matrix& grad_out, const Csr& adj, const Csr& adj_t);
Matrix segment_weighted_sum(const Matrix& h, std::span<const int> graph_offsets,
                            std::span<const double> weight);
Matrix segment_weighted_sum_backward(const Matrix& grad_out, std::span<const int> graph_offsets,
                                     std::span<const double> weight);
std::vector<VisGraph> build_graphs(std::span<const std::vector<double>> series);

} // namespace serial
} // namespace kernels
} // namespace gna
