#include "gna/kernels.hpp"

#include <stdexcept>

// Straightforward loops, kept as the reference the parallel kernels are
// tested and benchmarked against.

namespace gna::kernels::serial {

namespace {

void require(bool ok) {
  if (!ok) throw std::invalid_argument("dimension mismatch");
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows());
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * b(r, j);
      c(i, j) = s;
    }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols());
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(j, t);
      c(i, j) = s;
    }
  return c;
}

void add_row_vector(Matrix& m, const Matrix& bias) {
  require(bias.rows() == 1 && bias.cols() == m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) += bias(0, c);
}

Matrix column_sums(const Matrix& m) {
  Matrix s(1, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) s(0, c) += m(r, c);
  return s;
}

Matrix leaky_relu(const Matrix& x, double alpha) {
  Matrix y = x;
  for (double& v : y.values())
    if (v < 0.0) v *= alpha;
  return y;
}

Matrix leaky_relu_backward(const Matrix& grad_out, const Matrix& pre, double alpha) {
  require(grad_out.same_shape(pre));
  Matrix g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (pre.data()[i] < 0.0) g.data()[i] *= alpha;
  return g;
}

Matrix neighbor_mean(const Matrix& h, const Csr& adj) {
  require(adj.rows() == h.rows());
  Matrix out(h.rows(), h.cols());
  for (std::size_t u = 0; u < adj.rows(); ++u) {
    const auto nbrs = adj.row(u);
    for (int v : nbrs)
      for (std::size_t j = 0; j < h.cols(); ++j) out(u, j) += h(v, j) / static_cast<double>(nbrs.size());
  }
  return out;
}

Matrix neighbor_mean_backward(const Matrix& grad_out, const Csr& adj, const Csr& /*adj_t*/) {
  require(adj.rows() == grad_out.rows());
  // Scatter form, the direct adjoint of the forward loop.
  Matrix grad_in(grad_out.rows(), grad_out.cols());
  for (std::size_t u = 0; u < adj.rows(); ++u) {
    const auto nbrs = adj.row(u);
    for (int v : nbrs)
      for (std::size_t j = 0; j < grad_out.cols(); ++j)
        grad_in(v, j) += grad_out(u, j) / static_cast<double>(nbrs.size());
  }
  return grad_in;
}

Matrix segment_weighted_sum(const Matrix& h, std::span<const int> graph_offsets,
                            std::span<const double> weight) {
  require(weight.size() == h.rows() && !graph_offsets.empty());
  Matrix out(graph_offsets.size() - 1, h.cols());
  for (std::size_t g = 0; g + 1 < graph_offsets.size(); ++g)
    for (int u = graph_offsets[g]; u < graph_offsets[g + 1]; ++u)
      for (std::size_t j = 0; j < h.cols(); ++j) out(g, j) += weight[u] * h(u, j);
  return out;
}

Matrix segment_weighted_sum_backward(const Matrix& grad_out, std::span<const int> graph_offsets,
                                     std::span<const double> weight) {
  require(grad_out.rows() + 1 == graph_offsets.size());
  Matrix grad_in(weight.size(), grad_out.cols());
  for (std::size_t g = 0; g < grad_out.rows(); ++g)
    for (int u = graph_offsets[g]; u < graph_offsets[g + 1]; ++u)
      for (std::size_t j = 0; j < grad_out.cols(); ++j) grad_in(u, j) = weight[u] * grad_out(g, j);
  return grad_in;
}

std::vector<VisGraph> build_graphs(std::span<const std::vector<double>> series) {
  std::vector<VisGraph> graphs;
  graphs.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    graphs.push_back(build_nvg_dc(series[i], static_cast<int>(i)));
  return graphs;
}

} // namespace gna::kernels::serial
