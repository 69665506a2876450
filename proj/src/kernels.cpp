#include "gna/kernels.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <string>

namespace gna {

namespace {

// Below this many scalar operations the fork/join cost dominates.
constexpr long kParallelWork = 1L << 14;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("dimension mismatch in ") + what);
}

} // namespace

Csr transpose(const Csr& adj, std::size_t cols) {
  Csr t;
  t.offsets.assign(cols + 1, 0);
  for (int c : adj.indices) ++t.offsets[c + 1];
  for (std::size_t c = 0; c < cols; ++c) t.offsets[c + 1] += t.offsets[c];
  t.indices.resize(adj.indices.size());
  std::vector<int> fill(t.offsets.begin(), t.offsets.end() - 1);
  for (std::size_t r = 0; r < adj.rows(); ++r)
    for (int c : adj.row(r)) t.indices[fill[c]++] = static_cast<int>(r);
  return t;
}

namespace kernels {

namespace {

// Register-blocked product kernel: C = op(A) * B with op(A) = A or A^T.
// Every output is accumulated over k in ascending order.
constexpr std::size_t kMr = 4;
constexpr std::size_t kNr = 16;

// A(i, k) for the tile's first row i0 = 0; lda is A's row stride.
template <bool TransA>
inline double a_at(const double* a, std::size_t lda, std::size_t i, std::size_t k) {
  return TransA ? a[k * lda + i] : a[i * lda + k];
}

template <bool TransA>
void gemm_full_tile(const double* __restrict a, std::size_t lda, const double* __restrict b, std::size_t ldb,
                    double* __restrict c, std::size_t ldc, std::size_t inner, bool resume) {
  double acc[kMr][kNr] = {};
  if (resume)
    for (std::size_t r = 0; r < kMr; ++r)
      for (std::size_t j = 0; j < kNr; ++j) acc[r][j] = c[r * ldc + j];
  for (std::size_t k = 0; k < inner; ++k) {
    const double* brow = b + k * ldb;
    for (std::size_t r = 0; r < kMr; ++r) {
      const double av = a_at<TransA>(a, lda, r, k);
#pragma omp simd
      for (std::size_t j = 0; j < kNr; ++j) acc[r][j] += av * brow[j];
    }
  }
  for (std::size_t r = 0; r < kMr; ++r)
    for (std::size_t j = 0; j < kNr; ++j) c[r * ldc + j] = acc[r][j];
}

template <bool TransA>
void gemm_edge_tile(const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c, std::size_t ldc,
                    std::size_t inner, std::size_t ib, std::size_t jb, bool resume) {
  double acc[kMr][kNr] = {};
  if (resume)
    for (std::size_t r = 0; r < ib; ++r)
      for (std::size_t j = 0; j < jb; ++j) acc[r][j] = c[r * ldc + j];
  for (std::size_t k = 0; k < inner; ++k) {
    const double* brow = b + k * ldb;
    for (std::size_t r = 0; r < ib; ++r) {
      const double av = a_at<TransA>(a, lda, r, k);
      for (std::size_t j = 0; j < jb; ++j) acc[r][j] += av * brow[j];
    }
  }
  for (std::size_t r = 0; r < ib; ++r)
    for (std::size_t j = 0; j < jb; ++j) c[r * ldc + j] = acc[r][j];
}

// Rows of B processed per pass, so a B panel stays in cache while every row
// block of A sweeps over it.
constexpr std::size_t kKc = 256;

// n x m result, inner dimension `inner`. Tiles of later passes resume from
// the partial sums in C, so each output still adds its terms in k order.
template <bool TransA>
void gemm(const double* a, std::size_t lda, const double* b, std::size_t ldb, double* c, std::size_t n,
          std::size_t inner, std::size_t m) {
  const long row_blocks = static_cast<long>((n + kMr - 1) / kMr);
  const bool parallel = static_cast<long>(n * inner * m) > kParallelWork;
  for (std::size_t k0 = 0; k0 < inner; k0 += kKc) {
    const std::size_t kc = std::min(kKc, inner - k0);
    const bool resume = k0 > 0;
    const double* b_panel = b + k0 * ldb;
#pragma omp parallel for schedule(static) if (parallel)
    for (long blk = 0; blk < row_blocks; ++blk) {
      const std::size_t i0 = static_cast<std::size_t>(blk) * kMr;
      const std::size_t ib = std::min(kMr, n - i0);
      const double* a_tile = TransA ? a + k0 * lda + i0 : a + i0 * lda + k0;
      for (std::size_t j0 = 0; j0 < m; j0 += kNr) {
        const std::size_t jb = std::min(kNr, m - j0);
        double* c_tile = c + i0 * m + j0;
        if (ib == kMr && jb == kNr)
          gemm_full_tile<TransA>(a_tile, lda, b_panel + j0, ldb, c_tile, m, kc, resume);
        else
          gemm_edge_tile<TransA>(a_tile, lda, b_panel + j0, ldb, c_tile, m, kc, ib, jb, resume);
      }
    }
  }
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  gemm<false>(a.data(), a.cols(), b.data(), b.cols(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "matmul_tn");
  Matrix c(a.cols(), b.cols());
  gemm<true>(a.data(), a.cols(), b.data(), b.cols(), c.data(), a.cols(), a.rows(), b.cols());
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "matmul_nt");
  // b is a weight matrix here; transposing it once is cheap.
  Matrix bt(b.cols(), b.rows());
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) bt(c, r) = b(r, c);
  Matrix c(a.rows(), b.rows());
  gemm<false>(a.data(), a.cols(), bt.data(), bt.cols(), c.data(), a.rows(), a.cols(), b.rows());
  return c;
}

void add_row_vector(Matrix& m, const Matrix& bias) {
  require(bias.rows() == 1 && bias.cols() == m.cols(), "add_row_vector");
  const long rows = static_cast<long>(m.rows());
  const std::size_t cols = m.cols();
#pragma omp parallel for schedule(static) if (rows * static_cast<long>(cols) > kParallelWork)
  for (long r = 0; r < rows; ++r) {
    double* out = m.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += bias.data()[c];
  }
}

Matrix column_sums(const Matrix& m) {
  const std::size_t rows = m.rows();
  const long cols = static_cast<long>(m.cols());
  Matrix s(1, m.cols());
#pragma omp parallel for schedule(static) if (cols * static_cast<long>(rows) > kParallelWork)
  for (long c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += m.data()[r * cols + c];
    s.data()[c] = acc;
  }
  return s;
}

Matrix leaky_relu(const Matrix& x, double alpha) {
  Matrix y(x.rows(), x.cols());
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static) if (n > kParallelWork)
  for (long i = 0; i < n; ++i) {
    const double v = x.data()[i];
    y.data()[i] = v >= 0.0 ? v : alpha * v;
  }
  return y;
}

Matrix leaky_relu_backward(const Matrix& grad_out, const Matrix& pre, double alpha) {
  require(grad_out.same_shape(pre), "leaky_relu_backward");
  Matrix g(pre.rows(), pre.cols());
  const long n = static_cast<long>(pre.size());
#pragma omp parallel for schedule(static) if (n > kParallelWork)
  for (long i = 0; i < n; ++i)
    g.data()[i] = pre.data()[i] >= 0.0 ? grad_out.data()[i] : alpha * grad_out.data()[i];
  return g;
}

Matrix neighbor_mean(const Matrix& h, const Csr& adj) {
  require(adj.rows() == h.rows(), "neighbor_mean");
  const long n = static_cast<long>(h.rows());
  const std::size_t d = h.cols();
  Matrix out(h.rows(), d);
#pragma omp parallel for schedule(static) if (static_cast<long>(adj.indices.size() * d) > kParallelWork)
  for (long u = 0; u < n; ++u) {
    const auto nbrs = adj.row(u);
    if (nbrs.empty()) continue;
    double* o = out.data() + u * d;
    for (int v : nbrs) {
      const double* hv = h.data() + static_cast<std::size_t>(v) * d;
      for (std::size_t j = 0; j < d; ++j) o[j] += hv[j];
    }
    const double inv = 1.0 / static_cast<double>(nbrs.size());
    for (std::size_t j = 0; j < d; ++j) o[j] *= inv;
  }
  return out;
}

Matrix neighbor_mean_backward(const Matrix& grad_out, const Csr& adj, const Csr& adj_t) {
  require(adj.rows() == grad_out.rows() && adj_t.rows() == grad_out.rows(), "neighbor_mean_backward");
  const long n = static_cast<long>(grad_out.rows());
  const std::size_t d = grad_out.cols();
  Matrix grad_in(grad_out.rows(), d);
  // Gather form: node v collects from every u that averages over it.
#pragma omp parallel for schedule(static) if (static_cast<long>(adj.indices.size() * d) > kParallelWork)
  for (long v = 0; v < n; ++v) {
    double* g = grad_in.data() + v * d;
    for (int u : adj_t.row(v)) {
      const double w = 1.0 / static_cast<double>(adj.row_size(u));
      const double* go = grad_out.data() + static_cast<std::size_t>(u) * d;
      for (std::size_t j = 0; j < d; ++j) g[j] += w * go[j];
    }
  }
  return grad_in;
}

Matrix segment_weighted_sum(const Matrix& h, std::span<const int> graph_offsets,
                            std::span<const double> weight) {
  require(weight.size() == h.rows() && !graph_offsets.empty() &&
              static_cast<std::size_t>(graph_offsets.back()) == h.rows(),
          "segment_weighted_sum");
  const long graphs = static_cast<long>(graph_offsets.size()) - 1;
  const std::size_t d = h.cols();
  Matrix out(graphs, d);
#pragma omp parallel for schedule(static) if (static_cast<long>(h.size()) > kParallelWork)
  for (long g = 0; g < graphs; ++g) {
    double* o = out.data() + g * d;
    for (int u = graph_offsets[g]; u < graph_offsets[g + 1]; ++u) {
      const double* hu = h.data() + static_cast<std::size_t>(u) * d;
      for (std::size_t j = 0; j < d; ++j) o[j] += weight[u] * hu[j];
    }
  }
  return out;
}

Matrix segment_weighted_sum_backward(const Matrix& grad_out, std::span<const int> graph_offsets,
                                     std::span<const double> weight) {
  require(grad_out.rows() + 1 == graph_offsets.size(), "segment_weighted_sum_backward");
  const long graphs = static_cast<long>(grad_out.rows());
  const std::size_t d = grad_out.cols();
  Matrix grad_in(weight.size(), d);
#pragma omp parallel for schedule(static) if (static_cast<long>(weight.size() * d) > kParallelWork)
  for (long g = 0; g < graphs; ++g) {
    const double* go = grad_out.data() + g * d;
    for (int u = graph_offsets[g]; u < graph_offsets[g + 1]; ++u) {
      double* gi = grad_in.data() + static_cast<std::size_t>(u) * d;
      for (std::size_t j = 0; j < d; ++j) gi[j] = weight[u] * go[j];
    }
  }
  return grad_in;
}

std::vector<VisGraph> build_graphs(std::span<const std::vector<double>> series) {
  std::vector<VisGraph> graphs(series.size());
  const long count = static_cast<long>(series.size());
  // Exceptions must not escape an OpenMP region; collect the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      graphs[i] = build_nvg_dc(series[i], static_cast<int>(i));
    } catch (...) {
#pragma omp critical(gna_build_graphs)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return graphs;
}

} // namespace kernels
} // namespace gna
