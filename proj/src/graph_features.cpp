#include "gna/graph_features.hpp"

#include "gna/series_io.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <stdexcept>

namespace gna {

std::vector<double> in_degree(const VisGraph& graph) {
  std::vector<double> deg(graph.num_nodes());
  for (int u = 0; u < graph.num_nodes(); ++u) deg[u] = graph.in_degree(u);
  return deg;
}

PageRankResult pagerank_detailed(const VisGraph& graph, const PageRankOptions& options) {
  const int n = graph.num_nodes();
  if (n < 1) throw std::invalid_argument("pagerank: empty graph");
  if (!(options.damping > 0.0 && options.damping < 1.0))
    throw std::invalid_argument("pagerank: damping must lie in (0, 1)");

  const double d = options.damping;
  const double inv_n = 1.0 / n;
  PageRankResult result;
  std::vector<double> rank(n, inv_n), next(n);

  for (int it = 1; it <= options.max_iter; ++it) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v)
      if (graph.out_degree(v) == 0) dangling += rank[v];

    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    for (int u = 0; u < n; ++u) {
      double incoming = 0.0;
      for (int v : graph.predecessors(u)) incoming += rank[v] / graph.out_degree(v);
      next[u] = base + d * incoming;
    }

    double change = 0.0;
    for (int u = 0; u < n; ++u) change += std::abs(next[u] - rank[u]);
    rank.swap(next);
    result.iterations = it;
    result.residual = change;
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }

  double total = 0.0;
  for (double r : rank) total += r;
  for (double& r : rank) r /= total;
  result.scores = std::move(rank);
  return result;
}

std::vector<double> pagerank(const VisGraph& graph, const PageRankOptions& options) {
  auto result = pagerank_detailed(graph, options);
  if (!result.converged)
    std::clog << "[gna] warning: pagerank did not converge in " << result.iterations
              << " iterations (residual " << result.residual << ")\n";
  return std::move(result.scores);
}

Matrix node_feature_matrix(const VisGraph& graph, bool normalize, const PageRankOptions& options) {
  const int n = graph.num_nodes();
  std::vector<double> deg = in_degree(graph);
  std::vector<double> pr = pagerank(graph, options);
  if (normalize) {
    deg = znormalize(deg);
    pr = znormalize(pr);
  }
  Matrix features(n, 2);
  for (int u = 0; u < n; ++u) {
    features(u, 0) = deg[u];
    features(u, 1) = pr[u];
  }
  return features;
}

void write_feature_csv(std::ostream& out, const Matrix& features) {
  out << "node,in_degree,pagerank\n";
  const auto old = out.precision(17);
  for (std::size_t u = 0; u < features.rows(); ++u)
    out << u << ',' << features(u, 0) << ',' << features(u, 1) << '\n';
  out.precision(old);
}

} // namespace gna
