#pragma once

#include "gna/matrix.hpp"
#include "gna/visibility_graph.hpp"

#include <iosfwd>
#include <vector>

namespace gna {

std::vector<double> in_degree(const VisGraph& graph);

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-9;
  int max_iter = 200;
};

struct PageRankResult {
  std::vector<double> scores;
  int iterations = 0;
  double residual = 0.0; // L1 change of the last iteration
  bool converged = false;
};

// Power iteration on the graph as built (edges forward in time). Nodes
// without successors spread their mass uniformly over all nodes.
PageRankResult pagerank_detailed(const VisGraph& graph, const PageRankOptions& options = {});

// Scores only; logs a warning with the residual when max_iter is reached.
std::vector<double> pagerank(const VisGraph& graph, const PageRankOptions& options = {});

/// n x 2 node features: column 0 in-degree, column 1 PageRank. With
/// `normalize` each column is z-normalized within the graph (a constant
/// column becomes zeros).
Matrix node_feature_matrix(const VisGraph& graph, bool normalize = false,
                           const PageRankOptions& options = {});

// CSV with header `node,in_degree,pagerank`.
void write_feature_csv(std::ostream& out, const Matrix& features);

} // namespace gna
