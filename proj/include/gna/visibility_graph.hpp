#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gna {

using Edge = std::pair<int, int>;

/// Directed natural visibility graph of a series. Node i is the sample at
/// time i; every edge points forward in time (i -> j with i < j), so the
/// graph is a DAG whose topological order is 0..n-1.
///
/// Adjacency is stored twice in compressed form: successors (out) and
/// predecessors (in), both sorted ascending per node.
class VisGraph {
public:
  VisGraph() = default;

  // Builds from an edge list. Edges are validated (0 <= i < j < n) and
  // deduplicated; order does not matter.
  static VisGraph from_edges(int n, std::vector<Edge> edges, int series_id = -1);

  int num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }
  int series_id() const noexcept { return series_id_; }

  std::span<const int> successors(int u) const {
    return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const int> predecessors(int u) const {
    return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
  }
  int out_degree(int u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  int in_degree(int u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

  // Edges in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const VisGraph& a, const VisGraph& b) {
    return a.n_ == b.n_ && a.out_offsets_ == b.out_offsets_ && a.out_targets_ == b.out_targets_;
  }

private:
  int n_ = 0;
  int series_id_ = -1;
  std::vector<int> out_offsets_{0};
  std::vector<int> out_targets_;
  std::vector<int> in_offsets_{0};
  std::vector<int> in_sources_;
};

// Visibility criterion between samples a < b (unit time spacing). Adjacent
// samples always see each other; collinear intermediate samples block.
// Throws std::out_of_range on bad indices.
bool visible(std::span<const double> values, int a, int b);

// O(n^2) worst case: for each source a, scan right keeping the steepest
// slope seen so far; b is visible iff its slope is strictly steeper.
VisGraph build_nvg_sweep(std::span<const double> values, int series_id = -1);

// Divide and conquer on the range maximum: the maximum of [l, r] blocks
// every edge crossing it, so its incident edges are found by two linear
// sweeps and the two sides are solved independently. O(n log n) on typical
// inputs, O(n^2) for monotone series. Iterative, so deep recursion on
// monotone input is not a problem.
VisGraph build_nvg_dc(std::span<const double> values, int series_id = -1);

// Histogram of total degree (in + out). Counts sum to n.
std::map<int, int> degree_distribution(const VisGraph& graph);

// Text format: header `VG <n> <num_edges> <series_id> <label>` followed by one
// `i j` line per edge in lexicographic order. Several records may be
// concatenated in one stream.
struct GraphRecord {
  VisGraph graph;
  int label = -1;
};

void write_graph(std::ostream& out, const VisGraph& graph, int label);
std::vector<GraphRecord> read_graphs(std::istream& in, const std::string& source = "<stream>");

} // namespace gna
