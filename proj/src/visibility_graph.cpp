#include "gna/visibility_graph.hpp"

#include "gna/errors.hpp"
#include "gna/exact_predicate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gna {

VisGraph VisGraph::from_edges(int n, std::vector<Edge> edges, int series_id) {
  if (n < 0) throw std::invalid_argument("negative node count");
  for (const auto& [i, j] : edges)
    if (i < 0 || j >= n || i >= j)
      throw std::invalid_argument("invalid edge " + std::to_string(i) + " -> " + std::to_string(j));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  VisGraph g;
  g.n_ = n;
  g.series_id_ = series_id;
  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const auto& [i, j] : edges) {
    ++g.out_offsets_[i + 1];
    ++g.in_offsets_[j + 1];
  }
  for (int u = 0; u < n; ++u) {
    g.out_offsets_[u + 1] += g.out_offsets_[u];
    g.in_offsets_[u + 1] += g.in_offsets_[u];
  }
  g.out_targets_.resize(edges.size());
  g.in_sources_.resize(edges.size());
  std::vector<int> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // Edges are sorted by (i, j), so targets land sorted per source and
  // sources land sorted per target.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    g.out_targets_[e] = j;
    g.in_sources_[in_fill[j]++] = i;
  }
  return g;
}

std::vector<Edge> VisGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (int u = 0; u < n_; ++u)
    for (int v : successors(u)) out.emplace_back(u, v);
  return out;
}

bool visible(std::span<const double> values, int a, int b) {
  const int n = static_cast<int>(values.size());
  if (a < 0 || b >= n || a >= b)
    throw std::out_of_range("visible: need 0 <= a < b < n, got a=" + std::to_string(a) +
                            " b=" + std::to_string(b) + " n=" + std::to_string(n));
  for (int c = a + 1; c < b; ++c)
    if (!strictly_below(values, a, c, b)) return false;
  return true;
}

namespace {

void require_length(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("series too short for a visibility graph (need n >= 2, got " +
                                std::to_string(values.size()) + ")");
}

} // namespace

VisGraph build_nvg_sweep(std::span<const double> values, int series_id) {
  require_length(values);
  const int n = static_cast<int>(values.size());
  std::vector<Edge> edges;
  for (int a = 0; a + 1 < n; ++a) {
    int steepest = a + 1;
    edges.emplace_back(a, a + 1);
    for (int b = a + 2; b < n; ++b) {
      if (strictly_below(values, a, steepest, b)) {
        edges.emplace_back(a, b);
        steepest = b;
      }
    }
  }
  return VisGraph::from_edges(n, std::move(edges), series_id);
}

VisGraph build_nvg_dc(std::span<const double> values, int series_id) {
  require_length(values);
  const int n = static_cast<int>(values.size());
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * 4);

  std::vector<std::pair<int, int>> ranges{{0, n - 1}};
  while (!ranges.empty()) {
    const auto [lo, hi] = ranges.back();
    ranges.pop_back();
    if (lo >= hi) continue;

    int pivot = lo;
    for (int i = lo + 1; i <= hi; ++i)
      if (values[i] > values[pivot]) pivot = i;

    if (pivot < hi) {
      int steepest = pivot + 1;
      edges.emplace_back(pivot, steepest);
      for (int b = pivot + 2; b <= hi; ++b) {
        if (strictly_below(values, pivot, steepest, b)) {
          edges.emplace_back(pivot, b);
          steepest = b;
        }
      }
    }
    if (pivot > lo) {
      int steepest = pivot - 1;
      edges.emplace_back(steepest, pivot);
      for (int a = pivot - 2; a >= lo; --a) {
        if (strictly_below(values, a, steepest, pivot)) {
          edges.emplace_back(a, pivot);
          steepest = a;
        }
      }
    }
    ranges.emplace_back(lo, pivot - 1);
    ranges.emplace_back(pivot + 1, hi);
  }
  return VisGraph::from_edges(n, std::move(edges), series_id);
}

std::map<int, int> degree_distribution(const VisGraph& graph) {
  std::map<int, int> hist;
  for (int u = 0; u < graph.num_nodes(); ++u) ++hist[graph.in_degree(u) + graph.out_degree(u)];
  return hist;
}

void write_graph(std::ostream& out, const VisGraph& graph, int label) {
  out << "VG " << graph.num_nodes() << ' ' << graph.num_edges() << ' ' << graph.series_id() << ' '
      << label << '\n';
  for (int u = 0; u < graph.num_nodes(); ++u)
    for (int v : graph.successors(u)) out << u << ' ' << v << '\n';
}

std::vector<GraphRecord> read_graphs(std::istream& in, const std::string& source) {
  std::vector<GraphRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream header(line);
    std::string tag;
    long long n = 0, m = 0;
    int series_id = 0, label = 0;
    if (!(header >> tag >> n >> m >> series_id >> label) || tag != "VG" || n < 0 || m < 0)
      throw ParseError(source, line_no, 0, "expected 'VG <n> <num_edges> <series_id> <label>'");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long e = 0; e < m; ++e) {
      if (!std::getline(in, line)) throw ParseError(source, line_no, 0, "truncated edge list");
      ++line_no;
      std::istringstream row(line);
      int i = 0, j = 0;
      if (!(row >> i >> j) || i < 0 || j >= n || i >= j)
        throw ParseError(source, line_no, 0, "bad edge line '" + line + "'");
      edges.emplace_back(i, j);
    }
    records.push_back({VisGraph::from_edges(static_cast<int>(n), std::move(edges), series_id), label});
  }
  return records;
}

} // namespace gna
