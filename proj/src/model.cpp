#include "gna/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gna {

std::string_view to_string(ReadoutMode mode) {
  return mode == ReadoutMode::Uniform ? "uniform" : "degree";
}

std::string_view to_string(MessageDirection direction) {
  switch (direction) {
  case MessageDirection::Forward: return "forward";
  case MessageDirection::Reverse: return "reverse";
  case MessageDirection::Both: return "both";
  }
  return "forward";
}

ReadoutMode parse_readout_mode(std::string_view text) {
  if (text == "uniform") return ReadoutMode::Uniform;
  if (text == "degree") return ReadoutMode::Degree;
  throw std::invalid_argument("unknown readout mode '" + std::string(text) + "'");
}

MessageDirection parse_direction(std::string_view text) {
  if (text == "forward") return MessageDirection::Forward;
  if (text == "reverse") return MessageDirection::Reverse;
  if (text == "both") return MessageDirection::Both;
  throw std::invalid_argument("unknown direction '" + std::string(text) + "'");
}

void ModelParams::for_each_tensor(const std::function<void(const std::string&, Matrix&)>& fn) {
  for (int k = 0; k < kSageLayers; ++k) {
    fn("sage" + std::to_string(k) + ".w_self", sage[k].w_self);
    fn("sage" + std::to_string(k) + ".w_neigh", sage[k].w_neigh);
  }
  for (int k = 0; k < kDenseLayers; ++k) {
    fn("mlpp" + std::to_string(k) + ".w", mlpp[k].w);
    fn("mlpp" + std::to_string(k) + ".b", mlpp[k].b);
  }
}

void ModelParams::for_each_tensor(
    const std::function<void(const std::string&, const Matrix&)>& fn) const {
  const_cast<ModelParams*>(this)->for_each_tensor(
      [&](const std::string& name, Matrix& m) { fn(name, m); });
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out;
  for_each_tensor([&](const std::string&, Matrix& m) { out.push_back(&m); });
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t count = 0;
  for_each_tensor([&](const std::string&, const Matrix& m) { count += m.size(); });
  return count;
}

namespace {

void validate_dims(int nhid, int num_classes) {
  if (nhid <= 0 || nhid % 4 != 0)
    throw std::invalid_argument("nhid must be a positive multiple of 4, got " + std::to_string(nhid));
  if (num_classes < 2)
    throw std::invalid_argument("need at least 2 classes, got " + std::to_string(num_classes));
}

std::array<int, kDenseLayers + 1> dense_dims(int nhid, int num_classes) {
  return {nhid, nhid / 2, nhid / 4, num_classes};
}

} // namespace

std::size_t parameter_count(int nhid, int num_classes) {
  validate_dims(nhid, num_classes);
  const std::size_t h = nhid;
  std::size_t count = 2 * (kInputFeatures * h) + (kSageLayers - 1) * (2 * h * h);
  const auto dims = dense_dims(nhid, num_classes);
  for (int k = 0; k < kDenseLayers; ++k)
    count += static_cast<std::size_t>(dims[k]) * dims[k + 1] + dims[k + 1];
  return count;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  z.for_each_tensor([](const std::string&, Matrix& m) { m.fill(0.0); });
  return z;
}

ModelParams init_params(int nhid, int num_classes, std::uint64_t seed, double alpha) {
  validate_dims(nhid, num_classes);
  if (alpha < 0.0) throw std::invalid_argument("LeakyReLU slope must be >= 0");

  ModelParams p;
  p.nhid = nhid;
  p.num_classes = num_classes;
  p.alpha = alpha;
  p.seed = seed;

  std::mt19937_64 rng(seed);
  auto glorot = [&rng](std::size_t d_in, std::size_t d_out) {
    const double bound = std::sqrt(6.0 / static_cast<double>(d_in + d_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(d_in, d_out);
    for (double& v : w.values()) v = dist(rng);
    return w;
  };

  for (int k = 0; k < kSageLayers; ++k) {
    const int d_in = k == 0 ? kInputFeatures : nhid;
    p.sage[k].w_self = glorot(d_in, nhid);
    p.sage[k].w_neigh = glorot(d_in, nhid);
  }
  const auto dims = dense_dims(nhid, num_classes);
  for (int k = 0; k < kDenseLayers; ++k) {
    p.mlpp[k].w = glorot(dims[k], dims[k + 1]);
    p.mlpp[k].b = Matrix(1, dims[k + 1]);
  }
  return p;
}

BatchedGraph batch_graphs(std::span<const VisGraph* const> graphs, MessageDirection direction,
                          ReadoutMode readout) {
  BatchedGraph b;
  for (const VisGraph* g : graphs) {
    if (g->num_nodes() < 1) throw std::invalid_argument("batch_graphs: graph without nodes");
    b.graph_offsets.push_back(b.graph_offsets.back() + g->num_nodes());
  }
  const int total = b.graph_offsets.back();
  b.graph_of_node.reserve(total);
  b.readout_weight.reserve(total);
  b.neighbors.offsets.reserve(total + 1);

  std::vector<int> merged;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const VisGraph& g = *graphs[gi];
    const int shift = b.graph_offsets[gi];
    const int n = g.num_nodes();

    double degree_total = 0.0;
    for (int u = 0; u < n; ++u) degree_total += g.in_degree(u) + g.out_degree(u);

    for (int u = 0; u < n; ++u) {
      b.graph_of_node.push_back(static_cast<int>(gi));
      if (readout == ReadoutMode::Degree && degree_total > 0.0)
        b.readout_weight.push_back((g.in_degree(u) + g.out_degree(u)) / degree_total);
      else
        b.readout_weight.push_back(1.0 / n);

      merged.clear();
      const auto pred = g.predecessors(u);
      const auto succ = g.successors(u);
      switch (direction) {
      case MessageDirection::Forward: merged.assign(pred.begin(), pred.end()); break;
      case MessageDirection::Reverse: merged.assign(succ.begin(), succ.end()); break;
      case MessageDirection::Both:
        // Predecessors are all < u < successors, so concatenation stays sorted.
        merged.assign(pred.begin(), pred.end());
        merged.insert(merged.end(), succ.begin(), succ.end());
        break;
      }
      for (int v : merged) b.neighbors.indices.push_back(v + shift);
      b.neighbors.offsets.push_back(static_cast<int>(b.neighbors.indices.size()));
    }
  }
  b.neighbors_t = transpose(b.neighbors, total);
  return b;
}

Matrix stack_rows(std::span<const Matrix* const> blocks) {
  std::size_t rows = 0, cols = blocks.empty() ? 0 : blocks.front()->cols();
  for (const Matrix* m : blocks) {
    if (m->cols() != cols) throw std::invalid_argument("stack_rows: column mismatch");
    rows += m->rows();
  }
  Matrix out(rows, cols);
  double* dst = out.data();
  for (const Matrix* m : blocks) dst = std::copy(m->data(), m->data() + m->size(), dst);
  return out;
}

double leaky_relu(double x, double alpha) { return x >= 0.0 ? x : alpha * x; }
double leaky_relu_grad(double x, double alpha) { return x >= 0.0 ? 1.0 : alpha; }
Matrix leaky_relu(const Matrix& x, double alpha) { return kernels::leaky_relu(x, alpha); }

namespace {

Matrix sage_preactivation(const Matrix& h, const Matrix& agg, const SageLayer& layer) {
  if (h.cols() != layer.w_self.rows() || layer.w_self.rows() != layer.w_neigh.rows() ||
      layer.w_self.cols() != layer.w_neigh.cols())
    throw std::invalid_argument("sage layer: dimension mismatch");
  Matrix pre = kernels::matmul(h, layer.w_self);
  const Matrix neigh = kernels::matmul(agg, layer.w_neigh);
  for (std::size_t i = 0; i < pre.size(); ++i) pre.data()[i] += neigh.data()[i];
  return pre;
}

Matrix dense_preactivation(const Matrix& x, const DenseLayer& layer) {
  Matrix pre = kernels::matmul(x, layer.w);
  kernels::add_row_vector(pre, layer.b);
  return pre;
}

} // namespace

Matrix sage_forward(const Matrix& h, const BatchedGraph& graph, const SageLayer& layer, double alpha) {
  if (h.rows() != static_cast<std::size_t>(graph.total_nodes()))
    throw std::invalid_argument("sage_forward: feature rows do not match node count");
  return kernels::leaky_relu(sage_preactivation(h, kernels::neighbor_mean(h, graph.neighbors), layer),
                             alpha);
}

Matrix mean_readout(const Matrix& h, const BatchedGraph& graph) {
  if (h.rows() != static_cast<std::size_t>(graph.total_nodes()))
    throw std::invalid_argument("mean_readout: feature rows do not match node count");
  return kernels::segment_weighted_sum(h, graph.graph_offsets, graph.readout_weight);
}

Matrix log_softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto row = logits.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t c = 0; c < row.size(); ++c) out(r, c) = row[c] - lse;
  }
  return out;
}

Matrix mlpp_forward(const Matrix& pooled, const ModelParams& params) {
  Matrix x = pooled;
  for (int k = 0; k < kDenseLayers; ++k) {
    Matrix pre = dense_preactivation(x, params.mlpp[k]);
    x = k + 1 < kDenseLayers ? kernels::leaky_relu(pre, params.alpha) : std::move(pre);
  }
  return log_softmax(x);
}

double nll_loss(const Matrix& log_probs, std::span<const int> labels) {
  if (labels.size() != log_probs.rows() || labels.empty())
    throw std::invalid_argument("nll_loss: label count does not match batch size");
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] < 0 || static_cast<std::size_t>(labels[b]) >= log_probs.cols())
      throw std::out_of_range("nll_loss: label " + std::to_string(labels[b]) + " out of range");
    total -= log_probs(b, labels[b]);
  }
  return total / static_cast<double>(labels.size());
}

ForwardTrace forward(const ModelParams& params, const Matrix& features, const BatchedGraph& graph) {
  if (features.rows() != static_cast<std::size_t>(graph.total_nodes()) ||
      features.cols() != static_cast<std::size_t>(kInputFeatures))
    throw std::invalid_argument("forward: features must be total_nodes x 2");

  ForwardTrace t;
  t.node_h[0] = features;
  for (int k = 0; k < kSageLayers; ++k) {
    t.node_agg[k] = kernels::neighbor_mean(t.node_h[k], graph.neighbors);
    t.node_pre[k] = sage_preactivation(t.node_h[k], t.node_agg[k], params.sage[k]);
    t.node_h[k + 1] = kernels::leaky_relu(t.node_pre[k], params.alpha);
  }
  t.pooled = mean_readout(t.node_h[kSageLayers], graph);

  Matrix x = t.pooled;
  for (int k = 0; k < kDenseLayers; ++k) {
    t.dense_in[k] = x;
    t.dense_pre[k] = dense_preactivation(x, params.mlpp[k]);
    if (k + 1 < kDenseLayers) x = kernels::leaky_relu(t.dense_pre[k], params.alpha);
  }
  t.log_probs = log_softmax(t.dense_pre[kDenseLayers - 1]);
  assert(all_finite(t.log_probs));
  return t;
}

Matrix predict_log_probs(const ModelParams& params, const Matrix& features, const BatchedGraph& graph) {
  return forward(params, features, graph).log_probs;
}

ModelParams backward(const ModelParams& params, const BatchedGraph& graph, const ForwardTrace& trace,
                     std::span<const int> labels) {
  const std::size_t batch = trace.log_probs.rows();
  if (labels.size() != batch) throw std::invalid_argument("backward: label count mismatch");
  ModelParams grad = zeros_like(params);

  // d(mean NLL)/d(logits) = (softmax - onehot) / B.
  Matrix delta(batch, trace.log_probs.cols());
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t c = 0; c < delta.cols(); ++c)
      delta(b, c) = (std::exp(trace.log_probs(b, c)) - (static_cast<int>(c) == labels[b] ? 1.0 : 0.0)) /
                    static_cast<double>(batch);

  for (int k = kDenseLayers - 1; k >= 0; --k) {
    grad.mlpp[k].w = kernels::matmul_tn(trace.dense_in[k], delta);
    grad.mlpp[k].b = kernels::column_sums(delta);
    Matrix upstream = kernels::matmul_nt(delta, params.mlpp[k].w);
    delta = k > 0 ? kernels::leaky_relu_backward(upstream, trace.dense_pre[k - 1], params.alpha)
                  : std::move(upstream);
  }

  Matrix node_grad = kernels::segment_weighted_sum_backward(delta, graph.graph_offsets, graph.readout_weight);
  for (int k = kSageLayers - 1; k >= 0; --k) {
    const Matrix pre_grad = kernels::leaky_relu_backward(node_grad, trace.node_pre[k], params.alpha);
    grad.sage[k].w_self = kernels::matmul_tn(trace.node_h[k], pre_grad);
    grad.sage[k].w_neigh = kernels::matmul_tn(trace.node_agg[k], pre_grad);
    if (k == 0) break;
    node_grad = kernels::matmul_nt(pre_grad, params.sage[k].w_self);
    const Matrix agg_grad = kernels::matmul_nt(pre_grad, params.sage[k].w_neigh);
    const Matrix scattered = kernels::neighbor_mean_backward(agg_grad, graph.neighbors, graph.neighbors_t);
    for (std::size_t i = 0; i < node_grad.size(); ++i) node_grad.data()[i] += scattered.data()[i];
  }
  return grad;
}

LossAndGradients loss_and_gradients(const ModelParams& params, const Matrix& features,
                                    const BatchedGraph& graph, std::span<const int> labels) {
  const ForwardTrace trace = forward(params, features, graph);
  LossAndGradients out;
  out.loss = nll_loss(trace.log_probs, labels);
  out.gradients = backward(params, graph, trace, labels);
  return out;
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

} // namespace gna
