#pragma once

#include "gna/kernels.hpp"
#include "gna/matrix.hpp"
#include "gna/visibility_graph.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gna {

enum class ReadoutMode { Uniform, Degree };
enum class MessageDirection { Forward, Reverse, Both };

std::string_view to_string(ReadoutMode mode);
std::string_view to_string(MessageDirection direction);
ReadoutMode parse_readout_mode(std::string_view text);
MessageDirection parse_direction(std::string_view text);

inline constexpr int kInputFeatures = 2;
inline constexpr int kSageLayers = 4;
inline constexpr int kDenseLayers = 3;

// Mean-aggregator GraphSAGE layer without bias:
// out_u = LeakyReLU(h_u * w_self + mean_{v in N(u)} h_v * w_neigh).
struct SageLayer {
  Matrix w_self;  // d_in x d_out
  Matrix w_neigh; // d_in x d_out
};

struct DenseLayer {
  Matrix w; // d_in x d_out
  Matrix b; // 1 x d_out
};

/// Trainable weights plus the fixed architecture choices needed to run them.
/// Gradients use the same type.
struct ModelParams {
  int nhid = 0;
  int num_classes = 0;
  double alpha = 1e-2;
  std::uint64_t seed = 0;
  ReadoutMode readout = ReadoutMode::Uniform;
  MessageDirection direction = MessageDirection::Forward;
  std::array<SageLayer, kSageLayers> sage;
  std::array<DenseLayer, kDenseLayers> mlpp;

  // Visits every tensor in a fixed order with a stable name.
  void for_each_tensor(const std::function<void(const std::string&, Matrix&)>& fn);
  void for_each_tensor(const std::function<void(const std::string&, const Matrix&)>& fn) const;
  std::vector<Matrix*> tensors();

  std::size_t parameter_count() const;
};

std::size_t parameter_count(int nhid, int num_classes);

// Same shapes and settings, all entries zero.
ModelParams zeros_like(const ModelParams& params);

/// Glorot-uniform weights, zero biases; identical for identical arguments.
/// nhid must be a positive multiple of 4 and num_classes >= 2.
ModelParams init_params(int nhid, int num_classes, std::uint64_t seed, double alpha = 1e-2);

/// Disjoint union of several graphs with node indices shifted per graph.
struct BatchedGraph {
  std::vector<int> graph_offsets{0}; // graph g owns nodes [offsets[g], offsets[g+1])
  std::vector<int> graph_of_node;
  Csr neighbors;   // row u: nodes whose embeddings u averages
  Csr neighbors_t; // transpose of `neighbors`
  std::vector<double> readout_weight; // per node; sums to 1 within each graph

  int num_graphs() const noexcept { return static_cast<int>(graph_offsets.size()) - 1; }
  int total_nodes() const noexcept { return graph_offsets.back(); }
};

BatchedGraph batch_graphs(std::span<const VisGraph* const> graphs,
                          MessageDirection direction = MessageDirection::Forward,
                          ReadoutMode readout = ReadoutMode::Uniform);

// Row-stacks per-graph feature matrices in batch order.
Matrix stack_rows(std::span<const Matrix* const> blocks);

Matrix leaky_relu(const Matrix& x, double alpha);
double leaky_relu(double x, double alpha);
double leaky_relu_grad(double x, double alpha);

Matrix sage_forward(const Matrix& h, const BatchedGraph& graph, const SageLayer& layer, double alpha);
Matrix mean_readout(const Matrix& h, const BatchedGraph& graph);
Matrix log_softmax(const Matrix& logits);
// Dense head on pooled embeddings; returns log-probabilities (B x C).
Matrix mlpp_forward(const Matrix& pooled, const ModelParams& params);
// Mean over the batch of -log_probs[b, labels[b]].
double nll_loss(const Matrix& log_probs, std::span<const int> labels);

/// Everything the backward pass needs.
struct ForwardTrace {
  std::array<Matrix, kSageLayers + 1> node_h; // node_h[0] = input features
  std::array<Matrix, kSageLayers> node_agg;   // neighbor means fed to layer k
  std::array<Matrix, kSageLayers> node_pre;   // pre-activations of layer k
  Matrix pooled;
  std::array<Matrix, kDenseLayers> dense_in;  // input to dense layer k
  std::array<Matrix, kDenseLayers> dense_pre; // pre-activation of dense layer k
  Matrix log_probs;
};

ForwardTrace forward(const ModelParams& params, const Matrix& features, const BatchedGraph& graph);

// Log-probabilities only.
Matrix predict_log_probs(const ModelParams& params, const Matrix& features, const BatchedGraph& graph);

// Exact gradients of nll_loss(trace.log_probs, labels) w.r.t. every parameter.
ModelParams backward(const ModelParams& params, const BatchedGraph& graph, const ForwardTrace& trace,
                     std::span<const int> labels);

struct LossAndGradients {
  double loss = 0.0;
  ModelParams gradients;
};

LossAndGradients loss_and_gradients(const ModelParams& params, const Matrix& features,
                                    const BatchedGraph& graph, std::span<const int> labels);

bool all_finite(const Matrix& m);

} // namespace gna
