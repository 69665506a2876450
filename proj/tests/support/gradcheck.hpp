#pragma once

#include "gna/model.hpp"

#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gna::testing {

struct GradCheckResult {
  // Max relative error per tensor, |analytic - numeric| / max(|analytic|, |numeric|, floor).
  std::map<std::string, double> max_error;
  // Entries whose +-eps probes put some LeakyReLU input on different sides of
  // zero; those were re-probed with eps/10 (down to 1e-9) until they did not.
  int kink_retries = 0;
  int entries = 0;
};

// Central finite differences of the mean NLL for every parameter entry,
// compared with backward().
GradCheckResult gradient_check(const ModelParams& params, const Matrix& features, const BatchedGraph& graph,
                               std::span<const int> labels, double eps = 1e-5, double floor = 1e-6);

// A random small problem: `graphs` visibility graphs of 3..max_nodes nodes
// with random features and labels in [0, num_classes).
struct RandomProblem {
  std::vector<VisGraph> graphs;
  std::vector<Matrix> features;
  std::vector<int> labels;
  BatchedGraph batch;
  Matrix stacked;
};

RandomProblem random_problem(int graphs, int max_nodes, int num_classes, std::mt19937_64& rng,
                             MessageDirection direction = MessageDirection::Forward,
                             ReadoutMode readout = ReadoutMode::Uniform);

} // namespace gna::testing
