#pragma once

#include <span>
#include <vector>

namespace gna {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Confusion matrix (rows = true class, cols = predicted) with
/// macro-averaged scores. An undefined per-class ratio (0/0) counts as 0,
/// and the macro value is the unweighted mean over all classes.
struct MetricsReport {
  std::vector<std::vector<long>> confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;

  long total() const;
};

MetricsReport metrics_from_confusion(std::vector<std::vector<long>> confusion);
MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              int num_classes);

// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> row);

} // namespace gna
