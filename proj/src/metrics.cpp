#include "gna/metrics.hpp"

#include <stdexcept>
#include <string>

namespace gna {

long MetricsReport::total() const {
  long t = 0;
  for (const auto& row : confusion)
    for (long c : row) t += c;
  return t;
}

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

} // namespace

MetricsReport metrics_from_confusion(std::vector<std::vector<long>> confusion) {
  const std::size_t k = confusion.size();
  for (const auto& row : confusion)
    if (row.size() != k) throw std::invalid_argument("confusion matrix must be square");

  MetricsReport r;
  r.confusion = std::move(confusion);
  r.per_class.resize(k);
  long trace = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long tp = r.confusion[c][c], actual = 0, predicted = 0;
    for (std::size_t j = 0; j < k; ++j) {
      actual += r.confusion[c][j];
      predicted += r.confusion[j][c];
    }
    trace += tp;
    ClassScores& s = r.per_class[c];
    s.precision = safe_ratio(tp, predicted);
    s.recall = safe_ratio(tp, actual);
    s.f1 = safe_ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    r.precision += s.precision;
    r.recall += s.recall;
    r.f1 += s.f1;
  }
  if (k > 0) {
    r.precision /= k;
    r.recall /= k;
    r.f1 /= k;
  }
  r.accuracy = safe_ratio(trace, r.total());
  return r;
}

MetricsReport compute_metrics(std::span<const int> truth, std::span<const int> predicted,
                              int num_classes) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("compute_metrics: size mismatch");
  std::vector<std::vector<long>> confusion(num_classes, std::vector<long>(num_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes)
      throw std::out_of_range("compute_metrics: class id out of range at index " + std::to_string(i));
    ++confusion[truth[i]][predicted[i]];
  }
  return metrics_from_confusion(std::move(confusion));
}

int argmax(std::span<const double> row) {
  int best = 0;
  for (std::size_t c = 1; c < row.size(); ++c)
    if (row[c] > row[best]) best = static_cast<int>(c);
  return best;
}

} // namespace gna
