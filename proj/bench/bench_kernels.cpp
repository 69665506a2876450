// Serial reference vs OpenMP kernels, plus the two exact graph builders.
//
//   bench_kernels [repetitions]

#include "gna/kernels.hpp"
#include "gna/model.hpp"
#include "gna/visibility_graph.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

using h_clock = std::chrono::steady_clock;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  const auto t0 = h_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(h_clock::now() - t0).count() / reps;
}

gna::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  gna::Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  std::mt19937_64 rng(42);

  // A batch of 32 graphs of ~100 nodes at width 128, as in training.
  std::vector<std::vector<double>> series(32);
  std::normal_distribution<double> noise;
  for (auto& s : series) {
    s.resize(100);
    for (double& v : s) v = noise(rng);
  }
  const auto graphs = gna::kernels::build_graphs(series);
  std::vector<const gna::VisGraph*> ptrs;
  for (const auto& g : graphs) ptrs.push_back(&g);
  const gna::BatchedGraph batch = gna::batch_graphs(ptrs);

  const auto h = random_matrix(batch.total_nodes(), 128, rng);
  const auto w = random_matrix(128, 128, rng);
  const auto g = random_matrix(batch.total_nodes(), 128, rng);

  namespace k = gna::kernels;
  namespace ks = gna::kernels::serial;
  report("matmul 3200x128x128", seconds([&] { ks::matmul(h, w); }, reps), seconds([&] { k::matmul(h, w); }, reps));
  report("matmul_tn (weight grad)", seconds([&] { ks::matmul_tn(h, g); }, reps),
         seconds([&] { k::matmul_tn(h, g); }, reps));
  report("matmul_nt (input grad)", seconds([&] { ks::matmul_nt(g, w); }, reps),
         seconds([&] { k::matmul_nt(g, w); }, reps));
  report("neighbor_mean", seconds([&] { ks::neighbor_mean(h, batch.neighbors); }, reps),
         seconds([&] { k::neighbor_mean(h, batch.neighbors); }, reps));
  report("neighbor_mean_backward",
         seconds([&] { ks::neighbor_mean_backward(g, batch.neighbors, batch.neighbors_t); }, reps),
         seconds([&] { k::neighbor_mean_backward(g, batch.neighbors, batch.neighbors_t); }, reps));
  report("segment_weighted_sum",
         seconds([&] { ks::segment_weighted_sum(h, batch.graph_offsets, batch.readout_weight); }, reps),
         seconds([&] { k::segment_weighted_sum(h, batch.graph_offsets, batch.readout_weight); }, reps));

  std::vector<std::vector<double>> corpus(256);
  for (auto& s : corpus) {
    s.resize(1000);
    for (double& v : s) v = noise(rng);
  }
  report("build_graphs 256 x 1000", seconds([&] { ks::build_graphs(corpus); }, reps),
         seconds([&] { k::build_graphs(corpus); }, reps));

  std::vector<double> long_series(20000);
  for (double& v : long_series) v = noise(rng);
  const double sweep = seconds([&] { gna::build_nvg_sweep(long_series); }, 1);
  const double dc = seconds([&] { gna::build_nvg_dc(long_series); }, 1);
  std::printf("%-28s sweep  %9.3f ms   dc  %9.3f ms   ratio   %5.2fx\n", "nvg builders n=20000",
              sweep * 1e3, dc * 1e3, sweep / dc);
  return 0;
}
