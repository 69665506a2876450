#include "gna/exact_predicate.hpp"
#include "gna/visibility_graph.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>
#include <gmpxx.h>

#include <random>
#include <sstream>

using namespace gna;
using gna::testing::brute_oracle;
using gna::testing::edge_set;

TEST_SUITE("vg_builder") {

TEST_CASE("visible follows the strict criterion") {
  const std::vector<double> dip{3, 1, 2};
  CHECK(visible(dip, 0, 2));
  const std::vector<double> line{1, 2, 3};
  CHECK_FALSE(visible(line, 0, 2));
  std::vector<double> any{9, -4, 100, 3, 7, -50, 2};
  CHECK(visible(any, 4, 5));
  for (int a = 0; a + 1 < static_cast<int>(any.size()); ++a) CHECK(visible(any, a, a + 1));
}

TEST_CASE("visible rejects bad indices") {
  const std::vector<double> y{1, 2, 3};
  CHECK_THROWS_AS(visible(y, 1, 1), std::out_of_range);
  CHECK_THROWS_AS(visible(y, 2, 1), std::out_of_range);
  CHECK_THROWS_AS(visible(y, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(visible(y, -1, 2), std::out_of_range);
}

namespace {

int gmp_sign(double p, double q, double ya, double yb, double yc) {
  const mpq_class v = mpq_class(p) * mpq_class(yc) - mpq_class(q) * mpq_class(yb) + mpq_class(q - p) * mpq_class(ya);
  return sgn(v);
}

} // namespace

TEST_CASE("exact predicate agrees with rational arithmetic on near-degenerate input") {
  // 0.1, 0.2, 0.3 are not collinear in binary: the middle sample sits just
  // above the chord, which a plain double evaluation cannot resolve.
  CHECK(exact_sign(2, 1, 0.1, 0.3, 0.2) == gmp_sign(2, 1, 0.1, 0.3, 0.2));
  CHECK(exact_sign(2, 1, 0.1, 0.3, 0.2) == 1);
  CHECK(exact_sign(2, 1, 1.0, 3.0, 2.0) == 0);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(-1e3, 1e3);
  std::uniform_int_distribution<int> offs(1, 5000);
  for (int i = 0; i < 20000; ++i) {
    const double p = offs(rng) + 1;
    const double q = std::uniform_int_distribution<int>(1, static_cast<int>(p) - 1)(rng);
    const double ya = uni(rng), yb = uni(rng);
    // Put c on the chord, then nudge by a few ulps.
    double yc = ya + (yb - ya) * q / p;
    for (int k = 0; k < i % 4; ++k) yc = std::nextafter(yc, i % 2 ? 1e9 : -1e9);
    CHECK(exact_sign(p, q, ya, yb, yc) == gmp_sign(p, q, ya, yb, yc));
  }
}

TEST_CASE("builders on small hand-checked series") {
  const std::vector<double> dip{3, 1, 2};
  const std::set<Edge> dip_edges{{0, 1}, {1, 2}, {0, 2}};
  CHECK(edge_set(build_nvg_sweep(dip)) == dip_edges);
  CHECK(edge_set(build_nvg_dc(dip)) == dip_edges);
  CHECK(brute_oracle(dip) == dip_edges);

  const std::vector<double> line{1, 2, 3};
  const std::set<Edge> chain{{0, 1}, {1, 2}};
  CHECK(edge_set(build_nvg_sweep(line)) == chain);
  CHECK(edge_set(build_nvg_dc(line)) == chain);

  CHECK(brute_oracle(std::vector<double>{1, 1}) == std::set<Edge>{{0, 1}});
  const std::set<Edge> valley{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}, {0, 3}};
  CHECK(brute_oracle(std::vector<double>{2, 1, 1, 2}) == valley);
  CHECK(edge_set(build_nvg_dc(std::vector<double>{2, 1, 1, 2})) == valley);
}

TEST_CASE("series shorter than 2 is rejected") {
  const std::vector<double> one{5};
  CHECK_THROWS_AS(build_nvg_sweep(one), std::invalid_argument);
  CHECK_THROWS_AS(build_nvg_dc(one), std::invalid_argument);
}

TEST_CASE("brute oracle guards its size") {
  std::vector<double> big(2049, 0.0);
  CHECK_THROWS_AS(brute_oracle(big), std::invalid_argument);
}

TEST_CASE("monotone series give a chain; deep pivot sequence does not recurse") {
  for (int k : {2, 3, 10, 1000}) {
    std::vector<double> up(k), down(k);
    for (int i = 0; i < k; ++i) {
      up[i] = i + 1;
      down[i] = k - i;
    }
    CHECK(build_nvg_dc(up).num_edges() == static_cast<std::size_t>(k - 1));
    CHECK(build_nvg_dc(down).num_edges() == static_cast<std::size_t>(k - 1));
  }
  std::vector<double> ramp(5000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(ramp.size() - i);
  CHECK(build_nvg_dc(ramp).num_edges() == ramp.size() - 1);
}

TEST_CASE("sweep, divide-and-conquer and brute oracle agree on random series") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(2, 128);
  for (int trial = 0; trial < 200; ++trial) {
    const auto kind = testing::kGenerators[trial % 4];
    const auto y = trial % 5 == 4 ? testing::quantized_walk(len(rng), rng) : testing::generate(kind, len(rng), rng);
    const auto oracle = brute_oracle(y);
    CHECK(edge_set(build_nvg_sweep(y)) == oracle);
    CHECK(edge_set(build_nvg_dc(y)) == oracle);
  }
}

TEST_CASE("divide-and-conquer matches sweep on 1000 uniform values") {
  std::mt19937_64 rng(99);
  const auto y = testing::generate(testing::Generator::Uniform, 1000, rng);
  CHECK(build_nvg_dc(y) == build_nvg_sweep(y));
}

TEST_CASE("structural invariants") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto y = testing::generate(testing::kGenerators[trial % 4], 2 + trial * 7, rng);
    const VisGraph g = build_nvg_dc(y);
    std::size_t in_total = 0;
    for (int u = 0; u < g.num_nodes(); ++u) {
      for (int v : g.successors(u)) CHECK(v > u);
      if (u + 1 < g.num_nodes()) {
        const auto s = g.successors(u);
        REQUIRE_FALSE(s.empty());
        CHECK(s.front() == u + 1);
      }
      in_total += g.predecessors(u).size();
      for (int p : g.predecessors(u)) {
        const auto s = g.successors(p);
        CHECK(std::binary_search(s.begin(), s.end(), u));
      }
    }
    CHECK(in_total == g.num_edges());
  }
}

TEST_CASE("degree distribution") {
  const auto chain = degree_distribution(build_nvg_dc(std::vector<double>{1, 2, 3}));
  CHECK(chain == std::map<int, int>{{1, 2}, {2, 1}});
  const auto dip = degree_distribution(build_nvg_dc(std::vector<double>{3, 1, 2}));
  CHECK(dip == std::map<int, int>{{2, 3}});

  std::mt19937_64 rng(8);
  const auto y = testing::generate(testing::Generator::Spiky, 300, rng);
  int total = 0;
  for (const auto& [deg, count] : degree_distribution(build_nvg_dc(y))) {
    CHECK(deg >= 1);
    total += count;
  }
  CHECK(total == 300);
}

TEST_CASE("from_edges validates and deduplicates") {
  CHECK_THROWS_AS(VisGraph::from_edges(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(VisGraph::from_edges(3, {{2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(VisGraph::from_edges(3, {{0, 3}}), std::invalid_argument);
  const auto g = VisGraph::from_edges(3, {{1, 2}, {0, 1}, {0, 1}});
  CHECK(g.num_edges() == 2);
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
}

TEST_CASE("graph text format") {
  const VisGraph g = build_nvg_dc(std::vector<double>{3, 1, 2}, 7);
  std::ostringstream out;
  write_graph(out, g, 1);
  CHECK(out.str() == "VG 3 3 7 1\n0 1\n0 2\n1 2\n");

  std::mt19937_64 rng(1);
  std::ostringstream corpus;
  std::vector<VisGraph> originals;
  for (int i = 0; i < 5; ++i) {
    originals.push_back(build_nvg_dc(testing::generate(testing::Generator::Gaussian, 40, rng), i));
    write_graph(corpus, originals.back(), i % 2);
  }
  std::istringstream in(corpus.str());
  const auto records = read_graphs(in);
  REQUIRE(records.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(records[i].graph == originals[i]);
    CHECK(records[i].graph.series_id() == i);
    CHECK(records[i].label == i % 2);
  }

  std::istringstream truncated("VG 3 2 0 0\n0 1\n");
  CHECK_THROWS(read_graphs(truncated));
  std::istringstream backwards("VG 3 1 0 0\n2 1\n");
  CHECK_THROWS(read_graphs(backwards));
}

TEST_CASE("serialization is deterministic") {
  std::mt19937_64 rng(12);
  const auto y = testing::generate(testing::Generator::Uniform, 500, rng);
  std::ostringstream a, b;
  write_graph(a, build_nvg_dc(y), 0);
  write_graph(b, build_nvg_dc(y), 0);
  CHECK(a.str() == b.str());
}

}
