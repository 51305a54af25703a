#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "graphon_sync/errors.hpp"
#include "graphon_sync/graphon.hpp"
#include "graphon_sync/rng.hpp"

using namespace gsync;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact cell average of sin(pi x) sin(pi y) over [a,b]x[a,b].
double product_sine_diagonal_cell(double a, double b) {
  const double one_dim = (std::cos(kPi * a) - std::cos(kPi * b)) / (kPi * (b - a));
  return one_dim * one_dim;
}

SampledNetwork complete_graph(std::size_t n) { return erdos_renyi(n, 1.0, 0); }

}  // namespace

TEST_SUITE("graphon") {
  TEST_CASE("presets are symmetric and bounded") {
    const std::vector<Graphon> presets{Graphon::constant(1.0), Graphon::constant(0.3),
                                       Graphon::product_sine()};
    SplitMix64 rng(7);
    for (const auto& g : presets) {
      for (int k = 0; k < 2000; ++k) {
        const double x = rng.uniform(), y = rng.uniform();
        CHECK(g(x, y) == g(y, x));
        CHECK(g(x, y) >= 0.0);
        CHECK(g(x, y) <= 1.0);
      }
    }
  }

  TEST_CASE("grid kernels are symmetrised") {
    // Deliberately asymmetric input grid.
    std::vector<double> values{0.0, 0.2, 0.9,
                               0.6, 0.5, 0.1,
                               0.3, 0.8, 1.0};
    const Graphon g = Graphon::from_grid(values, 3);
    SplitMix64 rng(11);
    for (int k = 0; k < 2000; ++k) {
      const double x = rng.uniform(), y = rng.uniform();
      CHECK(std::abs(g(x, y) - g(y, x)) <= 1e-12);
      CHECK(g(x, y) >= 0.0);
      CHECK(g(x, y) <= 1.0);
    }
    CHECK(g(0.0, 0.0) == doctest::Approx(0.0));
    CHECK(g(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(g(0.0, 0.5) == doctest::Approx(0.5 * (0.2 + 0.6)));

    CHECK_THROWS_AS(Graphon::from_grid({0.5}, 1), ParameterError);
    CHECK_THROWS_AS(Graphon::from_grid({0.1, 0.2, 0.3, 1.5}, 2), ParameterError);
  }

  TEST_CASE("labels") {
    CHECK(Graphon::from_label("constant-1")(0.2, 0.7) == 1.0);
    CHECK(Graphon::from_label("constant-0.25")(0.2, 0.7) == 0.25);
    CHECK(Graphon::from_label("product-sine")(0.5, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Graphon::from_label("triangle"), ParameterError);
    CHECK_THROWS_AS(Graphon::from_label("constant-x"), ParameterError);
    CHECK_THROWS_AS(Graphon::constant(1.5), ParameterError);
  }

  TEST_CASE("discretize constant graphon") {
    const auto d = discretize(Graphon::constant(1.0), 5);
    CHECK(d.n() == 5);
    for (double v : d.cells()) CHECK(v == 1.0);

    for (double c : {0.0, 0.125, 0.5, 0.9, 1.0}) {
      const auto dc = discretize(Graphon::constant(c), 7);
      for (double v : dc.cells()) CHECK(v == c);
    }
  }

  TEST_CASE("discretize product-sine against the analytic cell average") {
    const auto d = discretize(Graphon::product_sine(), 5);
    const double oracle = product_sine_diagonal_cell(0.4, 0.6);
    CHECK(oracle == doctest::Approx(0.9675312).epsilon(1e-6));
    CHECK(std::abs(d(2, 2) - oracle) <= 1e-10);

    // Independent Monte Carlo estimate of the same cell.
    SplitMix64 rng(2024);
    double acc = 0.0;
    const int samples = 1'000'000;
    for (int k = 0; k < samples; ++k) {
      const double x = 0.4 + 0.2 * rng.uniform();
      const double y = 0.4 + 0.2 * rng.uniform();
      acc += std::sin(kPi * x) * std::sin(kPi * y);
    }
    CHECK(std::abs(acc / samples - d(2, 2)) <= 1e-4);

    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) CHECK(d(i, j) == d(j, i));
  }

  TEST_CASE("n = 1 gives the integral over the unit square") {
    CHECK(discretize(Graphon::product_sine(), 1)(0, 0) ==
          doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-9));
    CHECK(discretize(Graphon::constant(0.4), 1)(0, 0) == 0.4);
  }

  TEST_CASE("discretize rejects bad input") {
    CHECK_THROWS_AS(discretize(Graphon::constant(1.0), 0), ParameterError);
    const Graphon bad("bad", [](double x, double) { return x > 0.5 ? std::nan("") : 0.5; });
    CHECK_THROWS_AS(discretize(bad, 4), EvaluationError);
  }

  TEST_CASE("complete and empty samples") {
    const auto full = sample_network(discretize(Graphon::constant(1.0), 8), 1.0, 3);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) CHECK(full.adjacent(i, j) == (i != j));

    const DiscretizedGraphon zeros(6, std::vector<double>(36, 0.0));
    CHECK(sample_network(zeros, 1.0, 9).edge_count() == 0);
    CHECK(sample_network(zeros, 0.3, 9).edge_count() == 0);
  }

  TEST_CASE("alpha must lie in (0, 1]") {
    const auto d = discretize(Graphon::constant(1.0), 4);
    CHECK_THROWS_AS(sample_network(d, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(sample_network(d, 1.5, 1), ParameterError);
    CHECK_THROWS_AS(erdos_renyi(4, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(erdos_renyi(4, -0.2, 1), ParameterError);
  }

  TEST_CASE("edge density at n = 2000 stays in the binomial band") {
    const std::size_t n = 2000;
    const auto net = sample_network(discretize(Graphon::constant(1.0), n), 0.5, 42);
    const double pairs = n * (n - 1) / 2.0;
    const double sigma = std::sqrt(0.25 / pairs);
    CHECK(std::abs(net.edge_density() - 0.5) <= 6 * sigma);
    CHECK(std::abs(net.edge_density() - 0.5) <= 0.0051 * 0.5);
  }

  TEST_CASE("erdos_renyi matches sampling the constant graphon") {
    for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
      CHECK(erdos_renyi(50, 0.3, seed) ==
            sample_network(discretize(Graphon::constant(1.0), 50), 0.3, seed));
    }
    const auto tri = erdos_renyi(3, 1.0, 5);
    CHECK(tri.edge_count() == 3);
    const auto k10 = erdos_renyi(10, 1.0, 5);
    for (std::size_t i = 0; i < 10; ++i) CHECK(k10.degree(i) == 9);
    CHECK(erdos_renyi(100, 0.2, 77) == erdos_renyi(100, 0.2, 77));
    CHECK_FALSE(erdos_renyi(100, 0.2, 77) == erdos_renyi(100, 0.2, 78));
  }

  TEST_CASE("sampled networks are symmetric with zero diagonal") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 1 + rng() % 60;
      const double alpha = 0.05 + 0.95 * rng.uniform();
      const auto net = sample_network(discretize(Graphon::product_sine(), n), alpha, rng());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK_FALSE(net.adjacent(i, i));
        for (std::size_t j = 0; j < n; ++j) CHECK(net.adjacent(i, j) == net.adjacent(j, i));
        for (auto j : net.neighbors(i)) CHECK(net.adjacent(i, j));
      }
    }
  }

  TEST_CASE("per-pair edge frequency over many seeds") {
    const auto d = discretize(Graphon::product_sine(), 6);
    const double alpha = 0.7;
    const int seeds = 10'000;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{2, 3}, std::pair{5, 2}}) {
      int hits = 0;
      for (int s = 0; s < seeds; ++s) hits += sample_network(d, alpha, s).adjacent(i, j);
      const double p = alpha * d(i, j);
      const double sigma = std::sqrt(p * (1 - p) / seeds);
      CHECK(std::abs(hits / double(seeds) - p) <= 5 * sigma);
    }
  }

  TEST_CASE("connectivity") {
    CHECK(is_connected(complete_graph(5)));
    CHECK(is_connected(complete_graph(1)));
    const DiscretizedGraphon zeros(3, std::vector<double>(9, 0.0));
    CHECK_FALSE(is_connected(sample_network(zeros, 1.0, 0)));

    std::vector<std::pair<std::size_t, std::size_t>> triangles{{0, 1}, {1, 2}, {0, 2},
                                                               {3, 4}, {4, 5}, {3, 5}};
    CHECK_FALSE(is_connected(SampledNetwork::from_edges(6, 1.0, 0, triangles)));
    triangles.emplace_back(2, 3);
    CHECK(is_connected(SampledNetwork::from_edges(6, 1.0, 0, triangles)));
  }

  TEST_CASE("edge-list round trip") {
    const auto net = erdos_renyi(40, 0.15, 31337);
    std::stringstream ss;
    write_edge_list(net, ss);
    const std::string text = ss.str();
    CHECK(text.rfind("# n=40 alpha=0.15 seed=31337\n", 0) == 0);
    CHECK(read_edge_list(ss) == net);

    std::istringstream bad("# n=3 alpha=1 seed=0\n0 3\n");
    CHECK_THROWS_AS(read_edge_list(bad), InputError);
    std::istringstream no_header("0 1\n");
    CHECK_THROWS_AS(read_edge_list(no_header), InputError);
  }

  TEST_CASE("edge list is ascending with i < j") {
    const auto net = erdos_renyi(12, 0.5, 8);
    std::stringstream ss;
    write_edge_list(net, ss);
    std::string line;
    std::getline(ss, line);
    std::size_t pi = 0, pj = 0, lines = 0;
    std::size_t i, j;
    while (ss >> i >> j) {
      CHECK(i < j);
      if (lines > 0) CHECK((i > pi || (i == pi && j > pj)));
      pi = i;
      pj = j;
      ++lines;
    }
    CHECK(lines == net.edge_count());
  }

  TEST_CASE("from_adjacency validation") {
    CHECK_THROWS_AS(SampledNetwork::from_adjacency(2, 1.0, 0, {1, 0, 0, 0}), InputError);
    CHECK_THROWS_AS(SampledNetwork::from_adjacency(2, 1.0, 0, {0, 1, 0, 0}), InputError);
    CHECK_THROWS_AS(SampledNetwork::from_adjacency(2, 1.0, 0, {0, 1, 1}), DimensionError);
    const auto net = SampledNetwork::from_adjacency(2, 1.0, 0, {0, 1, 1, 0});
    CHECK(net.edge_count() == 1);
  }
}
