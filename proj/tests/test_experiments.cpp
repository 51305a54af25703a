#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphon_sync/errors.hpp"
#include "graphon_sync/experiments.hpp"
#include "graphon_sync/graphon.hpp"
#include "graphon_sync/theory.hpp"

using namespace gsync;

namespace {

ExperimentConfig quick_config() {
  ExperimentConfig cfg;
  cfg.integrator = {0.01, 50.0, 1};
  cfg.trials = 1;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("initial-condition presets") {
    InitialCondition lin;
    CHECK(lin.function()(0.25) == 0.25);
    InitialCondition cosine{"cosine", 2.0};
    CHECK(cosine.function()(0.5) == doctest::Approx(-2.0));
    InitialCondition zero_of_j0{"cosine", 2.404825557695773};
    CHECK_THROWS_AS(zero_of_j0.validate(), ConfigError);
    InitialCondition smooth{"uniform-random-smooth", 1.0, 3, 99};
    const auto f = smooth.function();
    const auto g = smooth.function();
    CHECK(f(0.37) == g(0.37));
    CHECK(f(0.0) == doctest::Approx(f(1.0)));
    InitialCondition other{"uniform-random-smooth", 1.0, 3, 100};
    CHECK(other.function()(0.37) != f(0.37));
    CHECK_THROWS_AS(InitialCondition{"square"}.validate(), ConfigError);
  }

  TEST_CASE("derived seeds") {
    std::set<std::uint64_t> seen;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t c = 0; c < 4; ++c)
          for (std::size_t t = 0; t < 8; ++t) seen.insert(derive_seed(7, a, b, c, t));
    CHECK(seen.size() == 4 * 4 * 4 * 8);
    CHECK(derive_seed(7, 1, 2, 3, 4) == derive_seed(7, 1, 2, 3, 4));
    CHECK(derive_seed(7, 1, 2, 3, 4) != derive_seed(8, 1, 2, 3, 4));
    CHECK(derive_seed(7, 1, 2, 3, 4) != derive_seed(7, 2, 1, 3, 4));
  }

  TEST_CASE("two oscillators synchronise") {
    const auto rec = run_trial(2, 1.0, 0.0, 5, quick_config());
    CHECK(rec.phase_sync);
    CHECK(rec.freq_sync);
    CHECK(rec.connected);
    CHECK_FALSE(rec.diverged);
    CHECK(rec.final_r == doctest::Approx(1.0));
  }

  TEST_CASE("empty sampled graph") {
    const double p = 1e-12;
    REQUIRE(erdos_renyi(3, p, 5).edge_count() == 0);
    const auto rec = run_trial(3, p, 0.0, 5, quick_config());
    CHECK(rec.freq_sync);
    CHECK_FALSE(rec.phase_sync);
    CHECK_FALSE(rec.connected);
    CHECK(rec.final_freq_spread == 0.0);
  }

  TEST_CASE("run_trial is deterministic") {
    auto cfg = quick_config();
    cfg.integrator.horizon = 10.0;
    const auto a = run_trial(30, 0.3, 0.1, 77, cfg, 4);
    const auto b = run_trial(30, 0.3, 0.1, 77, cfg, 4);
    CHECK(a == b);
    CHECK(a.trial_index == 4);
    CHECK(a.derived_seed == 77);
  }

  TEST_CASE("single-cell diagram matches run_trial") {
    auto cfg = quick_config();
    cfg.n_grid = {2};
    cfg.p_grid = {1.0};
    cfg.beta_grid = {0.0};
    const auto diagram = run_phase_diagram(cfg);
    REQUIRE(diagram.cells.size() == 1);
    REQUIRE(diagram.records.size() == 1);
    const auto rec = run_trial(2, 1.0, 0.0, derive_seed(cfg.master_seed, 0, 0, 0, 0), cfg);
    CHECK(diagram.records[0] == rec);
    CHECK(diagram.cells[0].freq_sync_fraction() == (rec.freq_sync ? 1.0 : 0.0));
    CHECK(diagram.cells[0].phase_sync_fraction() == (rec.phase_sync ? 1.0 : 0.0));
  }

  TEST_CASE("complete graph Kuramoto phase-synchronises") {
    ExperimentConfig cfg;
    cfg.n_grid = {50};
    cfg.p_grid = {1.0};
    cfg.beta_grid = {0.0};
    cfg.trials = 10;
    const auto diagram = run_phase_diagram(cfg);
    CHECK(diagram.cells[0].phase_sync_fraction() == 1.0);
    CHECK(diagram.cells[0].freq_sync_fraction() == 1.0);
  }

  TEST_CASE("diagram output is independent of the worker count") {
    ExperimentConfig cfg;
    cfg.n_grid = {10, 25};
    cfg.p_grid = {0.1, 0.6};
    cfg.beta_grid = {0.0, 0.3};
    cfg.trials = 3;
    cfg.integrator = {0.05, 20.0, 1};
    cfg.threads = 1;
    const auto one = run_phase_diagram(cfg);
    cfg.threads = 8;
    const auto eight = run_phase_diagram(cfg);
    CHECK(one.records == eight.records);
    std::ostringstream a, b;
    emit_csv(one.cells, a);
    emit_csv(eight.cells, b);
    CHECK(a.str() == b.str());

    for (const auto& c : one.cells) {
      const double k = c.freq_sync_fraction() * c.trials;
      CHECK(k == std::round(k));
      const double j = c.phase_sync_fraction() * c.trials;
      CHECK(j == std::round(j));
    }
  }

  TEST_CASE("dense Erdos-Renyi graphs are connected") {
    for (std::size_t n : {100, 200}) {
      const double p = 4.0 * connectivity_threshold(n);
      int disconnected = 0;
      for (std::uint64_t s = 0; s < 100; ++s) disconnected += !is_connected(erdos_renyi(n, p, s));
      CHECK(disconnected <= 5);
    }
  }

  TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_grid.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.p_grid = {1.5};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.integrator.step = 0.3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("JSON configs") {
    const auto cfg = parse_experiment_config(R"({
      "n_grid": [50, 100], "p_grid": [0.2], "beta_grid": [0, 0.1],
      "trials": 7, "master_seed": 11, "threads": 2,
      "eta": {"preset": "cosine", "amplitude": 1.5},
      "integrator": {"step": 0.02, "horizon": 4},
      "detector": {"phase_tol": 0.05, "freq_tol": 0.002}
    })");
    CHECK(cfg.n_grid == std::vector<std::size_t>{50, 100});
    CHECK(cfg.beta_grid.size() == 2);
    CHECK(cfg.trials == 7);
    CHECK(cfg.master_seed == 11);
    CHECK(cfg.eta.preset == "cosine");
    CHECK(cfg.eta.amplitude == 1.5);
    CHECK(cfg.integrator.steps() == 200);
    CHECK(cfg.phase_tol == 0.05);
    CHECK(cfg.freq_tol == 0.002);

    CHECK(parse_experiment_config("{}").trials == 50);
    CHECK_THROWS_AS(parse_experiment_config("{\"trails\": 3}"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("{\"trials\": \"x\"}"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("{nope"), ConfigError);
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), IoError);

    const auto conv = parse_convergence_config(
        R"({"n_list": [8, 16], "m_ref": 64, "trials": 2, "eta": "constant"})");
    CHECK(conv.m_ref == 64);
    CHECK(conv.eta.preset == "constant");
    CHECK_THROWS_AS(parse_convergence_config(R"({"n_list": [8, 24], "m_ref": 64})"), ConfigError);
  }

  TEST_CASE("convergence study at a fixed point") {
    ConvergenceConfig cfg;
    cfg.n_list = {64};
    cfg.m_ref = 64;
    cfg.trials = 2;
    cfg.eta = {"constant", 0.7};
    const auto rows = run_convergence_study(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ads_error <= 1e-8);
    CHECK(rows[0].sds_max <= 1e-8);
  }

  TEST_CASE("convergence study trend at small scale") {
    ConvergenceConfig cfg;
    cfg.n_list = {16, 32, 64, 128};
    cfg.m_ref = 1024;
    cfg.trials = 5;
    cfg.alpha = 0.8;
    const auto rows = run_convergence_study(cfg);
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(rows[k].ads_error < rows[k - 1].ads_error);
      CHECK(rows[k - 1].ads_error / rows[k].ads_error >= 1.5);
      CHECK(rows[k].sds_median < rows[k - 1].sds_median);
      CHECK(rows[k].sds_min <= rows[k].sds_median);
      CHECK(rows[k].sds_median <= rows[k].sds_max);
    }
    std::ostringstream out;
    emit_csv(rows, out);
    CHECK(lines_of(out.str()).size() == 5);
    CHECK(lines_of(out.str())[0] == kConvergenceCsvHeader);
  }

  TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(median({}), ParameterError);
  }

  TEST_CASE("CSV output") {
    std::ostringstream empty;
    emit_csv(std::vector<TrialRecord>{}, empty);
    CHECK(empty.str() ==
          "n,p,beta,trial,seed,connected,phase_sync,freq_sync,final_r,final_diameter,final_freq_spread\n");

    TrialRecord rec;
    rec.n = 100;
    rec.p = 0.5;
    rec.beta = 0.125663706143592;
    rec.trial_index = 3;
    rec.derived_seed = 42;
    rec.connected = true;
    rec.freq_sync = true;
    rec.final_r = 0.999999999876;
    rec.final_diameter = 1.0 / 3.0;
    rec.final_freq_spread = 2e-7;
    std::ostringstream one;
    emit_csv(std::vector<TrialRecord>{rec}, one);
    const auto lines = lines_of(one.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "100,0.5,0.125663706,3,42,1,0,1,1,0.333333333,2e-07");

    TrialRecord later = rec;
    later.trial_index = 1;
    TrialRecord smaller = rec;
    smaller.n = 50;
    std::ostringstream sorted;
    emit_csv(std::vector<TrialRecord>{rec, later, smaller}, sorted);
    const auto rows = lines_of(sorted.str());
    CHECK(rows[1].rfind("50,", 0) == 0);
    CHECK(rows[2].rfind("100,0.5,0.125663706,1,", 0) == 0);
    CHECK(rows[3].rfind("100,0.5,0.125663706,3,", 0) == 0);

    std::ostringstream grid;
    emit_csv(std::vector<CellSummary>{}, grid);
    CHECK(grid.str() == "n,p,beta,freq_sync_fraction,phase_sync_fraction,trials\n");

    CHECK_THROWS_AS(emit_csv(std::vector<TrialRecord>{}, std::string("/nonexistent/dir/out.csv")),
                    IoError);
  }
}
