// gsync: command-line front end for sampling networks, running the oscillator
// systems and the Monte Carlo sweeps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphon_sync/dynamics.hpp"
#include "graphon_sync/errors.hpp"
#include "graphon_sync/experiments.hpp"
#include "graphon_sync/graphon.hpp"
#include "graphon_sync/integrator.hpp"
#include "graphon_sync/observables.hpp"
#include "graphon_sync/theory.hpp"
#include "graphon_sync/ws_reduction.hpp"

using namespace gsync;

namespace {

struct EtaOptions {
  std::string preset = "linear";
  double amplitude = 1.0;
  std::size_t modes = 3;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app) {
    app->add_option("--eta", preset, "initial condition: linear, cosine, constant, uniform-random-smooth")
        ->capture_default_str();
    app->add_option("--amplitude", amplitude, "initial condition amplitude")->capture_default_str();
    app->add_option("--modes", modes, "Fourier modes of uniform-random-smooth")->capture_default_str();
    app->add_option("--eta-seed", seed, "seed of uniform-random-smooth coefficients");
  }
  InitialCondition get() const { return {preset, amplitude, modes, seed}; }
};

// Either a file or stdout, chosen by whether --out was given.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (!path_.empty()) {
      file_.open(path_);
      if (!file_) throw IoError("cannot open '" + path_ + "' for writing");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void close() {
    if (path_.empty()) return;
    file_.flush();
    if (!file_) throw IoError("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CouplingSpec coupling_for(double beta) {
  return beta == 0.0 ? CouplingSpec::kuramoto() : CouplingSpec::sakaguchi(beta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kuramoto-type oscillators on graphon random networks"};
  app.require_subcommand(1);

  // sample-graph
  auto* sample = app.add_subcommand("sample-graph", "sample a W-random network, write an edge list");
  std::string sg_graphon = "constant-1";
  std::size_t sg_n = 100;
  double sg_alpha = 1.0;
  std::uint64_t sg_seed = 1;
  std::string sg_out;
  sample->add_option("--graphon", sg_graphon, "constant-<c> or product-sine")->capture_default_str();
  sample->add_option("-n,--n", sg_n, "number of vertices")->capture_default_str();
  sample->add_option("--alpha", sg_alpha, "edge probability scale")->capture_default_str();
  sample->add_option("--seed", sg_seed, "sampling seed")->capture_default_str();
  sample->add_option("--out", sg_out, "edge-list path (stdout when omitted)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "integrate one system and report the order parameter");
  std::string sim_system = "sds";
  std::string sim_graphon = "constant-1";
  std::size_t sim_n = 100;
  double sim_alpha = 1.0, sim_beta = 0.0, sim_step = 0.01, sim_horizon = 10.0;
  std::size_t sim_stride = 10;
  std::uint64_t sim_seed = 1;
  std::string sim_out, sim_edges;
  EtaOptions sim_eta;
  simulate->add_option("--system", sim_system, "sds, ads or cds")
      ->check(CLI::IsMember({"sds", "ads", "cds"}))
      ->capture_default_str();
  simulate->add_option("--graphon", sim_graphon, "constant-<c> or product-sine")->capture_default_str();
  simulate->add_option("--edges", sim_edges, "edge list to use instead of sampling (sds only)");
  simulate->add_option("-n,--n", sim_n, "oscillators or mesh points")->capture_default_str();
  simulate->add_option("--alpha", sim_alpha, "edge probability scale")->capture_default_str();
  simulate->add_option("--beta", sim_beta, "phase shift")->capture_default_str();
  simulate->add_option("--step", sim_step, "RK4 step")->capture_default_str();
  simulate->add_option("--horizon", sim_horizon, "final time")->capture_default_str();
  simulate->add_option("--stride", sim_stride, "store every k-th step")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "sampling seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "time-series CSV (stdout when omitted)");
  sim_eta.add_to(simulate);

  // phase-diagram
  auto* diagram = app.add_subcommand("phase-diagram", "Monte Carlo sync fractions over an (n, p, beta) grid");
  std::string pd_config, pd_out, pd_grid_out;
  std::optional<std::uint64_t> pd_seed;
  std::optional<std::size_t> pd_threads;
  diagram->add_option("--config", pd_config, "JSON experiment config")->check(CLI::ExistingFile);
  diagram->add_option("--seed", pd_seed, "override master_seed");
  diagram->add_option("--threads", pd_threads, "override worker count");
  diagram->add_option("--out", pd_out, "per-trial CSV (stdout when omitted)");
  diagram->add_option("--grid-out", pd_grid_out, "per-cell fraction CSV");

  // convergence
  auto* convergence = app.add_subcommand("convergence", "sup-norm error of the finite systems against the continuum");
  std::string cv_config, cv_out;
  std::optional<std::uint64_t> cv_seed;
  std::optional<std::size_t> cv_threads;
  convergence->add_option("--config", cv_config, "JSON convergence config")->check(CLI::ExistingFile);
  convergence->add_option("--seed", cv_seed, "override master_seed");
  convergence->add_option("--threads", cv_threads, "override worker count");
  convergence->add_option("--out", cv_out, "CSV path (stdout when omitted)");

  // bound-curve
  auto* bound = app.add_subcommand("bound-curve", "minimal edge probability for a given phase shift");
  std::vector<std::size_t> bc_n{50, 100, 200, 500, 1000, 5000};
  std::vector<double> bc_beta{0.0, std::numbers::pi / 50, std::numbers::pi / 25};
  std::string bc_out;
  bound->add_option("--n", bc_n, "network sizes")->capture_default_str();
  bound->add_option("--beta", bc_beta, "phase shifts")->capture_default_str();
  bound->add_option("--out", bc_out, "CSV path (stdout when omitted)");

  // ws-check
  auto* ws = app.add_subcommand("ws-check", "solve the reduction frame and compare with direct integration");
  std::size_t ws_m = 512;
  double ws_beta = 0.0, ws_step = 1e-3, ws_horizon = 5.0;
  EtaOptions ws_eta;
  ws->add_option("-m,--m", ws_m, "mesh size")->capture_default_str();
  ws->add_option("--beta", ws_beta, "phase shift")->capture_default_str();
  ws->add_option("--step", ws_step, "RK4 step")->capture_default_str();
  ws->add_option("--horizon", ws_horizon, "final time")->capture_default_str();
  ws_eta.add_to(ws);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      const auto net = sample_network(discretize(Graphon::from_label(sg_graphon), sg_n), sg_alpha, sg_seed);
      Sink sink(sg_out);
      write_edge_list(net, sink.stream());
      sink.close();
      std::cerr << "edges=" << net.edge_count() << " connected=" << is_connected(net) << '\n';
    } else if (*simulate) {
      const CouplingSpec coupling = coupling_for(sim_beta);
      const Graphon graphon = Graphon::from_label(sim_graphon);
      Rhs rhs;
      std::size_t n = sim_n;
      if (sim_system == "sds") {
        const auto net = sim_edges.empty()
                             ? sample_network(discretize(graphon, n), sim_alpha, sim_seed)
                             : read_edge_list_file(sim_edges);
        n = net.n();
        rhs = make_sds_rhs(net, coupling);
      } else if (sim_system == "ads") {
        rhs = make_ads_rhs(discretize(graphon, n), coupling);
      } else {
        rhs = make_cds_rhs(graphon, coupling);
      }
      IntegratorConfig icfg{sim_step, sim_horizon, sim_stride};
      const auto traj = integrate(rhs, discretize_initial(sim_eta.get().function(), n), icfg);

      Sink sink(sim_out);
      auto& out = sink.stream();
      out << "t,r,psi,diameter\n";
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto op = order_parameter(traj.states[k]);
        out << fmt(traj.times[k]) << ',' << fmt(op.r) << ','
            << (op.psi ? fmt(*op.psi) : std::string("nan")) << ','
            << fmt(phase_diameter(traj.states[k])) << '\n';
      }
      sink.close();
      const auto v = sync_verdict(traj);
      std::cerr << "phase_sync=" << v.phase_sync << " freq_sync=" << v.freq_sync
                << " final_r=" << fmt(v.final_r) << '\n';
    } else if (*diagram) {
      ExperimentConfig cfg = pd_config.empty() ? ExperimentConfig{} : load_experiment_config(pd_config);
      if (pd_seed) cfg.master_seed = *pd_seed;
      if (pd_threads) cfg.threads = *pd_threads;
      const auto result = run_phase_diagram(cfg);
      Sink sink(pd_out);
      emit_csv(result.records, sink.stream());
      sink.close();
      if (!pd_grid_out.empty()) emit_csv(result.cells, pd_grid_out);
    } else if (*convergence) {
      ConvergenceConfig cfg = cv_config.empty() ? ConvergenceConfig{} : load_convergence_config(cv_config);
      if (cv_seed) cfg.master_seed = *cv_seed;
      if (cv_threads) cfg.threads = *cv_threads;
      const auto rows = run_convergence_study(cfg);
      Sink sink(cv_out);
      emit_csv(rows, sink.stream());
      sink.close();
    } else if (*bound) {
      Sink sink(bc_out);
      write_bound_curve_csv(bound_curve(bc_n, bc_beta), sink.stream());
      sink.close();
    } else if (*ws) {
      const PhaseField theta0 = discretize_initial(ws_eta.get().function(), ws_m);
      const auto sol = solve_initial_frame(theta0);
      std::cout << "gamma0=" << fmt(sol.state.gamma) << " Psi0=" << fmt(sol.state.Psi)
                << " Theta0=" << fmt(sol.state.Theta) << " roots=" << sol.roots.size() << '\n';
      std::cout << "frame residuals: mean=" << fmt(sol.frame.residual_mean)
                << " cos=" << fmt(sol.frame.residual_cos) << " sin=" << fmt(sol.frame.residual_sin)
                << '\n';
      const auto steps = static_cast<std::size_t>(std::llround(ws_horizon / ws_step));
      IntegratorConfig icfg{ws_step, ws_horizon, steps};
      const auto reduced = integrate_reduced(sol.state, sol.frame, ws_beta, icfg);
      const auto direct = integrate(make_cds_rhs(Graphon::constant(1.0), coupling_for(ws_beta)),
                                    theta0, icfg);
      if (reduced.synchronized) {
        std::cout << "reduced flow reached gamma=1 at t=" << fmt(reduced.times.back()) << '\n';
      } else {
        const double gap = linf_distance(reconstruct_field(reduced.states.back(), sol.frame),
                                         direct.final_state());
        std::cout << "reconstruction vs direct at T: " << fmt(gap) << '\n';
      }
      IntegratorConfig fine{ws_step, ws_horizon, 1};
      const auto dense = integrate_reduced(sol.state, sol.frame, ws_beta, fine);
      std::cout << "max |dH/dt - r^2 cos beta| = "
                << fmt(hdot_identity_residual(dense, sol.frame, ws_beta)) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
