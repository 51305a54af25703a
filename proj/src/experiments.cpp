#include "graphon_sync/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "format.hpp"
#include "graphon_sync/dynamics.hpp"
#include "graphon_sync/errors.hpp"
#include "graphon_sync/graphon.hpp"
#include "graphon_sync/observables.hpp"
#include "graphon_sync/rng.hpp"

namespace gsync {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct tags keep the per-index streams of derive_seed apart.
constexpr std::uint64_t kTagN = 0x6e5f696e64657821ULL;
constexpr std::uint64_t kTagP = 0x705f696e64657821ULL;
constexpr std::uint64_t kTagBeta = 0x625f696e64657821ULL;
constexpr std::uint64_t kTagTrial = 0x745f696e64657821ULL;
constexpr std::uint64_t kTagEta = 0x6574615f73656564ULL;

template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t block = (count + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(count, lo + block);
        for (std::size_t k = lo; k < hi; ++k) body(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_integrator(const IntegratorConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

auto trial_key(const TrialRecord& r) { return std::tie(r.n, r.p, r.beta, r.trial_index); }

}  // namespace

void InitialCondition::validate() const {
  if (!std::isfinite(amplitude)) throw ConfigError("eta amplitude must be finite");
  if (preset == "linear" || preset == "constant") return;
  if (preset == "cosine") {
    if (std::abs(std::cyl_bessel_j(0.0, amplitude)) <= 1e-6)
      throw ConfigError("cosine amplitude " + detail::format_sig9(amplitude) +
                        " is a zero of J0; the initial order parameter would vanish");
    return;
  }
  if (preset == "uniform-random-smooth") {
    if (modes == 0) throw ConfigError("uniform-random-smooth needs at least one mode");
    return;
  }
  throw ConfigError("unknown eta preset '" + preset + "'");
}

std::function<double(double)> InitialCondition::function() const {
  validate();
  const double a = amplitude;
  if (preset == "linear") return [a](double x) { return a * x; };
  if (preset == "constant") return [a](double) { return a; };
  if (preset == "cosine") return [a](double x) { return a * std::cos(kTwoPi * x); };

  SplitMix64 rng(seed ^ kTagEta);
  std::vector<double> cs(modes), ss(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double bound = a / static_cast<double>(k + 1);
    cs[k] = bound * (2.0 * rng.uniform() - 1.0);
    ss[k] = bound * (2.0 * rng.uniform() - 1.0);
  }
  return [cs = std::move(cs), ss = std::move(ss)](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const double w = kTwoPi * static_cast<double>(k + 1) * x;
      v += cs[k] * std::cos(w) + ss[k] * std::sin(w);
    }
    return v;
  };
}

void ExperimentConfig::validate() const {
  if (n_grid.empty() || p_grid.empty() || beta_grid.empty())
    throw ConfigError("n_grid, p_grid and beta_grid must be nonempty");
  if (trials == 0) throw ConfigError("trials must be at least 1");
  for (auto n : n_grid)
    if (n == 0) throw ConfigError("n_grid entries must be positive");
  for (double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_grid entries must lie in [0, 1]");
  for (double b : beta_grid)
    if (!(std::abs(b) < std::numbers::pi / 2))
      throw ConfigError("beta_grid entries must satisfy |beta| < pi/2");
  if (!(phase_tol > 0.0) || !(freq_tol > 0.0))
    throw ConfigError("detector tolerances must be positive");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  eta.validate();
  check_integrator(integrator);
}

bool operator==(const TrialRecord& a, const TrialRecord& b) {
  // wall_time is deliberately left out: it is the only nondeterministic field.
  return a.n == b.n && a.p == b.p && a.beta == b.beta && a.trial_index == b.trial_index &&
         a.derived_seed == b.derived_seed && a.connected == b.connected &&
         a.phase_sync == b.phase_sync && a.freq_sync == b.freq_sync &&
         a.final_r == b.final_r && a.final_diameter == b.final_diameter &&
         a.final_freq_spread == b.final_freq_spread && a.diverged == b.diverged;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t n_index, std::size_t p_index,
                          std::size_t beta_index, std::size_t trial_index) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (kTagN + n_index));
  s = splitmix64(s ^ (kTagP + p_index));
  s = splitmix64(s ^ (kTagBeta + beta_index));
  s = splitmix64(s ^ (kTagTrial + trial_index));
  return s;
}

TrialRecord run_trial(std::size_t n, double p, double beta, std::uint64_t seed,
                      const ExperimentConfig& cfg, std::size_t trial_index) {
  if (n == 0) throw ParameterError("run_trial: n must be positive");
  const auto start = std::chrono::steady_clock::now();

  TrialRecord rec;
  rec.n = n;
  rec.p = p;
  rec.beta = beta;
  rec.trial_index = trial_index;
  rec.derived_seed = seed;

  const SampledNetwork net = erdos_renyi(n, p, seed);
  rec.connected = is_connected(net);

  const CouplingSpec coupling = beta == 0.0 ? CouplingSpec::kuramoto() : CouplingSpec::sakaguchi(beta);
  const PhaseField initial = discretize_initial(cfg.eta.function(), n);

  IntegratorConfig icfg = cfg.integrator;
  icfg.store_stride = icfg.steps();
  try {
    const Trajectory traj = integrate(make_sds_rhs(net, coupling), initial, icfg);
    const SyncVerdict v = sync_verdict(traj, cfg.phase_tol, cfg.freq_tol);
    rec.phase_sync = v.phase_sync;
    rec.freq_sync = v.freq_sync;
    rec.final_r = v.final_r;
    rec.final_diameter = v.final_diameter;
    rec.final_freq_spread = v.final_freq_spread;
  } catch (const DivergenceError&) {
    rec.diverged = true;
    rec.final_r = std::nan("");
    rec.final_diameter = std::nan("");
    rec.final_freq_spread = std::nan("");
  }

  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

PhaseDiagram run_phase_diagram(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t nn = cfg.n_grid.size(), np = cfg.p_grid.size(), nb = cfg.beta_grid.size();
  const std::size_t cells = nn * np * nb;
  const std::size_t total = cells * cfg.trials;

  PhaseDiagram out;
  out.records.resize(total);
  parallel_for(total, cfg.threads, [&](std::size_t k) {
    const std::size_t trial = k % cfg.trials;
    const std::size_t cell = k / cfg.trials;
    const std::size_t bi = cell % nb;
    const std::size_t pi = (cell / nb) % np;
    const std::size_t ni = cell / (nb * np);
    out.records[k] = run_trial(cfg.n_grid[ni], cfg.p_grid[pi], cfg.beta_grid[bi],
                               derive_seed(cfg.master_seed, ni, pi, bi, trial), cfg, trial);
  });

  out.cells.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    CellSummary s;
    const TrialRecord& first = out.records[c * cfg.trials];
    s.n = first.n;
    s.p = first.p;
    s.beta = first.beta;
    s.trials = cfg.trials;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialRecord& r = out.records[c * cfg.trials + t];
      s.freq_sync += r.freq_sync;
      s.phase_sync += r.phase_sync;
      s.connected += r.connected;
      s.freq_sync_connected += r.freq_sync && r.connected;
    }
    out.cells.push_back(s);
  }
  return out;
}

void ConvergenceConfig::validate() const {
  if (n_list.empty()) throw ConfigError("n_list must be nonempty");
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (m_ref == 0) throw ConfigError("m_ref must be positive");
  for (auto n : n_list) {
    if (n == 0) throw ConfigError("n_list entries must be positive");
    if (m_ref % n != 0)
      throw ConfigError("m_ref=" + std::to_string(m_ref) + " is not a multiple of n=" +
                        std::to_string(n));
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(std::abs(beta) < std::numbers::pi / 2)) throw ConfigError("|beta| must be < pi/2");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  eta.validate();
  check_integrator(integrator);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

std::vector<ConvergenceRow> run_convergence_study(const ConvergenceConfig& cfg) {
  cfg.validate();
  const Graphon graphon = Graphon::from_label(cfg.graphon);
  const CouplingSpec coupling =
      cfg.beta == 0.0 ? CouplingSpec::kuramoto() : CouplingSpec::sakaguchi(cfg.beta);
  const auto eta = cfg.eta.function();

  IntegratorConfig icfg = cfg.integrator;
  icfg.store_stride = icfg.steps();

  const PhaseField reference =
      integrate(make_cds_rhs(graphon, coupling), discretize_initial(eta, cfg.m_ref), icfg)
          .final_state();

  std::vector<ConvergenceRow> rows;
  rows.reserve(cfg.n_list.size());
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const std::size_t n = cfg.n_list[ni];
    const DiscretizedGraphon cells = discretize(graphon, n);
    const PhaseField initial = discretize_initial(eta, n);

    ConvergenceRow row;
    row.n = n;
    row.ads_error = linf_distance(
        integrate(make_ads_rhs(cells, coupling), initial, icfg).final_state(), reference);

    row.sds_errors.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      const SampledNetwork net =
          sample_network(cells, cfg.alpha, derive_seed(cfg.master_seed, ni, 0, 0, t));
      row.sds_errors[t] = linf_distance(
          integrate(make_sds_rhs(net, coupling), initial, icfg).final_state(), reference);
    });
    row.sds_min = *std::min_element(row.sds_errors.begin(), row.sds_errors.end());
    row.sds_max = *std::max_element(row.sds_errors.begin(), row.sds_errors.end());
    row.sds_median = median(row.sds_errors);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_csv(std::vector<TrialRecord> records, std::ostream& out) {
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return trial_key(a) < trial_key(b); });
  out << kTrialCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << detail::format_sig9(r.p) << ',' << detail::format_sig9(r.beta) << ','
        << r.trial_index << ',' << r.derived_seed << ',' << int(r.connected) << ','
        << int(r.phase_sync) << ',' << int(r.freq_sync) << ',' << detail::format_sig9(r.final_r)
        << ',' << detail::format_sig9(r.final_diameter) << ','
        << detail::format_sig9(r.final_freq_spread) << '\n';
  }
}

void emit_csv(std::vector<TrialRecord> records, const std::string& path) {
  auto out = open_out(path);
  emit_csv(std::move(records), out);
  finish_out(out, path);
}

void emit_csv(std::vector<CellSummary> cells, std::ostream& out) {
  std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return std::tie(a.n, a.p, a.beta) < std::tie(b.n, b.p, b.beta);
  });
  out << kGridCsvHeader << '\n';
  for (const auto& c : cells) {
    out << c.n << ',' << detail::format_sig9(c.p) << ',' << detail::format_sig9(c.beta) << ','
        << detail::format_sig9(c.freq_sync_fraction()) << ','
        << detail::format_sig9(c.phase_sync_fraction()) << ',' << c.trials << '\n';
  }
}

void emit_csv(std::vector<CellSummary> cells, const std::string& path) {
  auto out = open_out(path);
  emit_csv(std::move(cells), out);
  finish_out(out, path);
}

void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << kConvergenceCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.sds_errors.size() << ',' << detail::format_sig9(r.ads_error) << ','
        << detail::format_sig9(r.sds_min) << ',' << detail::format_sig9(r.sds_median) << ','
        << detail::format_sig9(r.sds_max) << '\n';
  }
}

void emit_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto out = open_out(path);
  emit_csv(rows, out);
  finish_out(out, path);
}

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
      throw ConfigError(std::string("unknown key '") + k + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void read_eta(const json& j, InitialCondition& eta) {
  if (!j.contains("eta")) return;
  const json& e = j.at("eta");
  if (e.is_string()) {
    eta.preset = e.get<std::string>();
    return;
  }
  reject_unknown(e, {"preset", "amplitude", "modes", "seed"}, "eta");
  read(e, "preset", eta.preset);
  read(e, "amplitude", eta.amplitude);
  read(e, "modes", eta.modes);
  read(e, "seed", eta.seed);
}

void read_integrator(const json& j, IntegratorConfig& cfg) {
  if (!j.contains("integrator")) return;
  const json& i = j.at("integrator");
  reject_unknown(i, {"step", "horizon", "store_stride"}, "integrator");
  read(i, "step", cfg.step);
  read(i, "horizon", cfg.horizon);
  read(i, "store_stride", cfg.store_stride);
}

json parse_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_object(json_text);
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"n_grid", "p_grid", "beta_grid", "trials", "master_seed", "eta",
                    "integrator", "detector", "threads"},
                   "experiment config");
    read(j, "n_grid", cfg.n_grid);
    read(j, "p_grid", cfg.p_grid);
    read(j, "beta_grid", cfg.beta_grid);
    read(j, "trials", cfg.trials);
    read(j, "master_seed", cfg.master_seed);
    read(j, "threads", cfg.threads);
    read_eta(j, cfg.eta);
    read_integrator(j, cfg.integrator);
    if (j.contains("detector")) {
      const json& d = j.at("detector");
      reject_unknown(d, {"phase_tol", "freq_tol"}, "detector");
      read(d, "phase_tol", cfg.phase_tol);
      read(d, "freq_tol", cfg.freq_tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value in experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(slurp(path));
}

ConvergenceConfig parse_convergence_config(const std::string& json_text) {
  const json j = parse_object(json_text);
  ConvergenceConfig cfg;
  try {
    reject_unknown(j,
                   {"graphon", "n_list", "alpha", "beta", "trials", "m_ref", "eta", "integrator",
                    "master_seed", "threads"},
                   "convergence config");
    read(j, "graphon", cfg.graphon);
    read(j, "n_list", cfg.n_list);
    read(j, "alpha", cfg.alpha);
    read(j, "beta", cfg.beta);
    read(j, "trials", cfg.trials);
    read(j, "m_ref", cfg.m_ref);
    read(j, "master_seed", cfg.master_seed);
    read(j, "threads", cfg.threads);
    read_eta(j, cfg.eta);
    read_integrator(j, cfg.integrator);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value in convergence config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ConvergenceConfig load_convergence_config(const std::string& path) {
  return parse_convergence_config(slurp(path));
}

}  // namespace gsync
