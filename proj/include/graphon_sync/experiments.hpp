#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphon_sync/integrator.hpp"

namespace gsync {

/// Initial-condition presets.
///   "linear":  eta(x) = amplitude * x
///   "cosine":  eta(x) = amplitude * cos(2 pi x); amplitudes at a zero of J0
///              (where r(0) = 0) are rejected
///   "uniform-random-smooth": eta(x) = sum_{k=1..modes} a_k cos(2 pi k x) + b_k sin(2 pi k x),
///              a_k, b_k uniform in [-amplitude/k, amplitude/k] drawn from `seed`
///   "constant": eta(x) = amplitude
struct InitialCondition {
  std::string preset = "linear";
  double amplitude = 1.0;
  std::size_t modes = 3;
  std::uint64_t seed = 0;

  void validate() const;
  std::function<double(double)> function() const;
};

struct ExperimentConfig {
  std::vector<std::size_t> n_grid{100};
  std::vector<double> p_grid{0.5};
  std::vector<double> beta_grid{0.0};
  std::size_t trials = 50;
  std::uint64_t master_seed = 1;
  InitialCondition eta;
  IntegratorConfig integrator{0.01, 200.0, 1};
  double phase_tol = 1e-2;
  double freq_tol = 1e-3;
  std::size_t threads = 1;

  void validate() const;
};

struct TrialRecord {
  std::size_t n = 0;
  double p = 0.0;
  double beta = 0.0;
  std::size_t trial_index = 0;
  std::uint64_t derived_seed = 0;
  bool connected = false;
  bool phase_sync = false;
  bool freq_sync = false;
  double final_r = 0.0;
  double final_diameter = 0.0;
  double final_freq_spread = 0.0;
  double wall_time = 0.0;  // seconds; not part of the CSV
  bool diverged = false;

  friend bool operator==(const TrialRecord& a, const TrialRecord& b);
};

struct CellSummary {
  std::size_t n = 0;
  double p = 0.0;
  double beta = 0.0;
  std::size_t trials = 0;
  std::size_t freq_sync = 0;
  std::size_t phase_sync = 0;
  std::size_t connected = 0;
  std::size_t freq_sync_connected = 0;

  double freq_sync_fraction() const { return ratio(freq_sync); }
  double phase_sync_fraction() const { return ratio(phase_sync); }
  double connected_fraction() const { return ratio(connected); }
  double freq_sync_connected_fraction() const { return ratio(freq_sync_connected); }

 private:
  double ratio(std::size_t k) const { return trials ? static_cast<double>(k) / trials : 0.0; }
};

struct PhaseDiagram {
  std::vector<CellSummary> cells;   // ordered by (n, p, beta) grid index
  std::vector<TrialRecord> records; // ordered by (n, p, beta, trial)
};

/// Seed of one trial: splitmix64 chained over master_seed and the tagged grid
/// indices, so every cell/trial is an independent stream.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t n_index, std::size_t p_index,
                          std::size_t beta_index, std::size_t trial_index);

/// Samples G(n,p), integrates the sampled system from the discretised
/// initial condition and applies the sync detector. Integrator divergence is
/// recorded in the result, not thrown.
TrialRecord run_trial(std::size_t n, double p, double beta, std::uint64_t seed,
                      const ExperimentConfig& cfg, std::size_t trial_index = 0);

/// Every (n, p, beta, trial) of the grid, statically partitioned over
/// cfg.threads workers and merged by index; output is independent of the
/// worker count.
PhaseDiagram run_phase_diagram(const ExperimentConfig& cfg);

struct ConvergenceConfig {
  std::string graphon = "constant-1";
  std::vector<std::size_t> n_list{64, 128, 256, 512};
  double alpha = 1.0;
  double beta = 0.0;
  std::size_t trials = 20;
  std::size_t m_ref = 4096;
  InitialCondition eta;
  IntegratorConfig integrator{1e-3, 1.0, 1000000};
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

struct ConvergenceRow {
  std::size_t n = 0;
  double ads_error = 0.0;          // deterministic averaged system vs reference
  std::vector<double> sds_errors;  // one per trial, in trial order
  double sds_min = 0.0;
  double sds_median = 0.0;
  double sds_max = 0.0;
};

/// Integrates the continuum system once at m_ref as the reference, then for
/// each n the averaged system and `trials` sampled systems, reporting sup-norm
/// errors of the interpolants at the horizon.
std::vector<ConvergenceRow> run_convergence_study(const ConvergenceConfig& cfg);

double median(std::vector<double> values);

inline constexpr const char* kTrialCsvHeader =
    "n,p,beta,trial,seed,connected,phase_sync,freq_sync,final_r,final_diameter,final_freq_spread";
inline constexpr const char* kGridCsvHeader =
    "n,p,beta,freq_sync_fraction,phase_sync_fraction,trials";
inline constexpr const char* kConvergenceCsvHeader = "n,trials,ads_error,sds_min,sds_median,sds_max";

// Rows are sorted by (n, p, beta, trial_index) before writing.
void emit_csv(std::vector<TrialRecord> records, std::ostream& out);
void emit_csv(std::vector<TrialRecord> records, const std::string& path);
void emit_csv(std::vector<CellSummary> cells, std::ostream& out);
void emit_csv(std::vector<CellSummary> cells, const std::string& path);
void emit_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

/// JSON configuration. Keys mirror the struct field names; nested objects
/// "eta" {preset, amplitude, modes, seed}, "integrator" {step, horizon,
/// store_stride} and "detector" {phase_tol, freq_tol}. Missing keys keep defaults.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);
ConvergenceConfig load_convergence_config(const std::string& path);
ConvergenceConfig parse_convergence_config(const std::string& json_text);

}  // namespace gsync
