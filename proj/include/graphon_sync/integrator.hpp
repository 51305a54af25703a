#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "graphon_sync/dynamics.hpp"

namespace gsync {

/// Fixed-step classical RK4 settings. The effective step is horizon/steps(),
/// which equals `step` up to the 1e-9 rounding tolerance checked by validate().
struct IntegratorConfig {
  double step = 1e-2;
  double horizon = 1.0;
  std::size_t store_stride = 1;

  void validate() const;
  std::size_t steps() const;
};

using Rhs = std::function<void(std::span<const double> state, double t, std::span<double> out)>;
using Observer = std::function<void(std::size_t step, double t, std::span<const double> state)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseField> states;
  PhaseField final_rhs;

  const PhaseField& final_state() const { return states.back(); }
};

/// Reusable RK4 workspace for a fixed dimension.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim);

  /// Advances y in place from t to t+h.
  void step(const Rhs& rhs, double t, double h, std::span<double> y);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// Integrates from t=0 to cfg.horizon. Stores t=0, every store_stride-th step
/// and always the final step. The observer, if set, sees every step (including
/// step 0). Throws DivergenceError if a component becomes non-finite or exceeds
/// 1e9 in magnitude.
Trajectory integrate(const Rhs& rhs, const PhaseField& initial, const IntegratorConfig& cfg,
                     const Observer& observer = {});

Rhs make_sds_rhs(const SampledNetwork& net, const CouplingSpec& c);
Rhs make_ads_rhs(const DiscretizedGraphon& d, const CouplingSpec& c);
Rhs make_cds_rhs(const Graphon& g, const CouplingSpec& c);

}  // namespace gsync
