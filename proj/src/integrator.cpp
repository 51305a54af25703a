#include "graphon_sync/integrator.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "graphon_sync/errors.hpp"

namespace gsync {

namespace {

constexpr double kDivergenceBound = 1e9;

// Returns the index of the first bad component, or size() if all are fine.
std::size_t first_divergent(std::span<const double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || std::abs(y[i]) > kDivergenceBound) return i;
  }
  return y.size();
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !(horizon > 0.0) || step > horizon) {
    throw ParameterError("integrator needs 0 < step <= horizon");
  }
  const double ratio = horizon / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ParameterError("horizon/step must be an integer step count");
  }
  if (store_stride == 0) throw ParameterError("store_stride must be >= 1");
}

std::size_t IntegratorConfig::steps() const {
  validate();
  return static_cast<std::size_t>(std::llround(horizon / step));
}

Rk4Stepper::Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void Rk4Stepper::step(const Rhs& rhs, double t, double h, std::span<double> y) {
  const std::size_t n = y.size();
  rhs(y, t, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
  rhs(tmp_, t + 0.5 * h, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
  rhs(tmp_, t + 0.5 * h, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
  rhs(tmp_, t + h, k4_);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

Trajectory integrate(const Rhs& rhs, const PhaseField& initial, const IntegratorConfig& cfg,
                     const Observer& observer) {
  const std::size_t steps = cfg.steps();
  const double h = cfg.horizon / static_cast<double>(steps);
  std::vector<double> y = initial.vector();
  Rk4Stepper stepper(y.size());

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  if (observer) observer(0, 0.0, y);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    stepper.step(rhs, t, h, y);
    if (auto bad = first_divergent(y); bad != y.size()) {
      throw DivergenceError(k + 1, "integration diverged at step " + std::to_string(k + 1) +
                                       " (component " + std::to_string(bad) + ")");
    }
    const std::size_t done = k + 1;
    const double t_next = done == steps ? cfg.horizon : static_cast<double>(done) * h;
    if (observer) observer(done, t_next, y);
    if (done % cfg.store_stride == 0 || done == steps) {
      traj.times.push_back(t_next);
      traj.states.emplace_back(y);
    }
  }

  std::vector<double> f(y.size());
  rhs(y, cfg.horizon, f);
  traj.final_rhs = PhaseField(std::move(f));
  return traj;
}

Rhs make_sds_rhs(const SampledNetwork& net, const CouplingSpec& c) {
  return [net, c](std::span<const double> y, double t, std::span<double> out) {
    sds_rhs_into(y, net, c, t, out);
  };
}

Rhs make_ads_rhs(const DiscretizedGraphon& d, const CouplingSpec& c) {
  return [d, c](std::span<const double> y, double t, std::span<double> out) {
    ads_rhs_into(y, d, c, t, out);
  };
}

Rhs make_cds_rhs(const Graphon& g, const CouplingSpec& c) {
  if (c.sinusoidal() && g.rank_one_factor()) {
    return [g, c](std::span<const double> y, double t, std::span<double> out) {
      cds_rhs_into(y, g, c, t, out);
    };
  }
  // General kernels: tabulate W on the mesh the first time the mesh is seen and
  // reuse it as an averaged-system operator with cells W(x_i, x_j).
  auto cache = std::make_shared<std::unique_ptr<DiscretizedGraphon>>();
  return [g, c, cache](std::span<const double> y, double t, std::span<double> out) {
    const std::size_t m = y.size();
    if (!*cache || (*cache)->n() != m) {
      std::vector<double> cells(m * m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          cells[i * m + j] = g(static_cast<double>(i) / m, static_cast<double>(j) / m);
        }
      }
      *cache = std::make_unique<DiscretizedGraphon>(m, std::move(cells));
    }
    ads_rhs_into(y, **cache, c, t, out);
  };
}

}  // namespace gsync
