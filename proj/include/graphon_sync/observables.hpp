#pragma once

#include <optional>
#include <span>

#include "graphon_sync/dynamics.hpp"
#include "graphon_sync/integrator.hpp"

namespace gsync {

/// Below this magnitude the average phase is reported as undefined.
inline constexpr double kOrderParameterFloor = 1e-12;

struct OrderParameter {
  double r = 0.0;
  std::optional<double> psi;  // in (-pi, pi]; empty when r <= kOrderParameterFloor
};

struct SyncVerdict {
  bool phase_sync = false;
  bool freq_sync = false;
  double final_r = 0.0;
  double final_diameter = 0.0;
  double final_freq_spread = 0.0;
};

/// r e^{i psi} = m^-1 sum_j e^{i theta_j}.
OrderParameter order_parameter(std::span<const double> phases);
inline OrderParameter order_parameter(const PhaseField& f) { return order_parameter(f.values()); }

/// r * mean_j sin^2(psi - theta_j); the growth rate of r for the all-to-all
/// Kuramoto flow. Zero when psi is undefined.
double order_parameter_growth(std::span<const double> phases);

/// mean_j cos(psi - theta_j), which equals r whenever psi is defined.
double mean_alignment(std::span<const double> phases);

/// Sup-norm distance of the two piecewise-constant interpolants, evaluated on
/// the common refinement of both meshes. Throws MeshError when lcm(ma, mb) > 2^24.
double linf_distance(const PhaseField& a, const PhaseField& b);

/// max - min over lifted phases (no wrapping).
double phase_diameter(std::span<const double> phases);
inline double phase_diameter(const PhaseField& f) { return phase_diameter(f.values()); }

/// Shifts every phase by a multiple of 2pi to the lift closest to the first one.
std::vector<double> wrap_to_common_lift(std::span<const double> phases);

/// freq_sync: spread of the final right-hand side below freq_tol.
/// phase_sync: diameter of the final state, wrapped to a common lift, below phase_tol.
SyncVerdict sync_verdict(const Trajectory& traj, double phase_tol = 1e-2, double freq_tol = 1e-3);

}  // namespace gsync
