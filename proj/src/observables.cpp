#include "graphon_sync/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "graphon_sync/errors.hpp"

namespace gsync {

namespace {

struct MeanPhasor {
  double re = 0.0, im = 0.0;
};

MeanPhasor mean_phasor(std::span<const double> phases) {
  MeanPhasor z;
  for (double th : phases) {
    z.re += std::cos(th);
    z.im += std::sin(th);
  }
  const double m = static_cast<double>(phases.size());
  z.re /= m;
  z.im /= m;
  return z;
}

}  // namespace

OrderParameter order_parameter(std::span<const double> phases) {
  if (phases.empty()) throw ParameterError("order_parameter needs mesh >= 1");
  const auto z = mean_phasor(phases);
  OrderParameter op;
  op.r = std::hypot(z.re, z.im);
  if (op.r > kOrderParameterFloor) {
    double psi = std::atan2(z.im, z.re);
    if (psi == -std::numbers::pi) psi = std::numbers::pi;
    op.psi = psi;
  }
  return op;
}

double order_parameter_growth(std::span<const double> phases) {
  const auto op = order_parameter(phases);
  if (!op.psi) return 0.0;
  double acc = 0.0;
  for (double th : phases) {
    const double s = std::sin(*op.psi - th);
    acc += s * s;
  }
  return op.r * acc / static_cast<double>(phases.size());
}

double mean_alignment(std::span<const double> phases) {
  const auto op = order_parameter(phases);
  if (!op.psi) return 0.0;
  double acc = 0.0;
  for (double th : phases) acc += std::cos(*op.psi - th);
  return acc / static_cast<double>(phases.size());
}

double linf_distance(const PhaseField& a, const PhaseField& b) {
  constexpr std::size_t kMaxRefinement = std::size_t{1} << 24;
  const std::size_t ma = a.mesh(), mb = b.mesh();
  const std::size_t g = std::gcd(ma, mb);
  if (ma / g > kMaxRefinement / mb) {
    throw MeshError("common refinement of meshes " + std::to_string(ma) + " and " +
                    std::to_string(mb) + " exceeds 2^24 cells");
  }
  const std::size_t cells = ma / g * mb;
  const std::size_t per_a = cells / ma, per_b = cells / mb;
  double worst = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    worst = std::max(worst, std::abs(a[k / per_a] - b[k / per_b]));
  }
  return worst;
}

double phase_diameter(std::span<const double> phases) {
  if (phases.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(phases.begin(), phases.end());
  return *hi - *lo;
}

std::vector<double> wrap_to_common_lift(std::span<const double> phases) {
  constexpr double two_pi = 2 * std::numbers::pi;
  std::vector<double> out(phases.begin(), phases.end());
  if (out.empty()) return out;
  const double ref = out.front();
  for (double& th : out) th -= two_pi * std::round((th - ref) / two_pi);
  return out;
}

SyncVerdict sync_verdict(const Trajectory& traj, double phase_tol, double freq_tol) {
  if (traj.states.empty() || traj.final_rhs.mesh() == 0) {
    throw ParameterError("sync_verdict needs a trajectory with a final right-hand side");
  }
  const auto& last = traj.final_state();
  SyncVerdict v;
  v.final_r = order_parameter(last).r;
  v.final_diameter = phase_diameter(wrap_to_common_lift(last.values()));
  v.final_freq_spread = phase_diameter(traj.final_rhs.values());
  v.freq_sync = v.final_freq_spread < freq_tol;
  v.phase_sync = v.final_diameter < phase_tol;
  return v;
}

}  // namespace gsync
