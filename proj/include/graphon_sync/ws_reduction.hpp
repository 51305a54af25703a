#pragma once

#include <cstddef>
#include <vector>

#include "graphon_sync/dynamics.hpp"
#include "graphon_sync/integrator.hpp"

// Three-variable reduction of the all-to-all continuum Sakaguchi-Kuramoto
// flow. A static frame psi(x) together with (gamma, Psi, Theta) determines the
// whole phase field through
//
//   tan((theta - Theta)/2) = sqrt((1+gamma)/(1-gamma)) tan((psi - Psi)/2),
//
// and all integrals over x are evaluated as Riemann sums over the frame mesh,
// so the reduced flow is exact for the mesh-discretised continuum system.

namespace gsync {

struct ReducedState {
  double gamma = 0.0;
  double Psi = 0.0;
  double Theta = 0.0;
};

/// Static frame psi(x) with its constraint residuals
/// |mean psi|, |mean cos psi|, |mean sin psi|.
struct WSFrame {
  PhaseField psi;
  double residual_mean = 0.0;
  double residual_cos = 0.0;
  double residual_sin = 0.0;

  /// Builds a frame from arbitrary samples and records the residuals; no
  /// constraint is enforced.
  static WSFrame from_psi(PhaseField psi);
};

struct FrameVector {
  double v_theta = 0.0;
  double v_gamma = 0.0;
};

struct FrameSolution {
  ReducedState state;
  WSFrame frame;
  std::vector<ReducedState> roots;  // every distinct root the multi-start found
};

struct ReducedRates {
  double dgamma = 0.0;
  double dPsi = 0.0;
  double dTheta = 0.0;
};

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<ReducedState> states;
  std::vector<double> order;   // r of the reconstructed field at each stored time
  bool synchronized = false;   // stopped early because gamma reached 1 - 1e-9
};

inline constexpr double kGammaCeiling = 1.0 - 1e-9;
inline constexpr double kGammaFreeze = 1e-6;

/// Lifted circle map u -> 2 atan(k tan(u/2)) with k = sqrt((1+gamma)/(1-gamma)),
/// continued so that it commutes with u -> u + 2pi. Maps psi - Psi to theta - Theta.
double frame_to_phase(double gamma, double u);
/// Inverse of frame_to_phase.
double phase_to_frame(double gamma, double u);

/// (mean sin(a)/(1+gamma cos a), mean (gamma+cos a)/(1+gamma cos a)) with a = theta0 - Theta.
FrameVector frame_vector_field(double gamma, double Theta, const PhaseField& theta0);

/// True unless some value of theta0 mod 2pi (1e-9 clustering) owns at least half the mesh.
bool more_than_half_distinct(const PhaseField& theta0);

/// Finds (gamma0, Theta0) with a vanishing frame vector field by damped Newton
/// from the starts Theta in {2 pi k/8}, gamma in {0.1, 0.5, 0.9}, then builds
/// psi and Psi0. Throws InputError when the distinctness precondition fails
/// and FrameError when no start yields a root meeting the postconditions.
FrameSolution solve_initial_frame(const PhaseField& theta0);

/// Right-hand side of the reduced flow. For gamma < kGammaFreeze only gamma
/// evolves; below 1e-9 a non-vanishing Psi/Theta numerator is reported as a
/// SingularStateError.
ReducedRates reduced_rhs(const ReducedState& s, const WSFrame& frame, double beta);

double reconstruct(const ReducedState& s, const WSFrame& frame, double x);
PhaseField reconstruct_field(const ReducedState& s, const WSFrame& frame);

/// mean log((1 - gamma cos(psi - Psi)) / sqrt(1 - gamma^2)).
double lyapunov_H(const ReducedState& s, const WSFrame& frame);

ReducedTrajectory integrate_reduced(const ReducedState& initial, const WSFrame& frame,
                                    double beta, const IntegratorConfig& cfg);

/// max over interior stored times of |centered dH/dt - r^2 cos(beta)|.
double hdot_identity_residual(const ReducedTrajectory& traj, const WSFrame& frame, double beta);

}  // namespace gsync
