#include "graphon_sync/ws_reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "graphon_sync/errors.hpp"
#include "graphon_sync/observables.hpp"

namespace gsync {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2 * pi;

constexpr double kRootTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kRoundTripTol = 1e-7;
constexpr double kJacobianStep = 1e-7;
constexpr int kMaxNewtonIterations = 100;

// Lifted map u -> 2pi k + 2 atan(scale tan(w/2)), u = w + 2pi k, w in [-pi, pi].
double lifted_tangent_map(double scale, double u) {
  const double k = std::round(u / kTwoPi);
  const double w = u - kTwoPi * k;
  return kTwoPi * k + 2.0 * std::atan(scale * std::tan(0.5 * w));
}

void check_gamma(double gamma, const char* what) {
  if (!(std::abs(gamma) < 1.0)) {
    throw DomainError(std::string(what) + ": gamma must satisfy |gamma| < 1");
  }
}

double max_abs(const FrameVector& v) { return std::max(std::abs(v.v_theta), std::abs(v.v_gamma)); }
double norm2(const FrameVector& v) { return std::hypot(v.v_theta, v.v_gamma); }

// (-gamma, Theta + pi) is a root whenever (gamma, Theta) is; keep gamma >= 0.
void normalize(double& gamma, double& Theta) {
  if (gamma < 0.0) {
    gamma = -gamma;
    Theta += pi;
  }
}

double wrap_angle(double a) { return a - kTwoPi * std::floor(a / kTwoPi); }

WSFrame build_frame(const PhaseField& theta0, double gamma, double Theta, double& Psi) {
  const std::size_t m = theta0.mesh();
  std::vector<double> shifted(m);
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    shifted[i] = phase_to_frame(gamma, theta0[i] - Theta);
    mean += shifted[i];
  }
  Psi = -mean / static_cast<double>(m);
  for (double& v : shifted) v += Psi;
  return WSFrame::from_psi(PhaseField(std::move(shifted)));
}

std::optional<ReducedState> newton_from(const PhaseField& theta0, double gamma, double Theta) {
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const FrameVector v = frame_vector_field(gamma, Theta, theta0);
    if (max_abs(v) <= kRootTol) return ReducedState{gamma, 0.0, Theta};

    // Centered-difference Jacobian, columns (d/dTheta, d/dgamma).
    const double hg = std::min(kJacobianStep, 0.5 * (1.0 - gamma));
    const FrameVector tp = frame_vector_field(gamma, Theta + kJacobianStep, theta0);
    const FrameVector tm = frame_vector_field(gamma, Theta - kJacobianStep, theta0);
    const FrameVector gp = frame_vector_field(gamma + hg, Theta, theta0);
    const FrameVector gm = frame_vector_field(gamma - hg, Theta, theta0);
    const double a = (tp.v_theta - tm.v_theta) / (2 * kJacobianStep);
    const double b = (gp.v_theta - gm.v_theta) / (2 * hg);
    const double c = (tp.v_gamma - tm.v_gamma) / (2 * kJacobianStep);
    const double d = (gp.v_gamma - gm.v_gamma) / (2 * hg);
    const double det = a * d - b * c;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
    const double dTheta = -(d * v.v_theta - b * v.v_gamma) / det;
    const double dGamma = -(-c * v.v_theta + a * v.v_gamma) / det;

    const double current = norm2(v);
    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-10) {
      double g_new = gamma + lambda * dGamma;
      double t_new = Theta + lambda * dTheta;
      normalize(g_new, t_new);
      if (g_new < 1.0 - 1e-12) {
        const FrameVector vn = frame_vector_field(g_new, t_new, theta0);
        if (norm2(vn) < current) {
          gamma = g_new;
          Theta = t_new;
          moved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) return std::nullopt;
  }
  return std::nullopt;
}

bool same_root(const ReducedState& a, const ReducedState& b) {
  if (std::abs(a.gamma - b.gamma) > 1e-6) return false;
  const double d = std::abs(wrap_angle(a.Theta) - wrap_angle(b.Theta));
  return std::min(d, kTwoPi - d) < 1e-6;
}

}  // namespace

WSFrame WSFrame::from_psi(PhaseField psi) {
  WSFrame f;
  double mean = 0.0, cs = 0.0, sn = 0.0;
  for (double v : psi.values()) {
    mean += v;
    cs += std::cos(v);
    sn += std::sin(v);
  }
  const double m = static_cast<double>(psi.mesh());
  f.residual_mean = std::abs(mean / m);
  f.residual_cos = std::abs(cs / m);
  f.residual_sin = std::abs(sn / m);
  f.psi = std::move(psi);
  return f;
}

double frame_to_phase(double gamma, double u) {
  check_gamma(gamma, "frame_to_phase");
  if (gamma == 0.0) return u;
  return lifted_tangent_map(std::sqrt((1.0 + gamma) / (1.0 - gamma)), u);
}

double phase_to_frame(double gamma, double u) {
  check_gamma(gamma, "phase_to_frame");
  if (gamma == 0.0) return u;
  return lifted_tangent_map(std::sqrt((1.0 - gamma) / (1.0 + gamma)), u);
}

FrameVector frame_vector_field(double gamma, double Theta, const PhaseField& theta0) {
  check_gamma(gamma, "frame_vector_field");
  double vt = 0.0, vg = 0.0;
  for (double th : theta0.values()) {
    const double a = th - Theta;
    const double ca = std::cos(a);
    const double den = 1.0 + gamma * ca;
    vt += std::sin(a) / den;
    vg += (gamma + ca) / den;
  }
  const double m = static_cast<double>(theta0.mesh());
  return {vt / m, vg / m};
}

bool more_than_half_distinct(const PhaseField& theta0) {
  constexpr double kBin = 1e-9;
  const std::size_t m = theta0.mesh();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = wrap_angle(theta0[i]);
  std::sort(w.begin(), w.end());
  // Unroll once around the circle so clusters straddling 0 are counted together.
  std::vector<double> ring(w);
  for (double v : w) ring.push_back(v + kTwoPi);
  std::size_t best = 0;
  for (std::size_t lo = 0, hi = 0; lo < m; ++lo) {
    hi = std::max(hi, lo);
    while (hi + 1 < ring.size() && ring[hi + 1] - ring[lo] <= kBin && hi + 1 < lo + m) ++hi;
    best = std::max(best, hi - lo + 1);
  }
  return 2 * best < m;
}

FrameSolution solve_initial_frame(const PhaseField& theta0) {
  if (!more_than_half_distinct(theta0)) {
    throw InputError("initial field has a phase value shared by at least half the mesh");
  }
  FrameSolution sol;

  auto accept = [&](const ReducedState& root) -> bool {
    double Psi = 0.0;
    WSFrame frame = build_frame(theta0, root.gamma, root.Theta, Psi);
    if (std::max({frame.residual_mean, frame.residual_cos, frame.residual_sin}) > kResidualTol) {
      return false;
    }
    const ReducedState state{root.gamma, Psi, root.Theta};
    for (std::size_t i = 0; i < theta0.mesh(); ++i) {
      const double back = state.Theta + frame_to_phase(state.gamma, frame.psi[i] - state.Psi);
      if (std::abs(back - theta0[i]) > kRoundTripTol) return false;
    }
    sol.state = state;
    sol.frame = std::move(frame);
    return true;
  };

  // Incoherent field: gamma = 0 solves the frame equations for every Theta.
  if (order_parameter(theta0).r <= kRootTol) {
    const ReducedState root{0.0, 0.0, 0.0};
    sol.roots.push_back(root);
    if (accept(root)) return sol;
    throw FrameError("incoherent initial field failed the frame postconditions");
  }

  bool found = false;
  for (double g0 : {0.1, 0.5, 0.9}) {
    for (int k = 0; k < 8; ++k) {
      auto root = newton_from(theta0, g0, kTwoPi * k / 8.0);
      if (!root || root->gamma >= kGammaCeiling) continue;
      const bool seen = std::any_of(sol.roots.begin(), sol.roots.end(),
                                    [&](const ReducedState& r) { return same_root(r, *root); });
      if (seen) continue;
      sol.roots.push_back(*root);
      if (!found) found = accept(*root);
    }
  }
  if (!found) {
    throw FrameError("frame solve did not converge from any of the 24 starting points");
  }
  return sol;
}

ReducedRates reduced_rhs(const ReducedState& s, const WSFrame& frame, double beta) {
  const double g = s.gamma;
  check_gamma(g, "reduced_rhs");
  double i_cos = 0.0, i_sin = 0.0;  // mean (g - cos)/den, mean sin/den
  for (double psi : frame.psi.values()) {
    const double phi = psi - s.Psi;
    const double cp = std::cos(phi);
    const double den = 1.0 - g * cp;
    i_cos += (g - cp) / den;
    i_sin += std::sin(phi) / den;
  }
  const double m = static_cast<double>(frame.psi.mesh());
  i_cos /= m;
  i_sin /= m;

  const double cb = std::cos(beta), sb = std::sin(beta);
  const double q = 1.0 - g * g;
  const double sq = std::sqrt(q);

  ReducedRates out;
  out.dgamma = cb * q * i_cos + sb * q * sq * i_sin;
  const double num_psi = -cb * q * i_sin + sb * sq * i_cos;
  const double num_theta = -cb * sq * i_sin + sb * i_cos;
  if (g < kGammaFreeze) {
    if (std::abs(g) < 1e-9 && std::max(std::abs(num_psi), std::abs(num_theta)) > kResidualTol) {
      throw SingularStateError("reduced flow is singular: gamma ~ 0 with non-vanishing numerators");
    }
    return out;
  }
  out.dPsi = num_psi / g;
  out.dTheta = num_theta / g;
  return out;
}

double reconstruct(const ReducedState& s, const WSFrame& frame, double x) {
  return s.Theta + frame_to_phase(s.gamma, interpolate(frame.psi, x) - s.Psi);
}

PhaseField reconstruct_field(const ReducedState& s, const WSFrame& frame) {
  std::vector<double> out(frame.psi.mesh());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = s.Theta + frame_to_phase(s.gamma, frame.psi[i] - s.Psi);
  }
  return PhaseField(std::move(out));
}

double lyapunov_H(const ReducedState& s, const WSFrame& frame) {
  check_gamma(s.gamma, "lyapunov_H");
  const double log_norm = 0.5 * std::log1p(-s.gamma * s.gamma);
  double acc = 0.0;
  for (double psi : frame.psi.values()) acc += std::log1p(-s.gamma * std::cos(psi - s.Psi));
  return acc / static_cast<double>(frame.psi.mesh()) - log_norm;
}

ReducedTrajectory integrate_reduced(const ReducedState& initial, const WSFrame& frame, double beta,
                                    const IntegratorConfig& cfg) {
  const std::size_t steps = cfg.steps();
  const double h = cfg.horizon / static_cast<double>(steps);
  const Rhs rhs = [&frame, beta](std::span<const double> y, double, std::span<double> out) {
    const auto r = reduced_rhs({y[0], y[1], y[2]}, frame, beta);
    out[0] = r.dgamma;
    out[1] = r.dPsi;
    out[2] = r.dTheta;
  };

  ReducedTrajectory traj;
  auto record = [&](double t, const ReducedState& s) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.order.push_back(order_parameter(reconstruct_field(s, frame)).r);
  };

  std::array<double, 3> y{initial.gamma, initial.Psi, initial.Theta};
  Rk4Stepper stepper(3);
  record(0.0, initial);
  for (std::size_t k = 0; k < steps; ++k) {
    stepper.step(rhs, static_cast<double>(k) * h, h, y);
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
      throw DivergenceError(k + 1, "reduced flow diverged at step " + std::to_string(k + 1));
    }
    const std::size_t done = k + 1;
    const double t = done == steps ? cfg.horizon : static_cast<double>(done) * h;
    if (y[0] >= kGammaCeiling) {
      traj.synchronized = true;
      record(t, {y[0], y[1], y[2]});
      break;
    }
    if (done % cfg.store_stride == 0 || done == steps) record(t, {y[0], y[1], y[2]});
  }
  return traj;
}

double hdot_identity_residual(const ReducedTrajectory& traj, const WSFrame& frame, double beta) {
  const std::size_t n = traj.times.size();
  if (n < 3) throw ParameterError("Hdot check needs at least three stored times");
  for (std::size_t k = 1; k < n; ++k) {
    if (traj.times[k] - traj.times[k - 1] > 1e-2 + 1e-12) {
      throw ParameterError("Hdot check needs stored spacing <= 1e-2");
    }
  }
  std::vector<double> H(n);
  for (std::size_t k = 0; k < n; ++k) H[k] = lyapunov_H(traj.states[k], frame);
  const double cb = std::cos(beta);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double dH = (H[k + 1] - H[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]);
    const double r = traj.order[k];
    worst = std::max(worst, std::abs(dH - r * r * cb));
  }
  return worst;
}

}  // namespace gsync
