#include "graphon_sync/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "graphon_sync/errors.hpp"

namespace gsync {

namespace {

using std::numbers::pi;

void check_sizes(std::size_t state, std::size_t expected, std::size_t out, const char* what) {
  if (state != expected) {
    throw DimensionError(std::string(what) + ": state mesh " + std::to_string(state) +
                         " does not match " + std::to_string(expected));
  }
  if (out != state) throw DimensionError(std::string(what) + ": output span has wrong size");
}

// Per-node sin/cos of the current phases.
struct Phasors {
  std::vector<double> s, c;

  explicit Phasors(std::span<const double> theta) : s(theta.size()), c(theta.size()) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      s[i] = std::sin(theta[i]);
      c[i] = std::cos(theta[i]);
    }
  }
};

// sum_j w_j sin(theta_j - theta_i + beta) given S = sum_j w_j s_j, C = sum_j w_j c_j.
inline double sinusoidal_sum(double cb, double sb, double si, double ci, double S, double C) {
  return cb * (ci * S - si * C) + sb * (ci * C + si * S);
}

}  // namespace

CouplingSpec CouplingSpec::kuramoto() { return CouplingSpec{}; }

CouplingSpec CouplingSpec::sakaguchi(double beta) {
  if (!(std::abs(beta) < pi / 2)) {
    throw ParameterError("phase shift must lie in (-pi/2, pi/2)");
  }
  CouplingSpec c;
  c.kind = CouplingKind::Sakaguchi;
  c.beta = beta;
  return c;
}

CouplingSpec CouplingSpec::custom_kernel(std::function<double(double)> d, double lipschitz) {
  CouplingSpec c;
  c.kind = CouplingKind::Custom;
  c.custom = std::move(d);
  c.lipschitz_D = lipschitz;
  c.validate();
  return c;
}

double CouplingSpec::kernel(double u) const {
  switch (kind) {
    case CouplingKind::Kuramoto:
      return std::sin(u);
    case CouplingKind::Sakaguchi:
      return std::sin(u + beta);
    case CouplingKind::Custom:
      return custom(u);
  }
  return 0.0;
}

void CouplingSpec::validate() const {
  if (kind == CouplingKind::Custom && !custom) {
    throw ParameterError("custom coupling needs a kernel function");
  }
  if (kind == CouplingKind::Kuramoto && beta != 0.0) {
    throw ParameterError("Kuramoto coupling has no phase shift");
  }
  if (!(std::abs(beta) < pi / 2)) throw ParameterError("phase shift must lie in (-pi/2, pi/2)");
  if (!(lipschitz_D >= 0.0) || !(lipschitz_f >= 0.0)) {
    throw ParameterError("Lipschitz bounds must be non-negative");
  }
  constexpr int kGrid = 1024;
  for (int k = 0; k <= kGrid; ++k) {
    const double u = 2 * pi * k / kGrid;
    const double d = kernel(u);
    if (!std::isfinite(d) || std::abs(d) > 1.0 + 1e-12) {
      throw ParameterError("coupling kernel must satisfy |D(u)| <= 1");
    }
    if (std::abs(d - kernel(u + 2 * pi)) > 1e-12) {
      throw ParameterError("coupling kernel must be 2pi-periodic");
    }
  }
}

PhaseField::PhaseField(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("phase field needs mesh >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw EvaluationError("phase field entry " + std::to_string(i) + " is not finite");
    }
  }
}

PhaseField discretize_initial(const std::function<double(double)>& eta, std::size_t n) {
  if (n == 0) throw ParameterError("discretize_initial needs n >= 1");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    v[i] = eta(x);
    if (!std::isfinite(v[i])) {
      throw EvaluationError("initial condition is not finite at x=" + std::to_string(x));
    }
  }
  return PhaseField(std::move(v));
}

double interpolate(const PhaseField& field, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("interpolate: x must lie in [0,1]");
  const std::size_t m = field.mesh();
  const auto cell = static_cast<std::size_t>(x * static_cast<double>(m));
  return field[std::min(cell, m - 1)];
}

void sds_rhs_into(std::span<const double> state, const SampledNetwork& net, const CouplingSpec& c,
                  double t, std::span<double> out) {
  const std::size_t n = net.n();
  check_sizes(state.size(), n, out.size(), "sds_rhs");
  const double scale = 1.0 / (static_cast<double>(n) * net.alpha());
  if (c.sinusoidal()) {
    const Phasors ph(state);
    const double cb = std::cos(c.beta), sb = std::sin(c.beta);
    for (std::size_t i = 0; i < n; ++i) {
      double S = 0.0, C = 0.0;
      for (auto j : net.neighbors(i)) {
        S += ph.s[j];
        C += ph.c[j];
      }
      out[i] = c.drift(state[i], t) + scale * sinusoidal_sum(cb, sb, ph.s[i], ph.c[i], S, C);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (auto j : net.neighbors(i)) acc += c.kernel(state[j] - state[i]);
    out[i] = c.drift(state[i], t) + scale * acc;
  }
}

void ads_rhs_into(std::span<const double> state, const DiscretizedGraphon& d, const CouplingSpec& c,
                  double t, std::span<double> out) {
  const std::size_t n = d.n();
  check_sizes(state.size(), n, out.size(), "ads_rhs");
  const double scale = 1.0 / static_cast<double>(n);
  if (c.sinusoidal()) {
    const Phasors ph(state);
    const double cb = std::cos(c.beta), sb = std::sin(c.beta);
    for (std::size_t i = 0; i < n; ++i) {
      const auto w = d.row(i);
      double S = 0.0, C = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        S += w[j] * ph.s[j];
        C += w[j] * ph.c[j];
      }
      out[i] = c.drift(state[i], t) + scale * sinusoidal_sum(cb, sb, ph.s[i], ph.c[i], S, C);
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = d.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * c.kernel(state[j] - state[i]);
    out[i] = c.drift(state[i], t) + scale * acc;
  }
}

void cds_rhs_into(std::span<const double> state, const Graphon& g, const CouplingSpec& c, double t,
                  std::span<double> out) {
  const std::size_t m = state.size();
  check_sizes(m, m, out.size(), "cds_rhs");
  if (m == 0) throw ParameterError("cds_rhs needs mesh >= 1");
  const double scale = 1.0 / static_cast<double>(m);
  auto node = [m](std::size_t i) { return static_cast<double>(i) / static_cast<double>(m); };

  if (c.sinusoidal() && g.rank_one_factor()) {
    // W(x,y) = u(x)u(y): the coupling sum collapses to two global sums.
    const auto& factor = *g.rank_one_factor();
    const Phasors ph(state);
    const double cb = std::cos(c.beta), sb = std::sin(c.beta);
    std::vector<double> u(m);
    double S = 0.0, C = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      u[j] = factor(node(j));
      S += u[j] * ph.s[j];
      C += u[j] * ph.c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = c.drift(state[i], t) +
               scale * u[i] * sinusoidal_sum(cb, sb, ph.s[i], ph.c[i], S, C);
    }
    return;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = node(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += g(xi, node(j)) * c.kernel(state[j] - state[i]);
    out[i] = c.drift(state[i], t) + scale * acc;
  }
}

PhaseField sds_rhs(const PhaseField& state, const SampledNetwork& net, const CouplingSpec& c,
                   double t) {
  std::vector<double> out(state.mesh());
  sds_rhs_into(state.values(), net, c, t, out);
  return PhaseField(std::move(out));
}

PhaseField ads_rhs(const PhaseField& state, const DiscretizedGraphon& d, const CouplingSpec& c,
                   double t) {
  std::vector<double> out(state.mesh());
  ads_rhs_into(state.values(), d, c, t, out);
  return PhaseField(std::move(out));
}

PhaseField cds_rhs(const PhaseField& state, const Graphon& g, const CouplingSpec& c, double t) {
  std::vector<double> out(state.mesh());
  cds_rhs_into(state.values(), g, c, t, out);
  return PhaseField(std::move(out));
}

}  // namespace gsync
