#include "graphon_sync/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "format.hpp"
#include "graphon_sync/errors.hpp"

namespace gsync {

double g_bar(std::size_t n, double delta, double alpha) {
  if (n == 0) throw ParameterError("g_bar needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("g_bar needs 0 < delta < 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("g_bar needs 0 < alpha <= 1");
  const double nd = static_cast<double>(n);
  return 2.0 * std::log(2.0 * nd / delta) / (nd * alpha);
}

void BoundParams::validate() const {
  if (!(c > 0.0) || !(d > 0.0) || !(g >= 0.0) || !(T > 0.0)) {
    throw ParameterError("bound parameters need c > 0, d > 0, g >= 0, T > 0");
  }
}

double positive_system_bound(const BoundParams& p) {
  p.validate();
  const double rate = p.c + p.d;
  return p.g / rate * std::expm1(rate * p.T);
}

Rhs positive_system_rhs(const BoundParams& p, std::function<double(std::size_t, double)> slack) {
  p.validate();
  return [p, slack = std::move(slack)](std::span<const double> u, double t, std::span<double> out) {
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = p.c * u[i] + p.d * mean + p.g - (slack ? slack(i, t) : 0.0);
    }
  };
}

double degree_ratio_factor(double n) {
  if (!(n >= 2.0)) throw ParameterError("degree ratio factor needs n >= 2");
  if (std::isinf(n)) return 1.0;
  const double x = std::cbrt(1.0 / n);
  return (1.0 + x) / (1.0 - x);
}

ProbabilityThreshold beta_threshold_p(double beta, double n) {
  if (!(beta > 0.0 && beta < std::numbers::pi / 2)) {
    throw ParameterError("beta_threshold_p needs 0 < beta < pi/2");
  }
  const double cb = std::cos(beta);
  ProbabilityThreshold out;
  out.p = 2.0 * std::sin(beta) / (cb * cb) * degree_ratio_factor(n);
  out.feasible = out.p <= 1.0;
  return out;
}

double max_beta_for(double p, double n) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("max_beta_for needs 0 < p <= 1");
  const double R = 2.0 / p * degree_ratio_factor(n);
  // (-R + sqrt(R^2+4))/2 rewritten to avoid cancellation for large R.
  const double s = 2.0 / (R + std::sqrt(R * R + 4.0));
  return std::asin(s);
}

double connectivity_threshold(std::size_t n) {
  if (n < 2) throw ParameterError("connectivity_threshold needs n >= 2");
  const double nd = static_cast<double>(n);
  return std::log(nd) / nd;
}

std::vector<double> empirical_g(const SampledNetwork& net, const DiscretizedGraphon& d) {
  const std::size_t n = net.n();
  if (d.n() != n) throw DimensionError("empirical_g: network and graphon sizes differ");
  std::vector<double> g(n, 0.0);
  if (n < 2) return g;
  const double inv_alpha = 1.0 / net.alpha();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += (net.adjacent(i, j) ? inv_alpha : 0.0) - d(i, j);
    }
    const double mean = acc / static_cast<double>(n - 1);
    g[i] = 0.5 * mean * mean;
  }
  return g;
}

double max_degree_overlap_ratio(const SampledNetwork& net) {
  const std::size_t n = net.n();
  const auto adj = net.adjacency();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t common = 0;
      for (std::size_t k = 0; k < n; ++k) common += adj[i * n + k] & adj[j * n + k];
      if (common == 0) return std::numeric_limits<double>::infinity();
      const double ratio = static_cast<double>(net.degree(i) + net.degree(j)) / common;
      worst = std::max(worst, ratio);
    }
  }
  return worst;
}

std::vector<BoundCurvePoint> bound_curve(const std::vector<std::size_t>& n_list,
                                         const std::vector<double>& betas) {
  std::vector<BoundCurvePoint> out;
  for (double beta : betas) {
    for (std::size_t n : n_list) {
      BoundCurvePoint pt{n, beta, 0.0};
      pt.p_min = beta == 0.0 ? connectivity_threshold(n)
                             : beta_threshold_p(beta, static_cast<double>(n)).p;
      out.push_back(pt);
    }
  }
  return out;
}

void write_bound_curve_csv(const std::vector<BoundCurvePoint>& points, std::ostream& out) {
  out << "n,beta,p_min\n";
  for (const auto& pt : points) {
    out << pt.n << ',' << detail::format_sig9(pt.beta) << ',' << detail::format_sig9(pt.p_min)
        << '\n';
  }
}

}  // namespace gsync
