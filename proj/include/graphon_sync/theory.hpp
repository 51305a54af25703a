#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "graphon_sync/graphon.hpp"
#include "graphon_sync/integrator.hpp"

namespace gsync {

/// Concentration level 2 ln(2n/delta) / (n alpha) bounding every row deviation
/// g_{n,i} with probability at least 1 - delta.
double g_bar(std::size_t n, double delta, double alpha);

/// Rates of the positive comparison system u_i' <= c u_i + d mean(u) + g.
struct BoundParams {
  double c = 1.0;
  double d = 1.0;
  double g = 0.0;
  double T = 1.0;

  void validate() const;
};

/// g/(c+d) (e^{(c+d)T} - 1).
double positive_system_bound(const BoundParams& p);

/// Right-hand side c u_i + d mean(u) + g - slack_i(t). An empty slack gives the
/// comparison system itself.
Rhs positive_system_rhs(const BoundParams& p,
                        std::function<double(std::size_t i, double t)> slack = {});

/// The degree-ratio factor (1 + n^{-1/3}) / (1 - n^{-1/3}); 1 for n = infinity.
double degree_ratio_factor(double n);

struct ProbabilityThreshold {
  double p = 0.0;
  bool feasible = true;  // false when the required p exceeds 1
};

/// Smallest edge probability for which cos^2(beta)/sin(beta) > (2/p) * factor(n)
/// holds with equality. Pass n = infinity for the large-n limit. The returned
/// value is an open lower bound.
ProbabilityThreshold beta_threshold_p(double beta, double n);

/// Largest phase shift admitted for (p, n): root of s^2 + R s - 1 = 0 with
/// s = sin(beta) and R = (2/p) factor(n).
double max_beta_for(double p, double n);

/// ln(n)/n.
double connectivity_threshold(std::size_t n);

/// Per-row deviation g_{n,i} = 1/2 (mean_{j != i} (A_ij/alpha - W_ij))^2.
std::vector<double> empirical_g(const SampledNetwork& net, const DiscretizedGraphon& d);

/// max over i != j of (deg_i + deg_j) / |N(i) ∩ N(j)|; the quantity that must
/// stay below cos^2(beta)/sin(beta) for the invariance argument. Returns
/// infinity if some pair shares no neighbour.
double max_degree_overlap_ratio(const SampledNetwork& net);

struct BoundCurvePoint {
  std::size_t n = 0;
  double beta = 0.0;
  double p_min = 0.0;
};

/// For beta = 0 the connectivity threshold, otherwise beta_threshold_p(beta, n).
std::vector<BoundCurvePoint> bound_curve(const std::vector<std::size_t>& n_list,
                                         const std::vector<double>& betas);
/// CSV with header "n,beta,p_min".
void write_bound_curve_csv(const std::vector<BoundCurvePoint>& points, std::ostream& out);

}  // namespace gsync
