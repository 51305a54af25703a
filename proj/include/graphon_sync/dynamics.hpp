#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "graphon_sync/graphon.hpp"

namespace gsync {

enum class CouplingKind { Kuramoto, Sakaguchi, Custom };

/// Coupling function D, phase shift and intrinsic drift f(theta, t).
///
/// Kuramoto and Sakaguchi kernels are sinusoidal, which lets every
/// right-hand side below use the identity
///   sin(tj - ti + b) = cos b (sj ci - cj si) + sin b (cj ci + sj si)
/// and turn the pairwise sum into weighted sums of sin/cos. Custom kernels
/// fall back to direct pairwise evaluation.
struct CouplingSpec {
  CouplingKind kind = CouplingKind::Kuramoto;
  double beta = 0.0;
  std::function<double(double)> custom;
  std::function<double(double, double)> intrinsic;
  double lipschitz_D = 1.0;
  double lipschitz_f = 0.0;

  static CouplingSpec kuramoto();
  /// beta must lie in (-pi/2, pi/2).
  static CouplingSpec sakaguchi(double beta);
  /// D must be 2pi-periodic with max |D| <= 1. Its Lipschitz constant is taken on trust.
  static CouplingSpec custom_kernel(std::function<double(double)> d, double lipschitz);

  double kernel(double u) const;
  double drift(double theta, double t) const { return intrinsic ? intrinsic(theta, t) : 0.0; }
  bool sinusoidal() const noexcept { return kind != CouplingKind::Custom; }

  /// Checks |D| <= 1 and 2pi-periodicity on a grid of one period.
  void validate() const;
};

/// Lifted phases on a uniform mesh; node i (0-based) owns [i/m, (i+1)/m).
class PhaseField {
 public:
  PhaseField() = default;
  explicit PhaseField(std::vector<double> values);

  std::size_t mesh() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& vector() const noexcept { return values_; }

  friend bool operator==(const PhaseField&, const PhaseField&) = default;

 private:
  std::vector<double> values_;
};

/// values(i) = eta(i/n) for i = 0..n-1.
PhaseField discretize_initial(const std::function<double(double)>& eta, std::size_t n);

/// Value of the owning cell; x = 1 maps to the last cell.
double interpolate(const PhaseField& field, double x);

// Raw-span kernels used by the integrator. `out` must have the state's size.
void sds_rhs_into(std::span<const double> state, const SampledNetwork& net,
                  const CouplingSpec& c, double t, std::span<double> out);
void ads_rhs_into(std::span<const double> state, const DiscretizedGraphon& d,
                  const CouplingSpec& c, double t, std::span<double> out);
void cds_rhs_into(std::span<const double> state, const Graphon& g, const CouplingSpec& c,
                  double t, std::span<double> out);

/// f(theta_i,t) + (n alpha)^-1 sum_j A_ij D(theta_j - theta_i).
PhaseField sds_rhs(const PhaseField& state, const SampledNetwork& net, const CouplingSpec& c,
                   double t);
/// f(theta_i,t) + n^-1 sum_j W_ij D(theta_j - theta_i), diagonal term included.
PhaseField ads_rhs(const PhaseField& state, const DiscretizedGraphon& d, const CouplingSpec& c,
                   double t);
/// Left-endpoint Riemann sum of the continuum coupling integral at x_i = i/m.
PhaseField cds_rhs(const PhaseField& state, const Graphon& g, const CouplingSpec& c, double t);

}  // namespace gsync
