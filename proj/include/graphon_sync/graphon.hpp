#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gsync {

/// Symmetric kernel W : [0,1]^2 -> [0,1].
///
/// Besides the evaluator, a graphon may carry a rank-one factorisation
/// W(x,y) = u(x) u(y). The continuum right-hand side uses it to drop from
/// O(m^2) to O(m) work per evaluation; constant graphons are the main case.
class Graphon {
 public:
  using Kernel = std::function<double(double, double)>;
  using Factor = std::function<double(double)>;

  Graphon(std::string label, Kernel kernel);
  Graphon(std::string label, Kernel kernel, Factor rank_one_factor);

  /// W(x,y) = c.
  static Graphon constant(double c);
  /// W(x,y) = sin(pi x) sin(pi y).
  static Graphon product_sine();
  /// Bilinear interpolation of a k-by-k row-major grid sampled at nodes
  /// a/(k-1), symmetrised as (W(x,y)+W(y,x))/2.
  static Graphon from_grid(std::vector<double> values, std::size_t k, std::string label = "grid");
  /// "constant-<c>" (e.g. "constant-1", "constant-0.5") or "product-sine".
  static Graphon from_label(const std::string& label);

  double operator()(double x, double y) const { return kernel_(x, y); }

  const std::string& label() const noexcept { return label_; }
  const std::optional<Factor>& rank_one_factor() const noexcept { return factor_; }
  std::optional<double> constant_value() const noexcept { return constant_; }

 private:
  std::string label_;
  Kernel kernel_;
  std::optional<Factor> factor_;
  std::optional<double> constant_;
};

/// Cell averages n^2 * integral of W over I_i x I_j, stored row-major.
class DiscretizedGraphon {
 public:
  DiscretizedGraphon(std::size_t n, std::vector<double> cells);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {cells_.data() + i * n_, n_}; }
  std::span<const double> cells() const noexcept { return cells_; }

 private:
  std::size_t n_;
  std::vector<double> cells_;
};

/// Undirected simple graph with the scaling factor used to normalise coupling.
///
/// Stores both the dense 0/1 matrix and a CSR neighbour list; the latter is
/// what the sampled right-hand side iterates over.
class SampledNetwork {
 public:
  /// Validates symmetry, 0/1 entries and an empty diagonal.
  static SampledNetwork from_adjacency(std::size_t n, double alpha, std::uint64_t seed,
                                       std::vector<std::uint8_t> adjacency);
  static SampledNetwork from_edges(std::size_t n, double alpha, std::uint64_t seed,
                                   std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool adjacent(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }
  std::span<const std::uint8_t> adjacency() const noexcept { return adjacency_; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t edge_count() const noexcept { return indices_.size() / 2; }
  double edge_density() const noexcept;

  friend bool operator==(const SampledNetwork& a, const SampledNetwork& b) {
    return a.n_ == b.n_ && a.alpha_ == b.alpha_ && a.seed_ == b.seed_ &&
           a.adjacency_ == b.adjacency_;
  }

 private:
  SampledNetwork(std::size_t n, double alpha, std::uint64_t seed, std::vector<std::uint8_t> adj);

  std::size_t n_;
  double alpha_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
};

/// Cell averages by 4x4 tensor Gauss-Legendre quadrature per cell (exact for
/// constant graphons). Throws EvaluationError naming the first cell where the
/// kernel is not finite.
DiscretizedGraphon discretize(const Graphon& g, std::size_t n);

/// Each pair i<j is an independent Bernoulli(alpha * cells(i,j)) draw keyed on
/// (seed, i, j), so the result does not depend on iteration order.
SampledNetwork sample_network(const DiscretizedGraphon& d, double alpha, std::uint64_t seed);

/// G(n,p); bit-identical to sample_network(discretize(constant(1), n), p, seed).
SampledNetwork erdos_renyi(std::size_t n, double p, std::uint64_t seed);

bool is_connected(const SampledNetwork& net);

// Edge-list text format: header "# n=<n> alpha=<alpha> seed=<seed>", then one
// "i j" line per edge with i < j, ascending.
void write_edge_list(const SampledNetwork& net, std::ostream& out);
void write_edge_list(const SampledNetwork& net, const std::string& path);
SampledNetwork read_edge_list(std::istream& in);
SampledNetwork read_edge_list_file(const std::string& path);

}  // namespace gsync
