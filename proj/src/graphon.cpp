#include "graphon_sync/graphon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "format.hpp"
#include "graphon_sync/errors.hpp"
#include "graphon_sync/rng.hpp"

namespace gsync {

namespace {

// 4-point Gauss-Legendre on [0,1].
constexpr std::array<double, 4> kGaussNodes = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {
    0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461, 0.5 * 0.6521451548625461,
    0.5 * 0.3478548451374538};

// Gauss blocks per side of the unit square, at least.
constexpr std::size_t kMinBlocks = 32;

std::string cell_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

template <typename Prob>
std::vector<std::uint8_t> draw_pairs(std::size_t n, std::uint64_t seed, Prob prob) {
  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = to_unit_interval(pair_hash(seed, i, j));
      if (u < prob(i, j)) {
        adj[i * n + j] = 1;
        adj[j * n + i] = 1;
      }
    }
  }
  return adj;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("scaling factor must lie in (0,1], got " + detail::format_sig9(alpha));
  }
}

}  // namespace

Graphon::Graphon(std::string label, Kernel kernel)
    : label_(std::move(label)), kernel_(std::move(kernel)) {}

Graphon::Graphon(std::string label, Kernel kernel, Factor rank_one_factor)
    : label_(std::move(label)), kernel_(std::move(kernel)), factor_(std::move(rank_one_factor)) {}

Graphon Graphon::constant(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw ParameterError("constant graphon value must lie in [0,1]");
  }
  const double root = std::sqrt(c);
  Graphon g("constant-" + detail::format_roundtrip(c), [c](double, double) { return c; },
            [root](double) { return root; });
  g.constant_ = c;
  return g;
}

Graphon Graphon::product_sine() {
  using std::numbers::pi;
  return Graphon(
      "product-sine", [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); },
      [](double x) { return std::sin(pi * x); });
}

Graphon Graphon::from_grid(std::vector<double> values, std::size_t k, std::string label) {
  if (k < 2 || values.size() != k * k) {
    throw ParameterError("grid graphon needs a k-by-k grid with k >= 2");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ParameterError("grid graphon values must be finite and lie in [0,1]");
    }
  }
  auto bilinear = [grid = std::move(values), k](double x, double y) {
    const double span = static_cast<double>(k - 1);
    const double fx = std::clamp(x, 0.0, 1.0) * span;
    const double fy = std::clamp(y, 0.0, 1.0) * span;
    const std::size_t ix = std::min(static_cast<std::size_t>(fx), k - 2);
    const std::size_t iy = std::min(static_cast<std::size_t>(fy), k - 2);
    const double tx = fx - static_cast<double>(ix);
    const double ty = fy - static_cast<double>(iy);
    const double w00 = grid[ix * k + iy];
    const double w01 = grid[ix * k + iy + 1];
    const double w10 = grid[(ix + 1) * k + iy];
    const double w11 = grid[(ix + 1) * k + iy + 1];
    return (1 - tx) * ((1 - ty) * w00 + ty * w01) + tx * ((1 - ty) * w10 + ty * w11);
  };
  return Graphon(std::move(label), [bilinear](double x, double y) {
    return 0.5 * (bilinear(x, y) + bilinear(y, x));
  });
}

Graphon Graphon::from_label(const std::string& label) {
  if (label == "product-sine") return product_sine();
  const std::string prefix = "constant-";
  if (label.rfind(prefix, 0) == 0) {
    const std::string rest = label.substr(prefix.size());
    double c = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), c);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) {
      throw ParameterError("cannot parse graphon label '" + label + "'");
    }
    return constant(c);
  }
  throw ParameterError("unknown graphon label '" + label + "'");
}

DiscretizedGraphon::DiscretizedGraphon(std::size_t n, std::vector<double> cells)
    : n_(n), cells_(std::move(cells)) {
  if (n_ == 0 || cells_.size() != n_ * n_) {
    throw DimensionError("discretized graphon needs n >= 1 and n*n cells");
  }
}

double SampledNetwork::edge_density() const noexcept {
  if (n_ < 2) return 0.0;
  return static_cast<double>(edge_count()) / (0.5 * static_cast<double>(n_) * (n_ - 1));
}

SampledNetwork::SampledNetwork(std::size_t n, double alpha, std::uint64_t seed,
                               std::vector<std::uint8_t> adj)
    : n_(n), alpha_(alpha), seed_(seed), adjacency_(std::move(adj)) {
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t deg = 0;
    for (std::size_t j = 0; j < n_; ++j) deg += adjacency_[i * n_ + j];
    offsets_[i + 1] = offsets_[i] + deg;
  }
  indices_.resize(offsets_[n_]);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t pos = offsets_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      if (adjacency_[i * n_ + j]) indices_[pos++] = static_cast<std::uint32_t>(j);
    }
  }
}

SampledNetwork SampledNetwork::from_adjacency(std::size_t n, double alpha, std::uint64_t seed,
                                              std::vector<std::uint8_t> adjacency) {
  if (n == 0 || adjacency.size() != n * n) {
    throw DimensionError("adjacency must be n-by-n with n >= 1");
  }
  check_alpha(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i * n + i] != 0) throw InputError("adjacency diagonal must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto a = adjacency[i * n + j];
      if (a > 1 || a != adjacency[j * n + i]) {
        throw InputError("adjacency must be symmetric with 0/1 entries");
      }
    }
  }
  return SampledNetwork(n, alpha, seed, std::move(adjacency));
}

SampledNetwork SampledNetwork::from_edges(
    std::size_t n, double alpha, std::uint64_t seed,
    std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::uint8_t> adj(n * n, 0);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n || i == j) {
      throw InputError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") is invalid");
    }
    adj[i * n + j] = adj[j * n + i] = 1;
  }
  return from_adjacency(n, alpha, seed, std::move(adj));
}

DiscretizedGraphon discretize(const Graphon& g, std::size_t n) {
  if (n == 0) throw ParameterError("discretize needs n >= 1");
  if (auto c = g.constant_value()) {
    return DiscretizedGraphon(n, std::vector<double>(n * n, *c));
  }
  // Coarse meshes split every cell into sub x sub Gauss blocks so the
  // quadrature stays accurate when a cell spans a large part of the square.
  const std::size_t sub = std::max<std::size_t>(1, (kMinBlocks + n - 1) / n);
  const double width = 1.0 / static_cast<double>(n * sub);
  const double block_weight = 1.0 / static_cast<double>(sub * sub);
  std::vector<double> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t bi = 0; bi < sub; ++bi) {
        for (std::size_t bj = 0; bj < sub; ++bj) {
          const double x0 = static_cast<double>(i * sub + bi);
          const double y0 = static_cast<double>(j * sub + bj);
          for (std::size_t a = 0; a < 4; ++a) {
            const double x = (x0 + kGaussNodes[a]) * width;
            for (std::size_t b = 0; b < 4; ++b) {
              const double y = (y0 + kGaussNodes[b]) * width;
              const double w = g(x, y);
              if (!std::isfinite(w)) {
                throw EvaluationError("graphon '" + g.label() + "' is not finite in cell " +
                                      cell_name(i, j));
              }
              acc += block_weight * kGaussWeights[a] * kGaussWeights[b] * w;
            }
          }
        }
      }
      acc = std::clamp(acc, 0.0, 1.0);
      cells[i * n + j] = acc;
      cells[j * n + i] = acc;
    }
  }
  return DiscretizedGraphon(n, std::move(cells));
}

SampledNetwork sample_network(const DiscretizedGraphon& d, double alpha, std::uint64_t seed) {
  check_alpha(alpha);
  auto adj = draw_pairs(d.n(), seed, [&](std::size_t i, std::size_t j) { return alpha * d(i, j); });
  return SampledNetwork::from_adjacency(d.n(), alpha, seed, std::move(adj));
}

SampledNetwork erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw ParameterError("erdos_renyi needs n >= 1");
  check_alpha(p);
  // alpha * 1.0 == p exactly, so this matches sample_network on constant-1 cells.
  auto adj = draw_pairs(n, seed, [p](std::size_t, std::size_t) { return p * 1.0; });
  return SampledNetwork::from_adjacency(n, p, seed, std::move(adj));
}

bool is_connected(const SampledNetwork& net) {
  const std::size_t n = net.n();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (auto j : net.neighbors(queue[head])) {
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  return queue.size() == n;
}

void write_edge_list(const SampledNetwork& net, std::ostream& out) {
  out << "# n=" << net.n() << " alpha=" << detail::format_roundtrip(net.alpha())
      << " seed=" << net.seed() << '\n';
  for (std::size_t i = 0; i < net.n(); ++i) {
    for (auto j : net.neighbors(i)) {
      if (j > i) out << i << ' ' << j << '\n';
    }
  }
}

void write_edge_list(const SampledNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_edge_list(net, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

SampledNetwork read_edge_list(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InputError("edge list is empty");
  std::size_t n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(header);
    std::string hash, nf, af, sf;
    hs >> hash >> nf >> af >> sf;
    if (hash != "#" || nf.rfind("n=", 0) != 0 || af.rfind("alpha=", 0) != 0 ||
        sf.rfind("seed=", 0) != 0) {
      throw InputError("malformed edge-list header: '" + header + "'");
    }
    try {
      n = std::stoull(nf.substr(2));
      alpha = std::stod(af.substr(6));
      seed = std::stoull(sf.substr(5));
    } catch (const std::exception&) {
      throw InputError("malformed edge-list header: '" + header + "'");
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t i = 0, j = 0;
  while (in >> i >> j) edges.emplace_back(i, j);
  if (!in.eof()) throw InputError("malformed edge line");
  return SampledNetwork::from_edges(n, alpha, seed, edges);
}

SampledNetwork read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_edge_list(in);
}

}  // namespace gsync
