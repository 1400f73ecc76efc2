#include "spectraforge/augment.hpp"

#include "spectraforge/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace spectraforge {

namespace {

std::vector<int> band_kept(int band_lo, int band_hi, double rate,
                           KeepOrder order) {
  int size = band_hi - band_lo;
  int keep = static_cast<int>(std::llround(rate * size));
  std::vector<int> kept;
  if (order == KeepOrder::low_to_high) {
    for (int i = band_lo; i < band_lo + keep; ++i) kept.push_back(i);
  } else {
    for (int i = band_hi - keep; i < band_hi; ++i) kept.push_back(i);
  }
  return kept;
}

std::vector<int> sample_without_replacement(int count, int from,
                                            std::mt19937_64& rng) {
  std::vector<int> idx(from);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  return idx;
}

}  // namespace

Matrix eigenspace_filter_view(const SpectralDecomposition& dec,
                              const FilterSpec& spec) {
  if (dec.source != MatrixSource::laplacian) {
    throw ValidationError("filter views need a Laplacian decomposition");
  }
  if (spec.keep_rate < 0.0 || spec.keep_rate > 1.0) {
    throw ValidationError("keep_rate outside [0, 1]");
  }
  int n = static_cast<int>(dec.lambdas.size());
  int split = n / 2;  // F_L = [0, split), F_H = [split, n)
  std::vector<int> kept;
  auto keep_whole = [&kept](int lo, int hi) {
    for (int i = lo; i < hi; ++i) kept.push_back(i);
  };
  switch (spec.band) {
    case Band::low: {
      kept = band_kept(0, split, spec.keep_rate, spec.order);
      if (spec.base_band_kept) keep_whole(split, n);
      break;
    }
    case Band::high: {
      kept = band_kept(split, n, spec.keep_rate, spec.order);
      if (spec.base_band_kept) keep_whole(0, split);
      break;
    }
    case Band::both: {
      auto low = band_kept(0, split, spec.keep_rate, spec.order);
      auto high = band_kept(split, n, spec.keep_rate, spec.order);
      kept = low;
      kept.insert(kept.end(), high.begin(), high.end());
      break;
    }
  }
  Matrix v = Matrix::Zero(n, n);
  for (int i : kept) {
    v.noalias() += dec.u.col(i) * dec.u.col(i).transpose();
  }
  return v;
}

Graph random_topology_augment(const Graph& g, TopologyAugment kind,
                              double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate >= 1.0) throw ValidationError("rate outside [0, 1)");
  std::mt19937_64 rng(seed);
  int e_count = static_cast<int>(g.edges.size());
  switch (kind) {
    case TopologyAugment::edge_drop: {
      int drop = static_cast<int>(rate * e_count);
      auto order = sample_without_replacement(drop, e_count, rng);
      std::set<int> dropped(order.begin(), order.end());
      std::vector<Edge> kept;
      for (int e = 0; e < e_count; ++e) {
        if (!dropped.count(e)) kept.push_back(g.edges[e]);
      }
      return make_graph(g.n, std::move(kept));
    }
    case TopologyAugment::node_drop: {
      int drop = static_cast<int>(rate * g.n);
      auto order = sample_without_replacement(drop, g.n, rng);
      std::set<int> gone(order.begin(), order.end());
      std::vector<Edge> kept;
      for (const Edge& e : g.edges) {
        if (!gone.count(e.i) && !gone.count(e.j)) kept.push_back(e);
      }
      return make_graph(g.n, std::move(kept));
    }
    case TopologyAugment::edge_perturb: {
      int flip = static_cast<int>(rate * e_count);
      auto order = sample_without_replacement(flip, e_count, rng);
      std::set<int> dropped(order.begin(), order.end());
      std::set<std::pair<int, int>> present;
      for (const Edge& e : g.edges) present.insert({e.i, e.j});
      long long non_edges =
          static_cast<long long>(g.n) * (g.n - 1) / 2 - e_count;
      if (non_edges < flip) {
        throw ValidationError("not enough non-edges to add");
      }
      std::vector<Edge> out;
      for (int e = 0; e < e_count; ++e) {
        if (!dropped.count(e)) out.push_back(g.edges[e]);
      }
      std::uniform_int_distribution<int> pick(0, g.n - 1);
      std::set<std::pair<int, int>> added;
      while (static_cast<int>(added.size()) < flip) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        std::pair<int, int> key{std::min(i, j), std::max(i, j)};
        if (present.count(key) || added.count(key)) continue;
        added.insert(key);
        out.push_back({key.first, key.second, 1.0});
      }
      return make_graph(g.n, std::move(out));
    }
    case TopologyAugment::subgraph: {
      int target = static_cast<int>(std::ceil((1.0 - rate) * g.n));
      std::vector<std::vector<int>> adj(g.n);
      for (const Edge& e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
      }
      std::uniform_int_distribution<int> pick(0, g.n - 1);
      std::set<int> visited;
      int current = pick(rng);
      visited.insert(current);
      int stalled = 0;
      auto jump_to_unvisited = [&]() {
        for (int i = 0; i < g.n; ++i) {
          if (!visited.count(i)) return i;
        }
        return current;
      };
      while (static_cast<int>(visited.size()) < target) {
        if (adj[current].empty() || stalled > 4 * g.n) {
          current = jump_to_unvisited();
          visited.insert(current);
          stalled = 0;
          continue;
        }
        std::uniform_int_distribution<int> step(
            0, static_cast<int>(adj[current].size()) - 1);
        current = adj[current][step(rng)];
        if (visited.insert(current).second) {
          stalled = 0;
        } else {
          ++stalled;
        }
      }
      std::vector<Edge> kept;
      for (const Edge& e : g.edges) {
        if (visited.count(e.i) && visited.count(e.j)) kept.push_back(e);
      }
      return make_graph(g.n, std::move(kept));
    }
  }
  throw ValidationError("unknown augmentation mode");
}

Matrix diffusion_matrix(const Graph& g, Diffusion kind, double param) {
  int n = g.n;
  Matrix ahat = normalized_adjacency(g, true);
  if (kind == Diffusion::ppr) {
    if (param <= 0.0 || param >= 1.0) {
      throw ValidationError("ppr teleport must lie in (0, 1)");
    }
    Matrix system = Matrix::Identity(n, n) - (1.0 - param) * ahat;
    Eigen::PartialPivLU<Matrix> lu(system);
    Matrix out = param * lu.solve(Matrix::Identity(n, n));
    if (!out.allFinite()) {
      throw NumericalError("ppr system is numerically singular");
    }
    return out;
  }
  if (param < 0.0) throw ValidationError("heat time must be >= 0");
  if (param == 0.0) return Matrix::Identity(n, n);
  SpectralDecomposition d =
      decompose(Matrix::Identity(n, n) - ahat, MatrixSource::custom);
  Vector damp = (-param * d.lambdas.array()).exp();
  return d.u * damp.asDiagonal() * d.u.transpose();
}

Graph matrix_power_view(const Graph& g, int k) {
  if (k != 2) throw ValidationError("only the square power view is supported");
  Matrix a = adjacency(g);
  Matrix a2 = a * a;
  std::vector<Edge> edges;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (a2(i, j) > 0) edges.push_back({i, j, 1.0});
    }
  }
  return make_graph(g.n, std::move(edges));
}

}  // namespace spectraforge
