#pragma once

#include "spectraforge/graph.hpp"
#include "spectraforge/spectral.hpp"

#include <cstdint>

namespace spectraforge {

enum class Band { low, high, both };
enum class KeepOrder { low_to_high, high_to_low };

// Selects eigenspaces for a filtered view. The low band is the first
// floor(N/2) eigen-indices in ascending frequency order, the high band the
// rest. keep_rate in [0,1] keeps llround(keep_rate * band_size) spaces from
// the targeted band, taken from the band bottom (low_to_high) or top.
// base_band_kept controls whether the non-targeted band is kept whole.
struct FilterSpec {
  Band band = Band::low;
  double keep_rate = 1.0;
  KeepOrder order = KeepOrder::low_to_high;
  bool base_band_kept = true;
};

enum class TopologyAugment { edge_drop, node_drop, edge_perturb, subgraph };

// V = sum_{kept i} u_i u_i^T, the projector onto the kept eigenspaces.
// Symmetric with eigenvalues in {0, 1}; dense.
Matrix eigenspace_filter_view(const SpectralDecomposition& dec,
                              const FilterSpec& spec);

// Classical random topology views, all on the unweighted simple graph:
//   edge_drop:    remove floor(rate * |E|) edges chosen without replacement
//   node_drop:    zero all edges incident to floor(rate * n) random nodes
//   edge_perturb: remove floor(rate * |E|) edges, add the same count drawn
//                 from the non-edges of the original graph
//   subgraph:     random-walk growth to ceil((1 - rate) * n) nodes with a
//                 restart to the smallest-id unvisited node after 4n stalls,
//                 then the induced edge set
Graph random_topology_augment(const Graph& g, TopologyAugment kind,
                              double rate, std::uint64_t seed);

enum class Diffusion { ppr, heat };

// ppr:  alpha (I - (1 - alpha) A_loops)^{-1}
// heat: U diag(exp(-t lambda)) U^T on the self-loop normalized Laplacian
Matrix diffusion_matrix(const Graph& g, Diffusion kind, double param);

// Binary power-support view: edge {i, j} present iff a length-k walk joins
// i and j in g; the diagonal is dropped. Only k = 2 is supported.
Graph matrix_power_view(const Graph& g, int k = 2);

}  // namespace spectraforge
