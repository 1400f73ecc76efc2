#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spectraforge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Undirected weighted edge, stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;
};

// Undirected attributed graph. Edges are unique (i, j) pairs with i < j and
// nonnegative weights; the dense adjacency is symmetric with a zero diagonal.
// Dense materialization targets desk-scale graphs (n up to a few thousand).
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  std::optional<Matrix> features;
  std::optional<std::vector<int>> labels;
};

// Binary mask restricting where edge-plan deltas may touch the graph:
// s_ij = 1 iff 0 < shortest-path-distance(i, j) <= hops.
struct ScopeMask {
  Matrix s;
  int hops = 1;
};

// Validates indices, rejects self loops, canonicalizes i < j, merges
// duplicate pairs (last occurrence wins) and sorts edges.
Graph make_graph(int n, std::vector<Edge> edges);

// Edge-list text format: '#' comments, optional "#n <N>" header line,
// data lines "i j" or "i j w" with 0-based ids. Without a header, n is
// max id + 1. Parse errors report the offending line number.
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

// Feature CSV: row r holds the features of node r, no header.
// Label CSV: header line "node,label", then "id,class" rows.
Matrix load_features_csv(const std::string& path);
std::vector<int> load_labels_csv(const std::string& path, int n);

// Stochastic block model with per-pair Bernoulli edges; deterministic
// for a fixed seed.
Graph generate_sbm(const std::vector<int>& blocks, double p_in, double p_out,
                   std::uint64_t seed);

Matrix adjacency(const Graph& g);
Vector degrees(const Graph& g);

// Rebuilds a Graph from a symmetric nonnegative dense matrix, keeping
// strictly positive off-diagonal entries as edges.
Graph graph_from_dense(const Matrix& a);

// D^{-1/2} A D^{-1/2}; with self_loops, A+I is normalized instead.
// Rows of degree-0 nodes are zero (their D^{-1/2} entry is defined as 0).
Matrix normalized_adjacency(const Graph& g, bool self_loops);

// I - D^{-1/2} A D^{-1/2}, always without self loops. Isolated nodes keep
// a diagonal 1.
Matrix normalized_laplacian(const Graph& g);

ScopeMask scope_mask(const Graph& g, int hops);

}  // namespace spectraforge
