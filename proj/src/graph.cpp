#include "spectraforge/graph.hpp"

#include "spectraforge/errors.hpp"
#include "spectraforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace spectraforge {

namespace {

void check_index(int idx, int n, const std::string& what) {
  if (idx < 0 || idx >= n) {
    throw ValidationError(what + " index " + std::to_string(idx) +
                          " out of range [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

Graph make_graph(int n, std::vector<Edge> edges) {
  if (n < 0) throw ValidationError("negative node count");
  std::map<std::pair<int, int>, double> dedup;
  for (const Edge& e : edges) {
    check_index(e.i, n, "edge");
    check_index(e.j, n, "edge");
    if (e.i == e.j) {
      throw ValidationError("self loop at node " + std::to_string(e.i));
    }
    if (!(e.w >= 0.0)) {
      throw ValidationError("negative or non-finite weight on edge (" +
                            std::to_string(e.i) + ", " + std::to_string(e.j) +
                            ")");
    }
    dedup[{std::min(e.i, e.j), std::max(e.i, e.j)}] = e.w;
  }
  Graph g;
  g.n = n;
  g.edges.reserve(dedup.size());
  for (const auto& [key, w] : dedup) {
    g.edges.push_back({key.first, key.second, w});
  }
  return g;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list: " + path);
  std::vector<Edge> edges;
  int header_n = -1;
  int max_id = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = path + ":" + std::to_string(lineno);
    if (line.rfind("#n", 0) == 0) {
      std::istringstream hs(line.substr(2));
      if (!(hs >> header_n) || header_n < 0) {
        throw ValidationError(where + ": malformed #n header");
      }
      continue;
    }
    std::string data = line.substr(0, line.find('#'));
    std::istringstream ls(data);
    int i, j;
    if (!(ls >> i)) continue;  // blank or comment-only line
    if (!(ls >> j)) throw ValidationError(where + ": expected \"i j [w]\"");
    double w = 1.0;
    if (ls >> w) {
      if (!(w >= 0.0)) throw ValidationError(where + ": negative weight");
    }
    std::string trailing;
    if (ls >> trailing) throw ValidationError(where + ": trailing tokens");
    if (i < 0 || j < 0) throw ValidationError(where + ": negative node id");
    if (i == j) {
      throw ValidationError(where + ": self loop at node " +
                            std::to_string(i));
    }
    max_id = std::max({max_id, i, j});
    edges.push_back({i, j, w});
  }
  int n = header_n >= 0 ? header_n : max_id + 1;
  if (header_n >= 0 && max_id >= header_n) {
    throw ValidationError(path + ": edge id " + std::to_string(max_id) +
                          " exceeds #n header " + std::to_string(header_n));
  }
  return make_graph(n, std::move(edges));
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ostringstream out;
  out << "#n " << g.n << "\n";
  for (const Edge& e : g.edges) {
    out << e.i << " " << e.j;
    if (e.w != 1.0) out << " " << format_g12(e.w);
    out << "\n";
  }
  write_text_file(path, out.str());
}

Matrix load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open feature file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": bad number \"" + cell + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": empty feature file");
  Matrix x(rows.size(), rows.front().size());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) x(r, c) = rows[r][c];
  }
  return x;
}

std::vector<int> load_labels_csv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open label file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,label", 0) != 0) {
    throw ValidationError(path + ": expected header \"node,label\"");
  }
  std::vector<int> labels(n, -1);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id_s, label_s;
    if (!std::getline(ls, id_s, ',') || !std::getline(ls, label_s)) {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected \"id,class\"");
    }
    int id, label;
    try {
      id = std::stoi(id_s);
      label = std::stoi(label_s);
    } catch (const std::exception&) {
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": bad integer");
    }
    check_index(id, n, "label node");
    labels[id] = label;
  }
  return labels;
}

Graph generate_sbm(const std::vector<int>& blocks, double p_in, double p_out,
                   std::uint64_t seed) {
  if (blocks.empty()) throw ValidationError("empty block list");
  for (int b : blocks) {
    if (b <= 0) throw ValidationError("non-positive block size");
  }
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1) {
    throw ValidationError("probabilities must lie in [0, 1]");
  }
  int n = 0;
  std::vector<int> block_of;
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (int k = 0; k < blocks[b]; ++k) block_of.push_back(b);
    n += blocks[b];
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = block_of[i] == block_of[j] ? p_in : p_out;
      if (unif(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  Graph g = make_graph(n, std::move(edges));
  g.labels = block_of;
  return g;
}

Matrix adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.n, g.n);
  for (const Edge& e : g.edges) {
    a(e.i, e.j) = e.w;
    a(e.j, e.i) = e.w;
  }
  return a;
}

Vector degrees(const Graph& g) {
  Vector d = Vector::Zero(g.n);
  for (const Edge& e : g.edges) {
    d(e.i) += e.w;
    d(e.j) += e.w;
  }
  return d;
}

Graph graph_from_dense(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("adjacency must be square");
  int n = static_cast<int>(a.rows());
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-9) {
        throw ValidationError("adjacency not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(j) +
                              ")");
      }
      if (a(i, j) < 0) {
        throw ValidationError("negative adjacency entry at (" +
                              std::to_string(i) + ", " + std::to_string(j) +
                              ")");
      }
      if (a(i, j) > 0) edges.push_back({i, j, a(i, j)});
    }
  }
  return make_graph(n, std::move(edges));
}

Matrix normalized_adjacency(const Graph& g, bool self_loops) {
  if (g.n == 0) throw ValidationError("empty graph");
  Matrix b = adjacency(g);
  if (self_loops) b += Matrix::Identity(g.n, g.n);
  Vector d = b.rowwise().sum();
  Vector dinv(g.n);
  for (int i = 0; i < g.n; ++i) {
    dinv(i) = d(i) > 0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  }
  return dinv.asDiagonal() * b * dinv.asDiagonal();
}

Matrix normalized_laplacian(const Graph& g) {
  return Matrix::Identity(g.n, g.n) - normalized_adjacency(g, false);
}

ScopeMask scope_mask(const Graph& g, int hops) {
  if (hops != 1 && hops != 2) throw ValidationError("hops must be 1 or 2");
  Matrix a = adjacency(g);
  Matrix reach = a;
  if (hops == 2) reach += a * a;
  ScopeMask mask;
  mask.hops = hops;
  mask.s = Matrix::Zero(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (i != j && reach(i, j) > 0) mask.s(i, j) = 1.0;
    }
  }
  return mask;
}

}  // namespace spectraforge
