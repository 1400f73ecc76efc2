#include "doctest.h"

#include "spectraforge/errors.hpp"
#include "spectraforge/graph.hpp"

#include <filesystem>
#include <fstream>
#include <set>

using namespace spectraforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "spectraforge_graph_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("make_graph canonicalizes, dedups and validates") {
  Graph g = make_graph(4, {{2, 0, 1.0}, {0, 2, 0.5}, {1, 3, 2.0}});
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].i == 0);
  CHECK(g.edges[0].j == 2);
  CHECK(g.edges[0].w == 0.5);  // last duplicate wins
  CHECK(g.edges[1].i == 1);
  CHECK(g.edges[1].j == 3);

  CHECK_THROWS_AS(make_graph(3, {{0, 0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(make_graph(3, {{0, 3, 1.0}}), ValidationError);
  CHECK_THROWS_AS(make_graph(3, {{0, 1, -1.0}}), ValidationError);
  CHECK_THROWS_AS(make_graph(-1, {}), ValidationError);
}

TEST_CASE("edge list round trip with comments and header") {
  fs::path p = temp_file("round.edges",
                         "# a comment\n#n 5\n0 1\n2 3 0.5\n\n# tail\n");
  Graph g = load_edge_list(p.string());
  CHECK(g.n == 5);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[1].w == 0.5);

  fs::path q = temp_file("round2.edges", "");
  save_edge_list(g, q.string());
  Graph h = load_edge_list(q.string());
  CHECK(h.n == g.n);
  REQUIRE(h.edges.size() == g.edges.size());
  for (size_t e = 0; e < g.edges.size(); ++e) {
    CHECK(h.edges[e].i == g.edges[e].i);
    CHECK(h.edges[e].j == g.edges[e].j);
    CHECK(h.edges[e].w == g.edges[e].w);
  }
}

TEST_CASE("edge list without header infers n") {
  fs::path p = temp_file("infer.edges", "0 1\n1 4\n");
  Graph g = load_edge_list(p.string());
  CHECK(g.n == 5);
}

TEST_CASE("edge list errors carry line numbers") {
  fs::path bad = temp_file("bad.edges", "0 1\n1 two\n");
  try {
    load_edge_list(bad.string());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }

  fs::path extra = temp_file("extra.edges", "0 1 1.0 9\n");
  CHECK_THROWS_AS(load_edge_list(extra.string()), ValidationError);

  fs::path small = temp_file("small.edges", "#n 2\n0 5\n");
  CHECK_THROWS_AS(load_edge_list(small.string()), ValidationError);

  CHECK_THROWS_AS(load_edge_list("/nonexistent/file.edges"), ValidationError);
}

TEST_CASE("feature and label CSV parsing") {
  fs::path f = temp_file("x.csv", "1.0,2.0\n3.0,4.0\n-1.5,0.25\n");
  Matrix x = load_features_csv(f.string());
  REQUIRE(x.rows() == 3);
  REQUIRE(x.cols() == 2);
  CHECK(x(2, 0) == -1.5);

  fs::path ragged = temp_file("ragged.csv", "1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(load_features_csv(ragged.string()), ValidationError);

  fs::path lab = temp_file("y.csv", "node,label\n0,1\n2,0\n");
  std::vector<int> labels = load_labels_csv(lab.string(), 3);
  REQUIRE(labels.size() == 3);
  CHECK(labels[0] == 1);
  CHECK(labels[1] == -1);  // unlabeled default
  CHECK(labels[2] == 0);

  fs::path nohdr = temp_file("nohdr.csv", "0,1\n");
  CHECK_THROWS_AS(load_labels_csv(nohdr.string(), 2), ValidationError);
}

TEST_CASE("sbm extremes produce forced structures") {
  Graph tri = generate_sbm({3, 3}, 1.0, 0.0, 1);
  CHECK(tri.edges.size() == 6);  // two triangles
  for (const Edge& e : tri.edges) {
    CHECK((e.i < 3) == (e.j < 3));
  }
  REQUIRE(tri.labels.has_value());
  CHECK((*tri.labels)[0] == 0);
  CHECK((*tri.labels)[5] == 1);

  Graph bip = generate_sbm({2, 2}, 0.0, 1.0, 1);
  CHECK(bip.edges.size() == 4);  // complete bipartite
  for (const Edge& e : bip.edges) {
    CHECK((e.i < 2) != (e.j < 2));
  }
}

TEST_CASE("sbm is deterministic and edge counts track the rate") {
  Graph a = generate_sbm({20, 20}, 0.3, 0.1, 42);
  Graph b = generate_sbm({20, 20}, 0.3, 0.1, 42);
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t e = 0; e < a.edges.size(); ++e) {
    CHECK(a.edges[e].i == b.edges[e].i);
    CHECK(a.edges[e].j == b.edges[e].j);
  }

  // single block: |E| ~ Binomial(n(n-1)/2, p); stay within 3 sigma
  Graph c = generate_sbm({40}, 0.3, 0.0, 7);
  double trials = 40 * 39 / 2.0;
  double mean = trials * 0.3;
  double sigma = std::sqrt(trials * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(c.edges.size()) - mean) <= 3 * sigma);
}

TEST_CASE("adjacency, degrees and dense round trip") {
  Graph g = make_graph(3, {{0, 1, 2.0}, {1, 2, 1.0}});
  Matrix a = adjacency(g);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 0) == 0.0);
  Vector d = degrees(g);
  CHECK(d(1) == doctest::Approx(3.0));

  Graph back = graph_from_dense(a);
  REQUIRE(back.edges.size() == 2);
  CHECK(back.edges[0].w == 2.0);

  Matrix asym = a;
  asym(0, 1) += 1e-3;
  CHECK_THROWS_AS(graph_from_dense(asym), ValidationError);
  Matrix neg = a;
  neg(0, 1) = neg(1, 0) = -1.0;
  CHECK_THROWS_AS(graph_from_dense(neg), ValidationError);

  Matrix loop = a;
  loop(0, 0) = 5.0;  // diagonal is dropped
  Graph no_loop = graph_from_dense(loop);
  CHECK(no_loop.edges.size() == 2);
}

TEST_CASE("normalized matrices on K2 and with an isolated node") {
  Graph k2 = make_graph(2, {{0, 1, 1.0}});
  Matrix na = normalized_adjacency(k2, false);
  CHECK(na(0, 1) == doctest::Approx(1.0));
  CHECK(na(0, 0) == 0.0);

  Matrix nl = normalized_laplacian(k2);
  CHECK(nl(0, 0) == doctest::Approx(1.0));
  CHECK(nl(0, 1) == doctest::Approx(-1.0));

  Matrix loops = normalized_adjacency(k2, true);
  CHECK(loops(0, 0) == doctest::Approx(0.5));
  CHECK(loops(0, 1) == doctest::Approx(0.5));

  Graph iso = make_graph(3, {{0, 1, 1.0}});
  Matrix nli = normalized_laplacian(iso);
  CHECK(nli(2, 2) == doctest::Approx(1.0));
  CHECK(nli(2, 0) == 0.0);
  Matrix nai = normalized_adjacency(iso, false);
  CHECK(nai.row(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scope mask matches a breadth-first oracle") {
  Graph g = make_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  for (int hops : {1, 2}) {
    ScopeMask m = scope_mask(g, hops);
    Matrix a = adjacency(g);
    // oracle: BFS distance per pair
    for (int s = 0; s < g.n; ++s) {
      std::vector<int> dist(g.n, -1);
      dist[s] = 0;
      std::vector<int> frontier = {s};
      while (!frontier.empty()) {
        std::vector<int> next;
        for (int u : frontier) {
          for (int v = 0; v < g.n; ++v) {
            if (a(u, v) > 0 && dist[v] < 0) {
              dist[v] = dist[u] + 1;
              next.push_back(v);
            }
          }
        }
        frontier = next;
      }
      for (int v = 0; v < g.n; ++v) {
        bool in = dist[v] > 0 && dist[v] <= hops;
        CHECK(m.s(s, v) == (in ? 1.0 : 0.0));
      }
    }
    CHECK(m.hops == hops);
  }
  CHECK_THROWS_AS(scope_mask(g, 3), ValidationError);
}
