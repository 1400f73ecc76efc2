#include "doctest.h"

#include "spectraforge/augment.hpp"
#include "spectraforge/errors.hpp"
#include "spectraforge/game_rule.hpp"
#include "spectraforge/graph.hpp"

#include <vector>

using namespace spectraforge;

namespace {

SpectrumCurve make_curve(int bins, const std::vector<double>& amps,
                         const std::vector<int>& counts) {
  SpectrumCurve c;
  c.band_edges = Vector::LinSpaced(bins + 1, 0.0, 2.0);
  c.amplitudes = Vector::Zero(bins);
  c.counts = Eigen::VectorXi::Zero(bins);
  for (int b = 0; b < bins; ++b) {
    c.amplitudes(b) = amps[b];
    c.counts(b) = counts[b];
  }
  return c;
}

}  // namespace

TEST_CASE("band diffs and margin follow the hand-binned oracle") {
  SpectrumCurve c1 = make_curve(4, {1.0, 0.8, 0.5, 0.2}, {1, 1, 1, 1});
  SpectrumCurve c2 = make_curve(4, {0.9, 0.75, 0.8, 0.6}, {1, 1, 1, 1});
  GameReport r = game_margin(c1, c2);
  REQUIRE(r.low_band_diffs.size() == 2);
  REQUIRE(r.high_band_diffs.size() == 2);
  CHECK(r.low_band_diffs[0] == doctest::Approx(0.1));
  CHECK(r.low_band_diffs[1] == doctest::Approx(0.05));
  CHECK(r.high_band_diffs[0] == doctest::Approx(0.3));
  CHECK(r.high_band_diffs[1] == doctest::Approx(0.4));
  CHECK(r.strict_pass);
  CHECK(r.fraction_pass == doctest::Approx(1.0));
  CHECK(r.margin == doctest::Approx(0.2));
}

TEST_CASE("ties count as failures") {
  SpectrumCurve c1 = make_curve(4, {0.3, 0.1, 0.3, 0.4}, {1, 1, 1, 1});
  SpectrumCurve c2 = make_curve(4, {0.0, 0.0, 0.0, 0.0}, {1, 1, 1, 1});
  GameReport r = game_margin(c1, c2);
  CHECK_FALSE(r.strict_pass);
  CHECK(r.margin == doctest::Approx(0.0));
  CHECK(r.fraction_pass == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("bins straddling the band split are excluded") {
  // 5 bins on [0, 2]: the middle bin (0.8, 1.2) contains frequency 1 inside
  SpectrumCurve c1 = make_curve(5, {0.1, 0.1, 9.0, 0.5, 0.5}, {1, 1, 1, 1, 1});
  SpectrumCurve c2 = make_curve(5, {0.0, 0.0, 0.0, 0.0, 0.0}, {1, 1, 1, 1, 1});
  GameReport r = game_margin(c1, c2);
  CHECK(r.low_band_diffs.size() == 2);
  CHECK(r.high_band_diffs.size() == 2);
  CHECK(r.strict_pass);  // the 9.0 amplitude sat in the excluded bin
}

TEST_CASE("bins empty in either curve are skipped") {
  SpectrumCurve c1 = make_curve(4, {1.0, 0.8, 0.5, 0.2}, {1, 0, 1, 1});
  SpectrumCurve c2 = make_curve(4, {0.9, 0.75, 0.8, 0.6}, {1, 1, 1, 0});
  GameReport r = game_margin(c1, c2);
  CHECK(r.low_band_diffs.size() == 1);
  CHECK(r.high_band_diffs.size() == 1);
}

TEST_CASE("single straddling bin leaves both bands empty") {
  SpectrumCurve c1 = make_curve(1, {1.0}, {2});
  SpectrumCurve c2 = make_curve(1, {0.5}, {2});
  CHECK_THROWS_AS(game_margin(c1, c2), ValidationError);
}

TEST_CASE("one empty band degrades the report") {
  SpectrumCurve c1 = make_curve(4, {1.0, 0.8, 0.0, 0.0}, {1, 1, 0, 0});
  SpectrumCurve c2 = make_curve(4, {0.9, 0.75, 0.0, 0.0}, {1, 1, 0, 0});
  GameReport r = game_margin(c1, c2);
  CHECK(r.low_band_diffs.size() == 2);
  CHECK(r.high_band_diffs.empty());
  CHECK_FALSE(r.strict_pass);
  CHECK(r.fraction_pass == 0.0);
  CHECK(r.margin == 0.0);
}

TEST_CASE("mismatched binning is rejected") {
  SpectrumCurve c1 = make_curve(4, {1, 1, 1, 1}, {1, 1, 1, 1});
  SpectrumCurve c2 = make_curve(5, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1});
  CHECK_THROWS_AS(game_margin(c1, c2), ValidationError);
}

TEST_CASE("the comparison is symmetric and shift invariant") {
  SpectrumCurve c1 = make_curve(4, {1.0, 0.8, 0.5, 0.2}, {1, 1, 1, 1});
  SpectrumCurve c2 = make_curve(4, {0.9, 0.75, 0.8, 0.6}, {1, 1, 1, 1});
  GameReport fwd = game_margin(c1, c2);
  GameReport rev = game_margin(c2, c1);
  CHECK(fwd.margin == doctest::Approx(rev.margin));
  CHECK(fwd.fraction_pass == doctest::Approx(rev.fraction_pass));
  for (size_t i = 0; i < fwd.low_band_diffs.size(); ++i) {
    CHECK(fwd.low_band_diffs[i] == doctest::Approx(rev.low_band_diffs[i]));
  }

  SpectrumCurve s1 = c1, s2 = c2;
  s1.amplitudes.array() += 0.37;
  s2.amplitudes.array() += 0.37;
  GameReport shifted = game_margin(s1, s2);
  CHECK(shifted.margin == doctest::Approx(fwd.margin));
  CHECK(shifted.strict_pass == fwd.strict_pass);
}

TEST_CASE("low-pass filtering moves the high band most") {
  Graph g = generate_sbm({50, 50}, 0.3, 0.05, 1);
  SpectralDecomposition d = decompose(normalized_laplacian(g),
                                      MatrixSource::laplacian);
  FilterSpec spec;
  spec.band = Band::low;
  spec.keep_rate = 0.2;
  Matrix v = eigenspace_filter_view(d, spec);
  Vector base_amp = Vector::Ones(g.n) - d.lambdas;
  Vector view_amp(g.n);
  for (int i = 0; i < g.n; ++i) {
    view_amp(i) = d.u.col(i).dot(v * d.u.col(i));  // 1 when kept, else 0
  }
  GameReport r = game_margin(spectrum_curve(d, base_amp),
                             spectrum_curve(d, view_amp));
  CHECK(r.fraction_pass >= 0.9);
}
