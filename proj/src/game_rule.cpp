#include "spectraforge/game_rule.hpp"

#include "spectraforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spectraforge {

GameReport game_margin(const SpectrumCurve& c1, const SpectrumCurve& c2) {
  if (c1.band_edges.size() != c2.band_edges.size() ||
      (c1.band_edges - c2.band_edges).cwiseAbs().maxCoeff() != 0.0) {
    throw ValidationError("spectrum curves use different binning");
  }
  GameReport rep;
  int bins = static_cast<int>(c1.amplitudes.size());
  for (int k = 0; k < bins; ++k) {
    if (c1.counts(k) == 0 || c2.counts(k) == 0) continue;
    double lo = c1.band_edges(k), hi = c1.band_edges(k + 1);
    double diff = std::abs(c1.amplitudes(k) - c2.amplitudes(k));
    if (hi <= 1.0) {
      rep.low_band_diffs.push_back(diff);
    } else if (lo >= 1.0) {
      rep.high_band_diffs.push_back(diff);
    }
  }
  if (rep.low_band_diffs.empty() && rep.high_band_diffs.empty()) {
    throw ValidationError("no populated bins in either frequency band");
  }
  if (rep.low_band_diffs.empty() || rep.high_band_diffs.empty()) {
    return rep;  // degraded verdict: strict false, fraction 0, margin 0
  }
  double max_low =
      *std::max_element(rep.low_band_diffs.begin(), rep.low_band_diffs.end());
  double min_high = *std::min_element(rep.high_band_diffs.begin(),
                                      rep.high_band_diffs.end());
  rep.margin = min_high - max_low;
  rep.strict_pass = rep.margin > 0;
  int pass = 0;
  for (double h : rep.high_band_diffs) {
    for (double l : rep.low_band_diffs) {
      if (h > l) ++pass;
    }
  }
  rep.fraction_pass =
      static_cast<double>(pass) /
      (rep.high_band_diffs.size() * rep.low_band_diffs.size());
  return rep;
}

}  // namespace spectraforge
