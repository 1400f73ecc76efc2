#pragma once

#include "spectraforge/spectral.hpp"

#include <vector>

namespace spectraforge {

// Band-wise comparison of two spectrum curves. Bins whose interval includes
// frequency 1 in the interior are excluded; a bin belongs to the low band
// when its upper edge is <= 1 and to the high band when its lower edge is
// >= 1. Diffs are |amp1 - amp2| per surviving bin.
struct GameReport {
  std::vector<double> low_band_diffs;
  std::vector<double> high_band_diffs;
  bool strict_pass = false;
  double fraction_pass = 0.0;  // fraction of (high, low) pairs with high > low
  double margin = 0.0;         // min high diff - max low diff
};

// Both curves must share identical band edges. Bins empty (zero count) in
// either curve are skipped. If after exclusions both bands are empty this is
// a ValidationError; if exactly one band is empty the report degrades to
// strict_pass = false, fraction_pass = 0, margin = 0.
GameReport game_margin(const SpectrumCurve& c1, const SpectrumCurve& c2);

}  // namespace spectraforge
