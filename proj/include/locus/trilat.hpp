#pragma once

#include <vector>

#include "locus/core.hpp"
#include "locus/pathloss.hpp"

namespace locus {

// Solves for the position whose distances to `anchors` best match
// `distances_m`, by linearizing the circle equations against the first
// anchor and solving the resulting least-squares system. Needs >= 3
// anchors (too_few_anchors), one distance per anchor
// (insufficient_matches), positive finite distances
// (non_positive_distance) and non-collinear anchors (degenerate_geometry).
Position trilaterate(const std::vector<Position>& anchors,
                     const std::vector<double>& distances_m);

// Full range-based pipeline for one scan: convert each heard reading to a
// distance through that anchor's path-loss model, then trilaterate against
// the anchor positions. Readings from anchors absent from `anchors` throw
// unknown_anchor; fewer than 3 heard anchors throws too_few_anchors.
Position locate_trilateration(const AnchorSet& anchors,
                              const ModelSet& models,
                              const RssiScan& scan);

} // namespace locus
