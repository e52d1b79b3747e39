#pragma once

#include "steinerlab/geom.hpp"

namespace steinerlab {

// Regularized polygon booleans. Chains are null sets and are dropped from
// all results; slivers narrower than kGeomEps are discarded.

CompactSet intersect(const CompactSet& a, const CompactSet& b);
CompactSet difference(const CompactSet& a, const CompactSet& b);
CompactSet unite(const CompactSet& a, const CompactSet& b);

/// area(a \ b) + area(b \ a). This and difference_area integrate sections
/// exactly by a trapezoid sweep instead of building the overlay.
double symdiff_area(const CompactSet& a, const CompactSet& b);
/// area(a \ b), without building the result set.
double difference_area(const CompactSet& a, const CompactSet& b);

/// Polygonal outer parallel set K + B_delta with every circular arc replaced
/// by an inscribed polygon of points_per_circle vertices per full turn; the
/// result lies inside the true parallel set, within delta (1 - cos(pi / n)).
CompactSet outer_parallel_set(const CompactSet& set, double delta, int points_per_circle = 128);

/// True when every point of the segment lies within tol of the set.
bool segment_covered(const Segment& seg, const CompactSet& set, double tol = kGeomEps);

/// b subset of a, up to tolerance: area(b \ a) <= kGeomEps * max(1, area(b)) and
/// every chain point of b within kGeomEps of a.
bool contains(const CompactSet& a, const CompactSet& b);

}  // namespace steinerlab
