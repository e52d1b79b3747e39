#pragma once

#include <utility>
#include <vector>

#include "steinerlab/geom.hpp"

namespace steinerlab {

/// Total 1-d measure m(t) of the line through t * u_perp parallel to u,
/// as a function of the coordinate t along u_perp (t = p . u.normal()).
///
/// m is linear on each open slab between consecutive breakpoints. At a
/// breakpoint it may jump (vertical edges) and the closed cross-section may
/// carry more measure than either one-sided limit (chains parallel to u,
/// regions touching the line from both sides).
struct ChordFunction {
    Direction u;
    std::vector<double> breakpoints;
    std::vector<double> limit_below;  ///< m(t_i-), zero at the first breakpoint
    std::vector<double> limit_above;  ///< m(t_i+), zero at the last breakpoint
    std::vector<double> section;      ///< measure of the closed cross-section at t_i
    /// t-intervals (possibly degenerate) where the line meets the set only in
    /// a null set, outside the closure of {m > 0}.
    std::vector<std::pair<double, double>> support_marks;
    /// Coordinates this close to a breakpoint are evaluated at it.
    double merge_eps = 1e-12;

    /// m on open slabs; at a breakpoint, the closed cross-section measure.
    double operator()(double t) const;
    double integral() const;
};

struct SymmetrizeOptions {
    /// Breakpoints closer than this (absolute, frame units) are merged.
    double breakpoint_merge = 1e-12;
    /// Maximum boundary displacement allowed when merging nearly collinear
    /// vertices of the output. The chord profile is rescaled afterwards so
    /// the area is preserved exactly. Zero keeps every non-collinear vertex.
    double simplify_tol = 0.0;
};

ChordFunction chord_function(const CompactSet& set, Direction u,
                             const SymmetrizeOptions& opts = {});

/// The Steiner symmetral of a compact set along u: every line parallel to u
/// meets the result in a closed segment centered on u_perp with the same
/// 1-d measure as its intersection with the input (a point when the measure
/// is zero but the line meets the set).
CompactSet steiner_symmetral(const CompactSet& set, Direction u,
                             const SymmetrizeOptions& opts = {});

/// Reflection symmetry across u_perp: symdiff area and chain deviation both
/// within tol.
bool is_symmetric(const CompactSet& set, Direction u, double tol);

}  // namespace steinerlab
