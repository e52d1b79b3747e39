#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steinerlab/geom.hpp"
#include "steinerlab/sequences.hpp"

namespace steinerlab {

enum class Mode { plain, rotated };

std::string to_string(Mode mode);
/// "plain" or "rotated"; throws std::invalid_argument otherwise.
Mode parse_mode(const std::string& text);

/// Raised when a trajectory breaks area conservation or, in rotated mode,
/// symmetry about the y-axis.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An increment outside (0, pi/2) in rotated mode.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Step {
    long m = 0;
    Direction u;
    CompactSet set;
    /// Rotation (radians, counterclockwise) applied after symmetrizing;
    /// zero in plain mode.
    double rotation_applied = 0.0;
    /// Current anchors p_m, one per target q.
    std::vector<Point> anchor_points;
};

/// Which steps are kept: m = 0, every keep_every-th step, and the last
/// dense_tail steps (always including m = M).
struct StoragePolicy {
    long keep_every = 1;
    long dense_tail = 0;

    bool stores(long m, long M) const;
};

struct DynamicsOptions {
    StoragePolicy storage;
    /// Vertex merging tolerance passed to the symmetral.
    double simplify_tol = kGeomEps;
    /// Anchor targets q. Rotated mode expects them on the y-axis.
    std::vector<Point> anchors;
    /// Allowed area drift per step.
    double area_rate = 1e-8;
    /// Rotated mode: symmetry tolerance for stored sets.
    double symmetry_tol = 1e-7;
    /// Called for every step m = 0..M with u_m (e1 for m = 0) and K_m.
    std::function<void(long, Direction, const CompactSet&)> observer;
    /// Test hook: when positive, the set is inflated by 0.1% at this step.
    long area_fault_step = 0;
};

struct Trajectory {
    Mode mode = Mode::plain;
    DirectionSpec spec;
    long M = 0;
    double initial_area = 0.0;
    StoragePolicy storage;
    double simplify_tol = 0.0;
    double area_rate = 0.0;
    double symmetry_tol = 0.0;
    std::vector<Point> anchor_targets;
    std::vector<Step> steps;  // increasing m
    std::vector<std::string> warnings;

    const Step* find(long m) const;
    const Step& at(long m) const;
    const Step& last() const { return steps.back(); }
};

Trajectory iterate_plain(const CompactSet& K, const DirectionSpec& spec, long M,
                         const DynamicsOptions& opts = {});
/// K_m = R_m S_{u_m} ... S_{u_1} K, computed as K_m = S_{e1}(rotate(K_{m-1}, -phi_m))
/// where phi_m is the angle of R_{m-1} u_m reduced mod pi into (-pi/2, pi/2].
/// Throws HypothesisError when |phi_m| is 0 or pi/2.
Trajectory iterate_rotated(const CompactSet& K, const DirectionSpec& spec, long M,
                           const DynamicsOptions& opts = {});
Trajectory iterate(Mode mode, const CompactSet& K, const DirectionSpec& spec, long M,
                   const DynamicsOptions& opts = {});

struct AnchorTracker {
    Point q;
    std::vector<Point> p;  // p_0..p_M
};

/// p_m = cos(alpha_m) p_{m-1} from p_0 = q / gamma_target.
std::vector<AnchorTracker> track_anchors(const DirectionSpec& spec, long M,
                                         const std::vector<Point>& qs);

struct MonitorFlag {
    long m = 0;
    std::size_t delta = 0;
    std::size_t radius = 0;
    std::size_t anchor = 0;
    double increase = 0.0;
    double tolerance = 0.0;
};

/// values[((s * deltas + d) * radii + r) * anchors + a] for stored step s.
struct MonitorTable {
    double h = 0.0;
    std::vector<double> deltas;
    std::vector<double> radii;
    std::vector<std::string> anchors;
    std::vector<long> steps;
    std::vector<double> values;
    std::vector<MonitorFlag> flags;

    double value(std::size_t s, std::size_t d, std::size_t r, std::size_t a) const;
    bool monotone() const { return flags.empty(); }
};

/// lambda((K_m)_delta \ B_{r, p_m}) at every stored step, by raster at h.
/// An increase between consecutive stored steps larger than
/// 6h (perimeter + 2 pi delta) is flagged; the perimeter counts both sides
/// of every chain.
MonitorTable monitor(const Trajectory& traj, const std::vector<double>& deltas,
                     const std::vector<double>& radii, double h);

struct CauchyRow {
    long m = 0;
    long m_prime = 0;
    double hausdorff = 0.0;  // raster, error <= 2h
    double symdiff = 0.0;    // exact
};

/// d_H and symdiff between K_m and K_{m+lag} for every stored pair.
std::vector<CauchyRow> cauchy_diagnostics(const Trajectory& traj, const std::vector<long>& lags,
                                          double h, bool with_symdiff = true);
/// Same for explicit stored pairs.
std::vector<CauchyRow> cauchy_pairs(const Trajectory& traj,
                                    const std::vector<std::pair<long, long>>& pairs, double h,
                                    bool with_symdiff = true);

struct LimitEstimate {
    CompactSet set;
    long m = 0;
    double tail_hausdorff = 0.0;  // max over the stored tail of d_H(K_m, K_M)
    double error_bound = 0.0;     // tail_hausdorff + 2h
    std::vector<CauchyRow> tail;
};

LimitEstimate estimate_limit(const Trajectory& traj, long tail_start, double h);

/// Perimeter with chains counted on both sides.
double boundary_length(const CompactSet& set);

/// step_<m>.json for every stored step plus manifest.json.
void write_checkpoints(const Trajectory& traj, const std::string& dir);
/// Header m,delta,r,anchor,value.
std::string monitor_csv(const MonitorTable& table);
void write_monitor_csv(const MonitorTable& table, const std::string& path);
/// Header m,m_prime,hausdorff,symdiff.
void write_cauchy_csv(const std::vector<CauchyRow>& rows, const std::string& path);

}  // namespace steinerlab
