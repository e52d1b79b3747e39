#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinerlab/dynamics.hpp"
#include "steinerlab/geom.hpp"
#include "steinerlab/sequences.hpp"

namespace steinerlab {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // how value compares to threshold when passing, e.g. "<="
};

struct ExperimentReport {
    std::string id;
    std::string title;
    nlohmann::json parameters = nlohmann::json::object();
    Verdict verdict = Verdict::inconclusive;
    std::vector<Check> checks;
    nlohmann::json certificates = nlohmann::json::object();
    std::vector<std::string> warnings;
    std::vector<std::string> notes;

    const Check* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

/// Settings shared by all experiments.
struct ExperimentOptions {
    /// Output directory; nothing is written when empty.
    std::string out_dir;
    /// Raster resolution; zero selects diam(K_0) / 512.
    double h = 0.0;
    /// Relative slack on certificate inequalities.
    double tol = 1e-3;
    /// Forwarded to the dynamics test hook.
    long area_fault_step = 0;
};

// --- inputs -------------------------------------------------------------

/// Vertical unit segment through the origin together with the centered disk
/// B_r (a 256-gon).
CompactSet segment_and_ball(double r);
/// Convex hull of the same two sets.
CompactSet segment_ball_hull(double r);
/// L-shaped polygon plus a two-segment chain.
CompactSet nonconvex_example();

/// Named inputs for the command line: square, ball, segment, segment_ball,
/// segment_ball_hull, nonconvex, rotated_square, triangle.
CompactSet builtin_set(const std::string& name);
std::vector<std::string> builtin_names();

// --- experiments --------------------------------------------------------

/// Thrown when the inputs violate an experiment's hypothesis; the
/// experiment refuses to run.
class Refused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NonconvergenceParams {
    DirectionSpec spec = PowerLaw{0.5, 0.75, 0};
    double r = 0.05;
    long M = 5000;
    Mode mode = Mode::plain;
};

/// The spinning segment: segment length gamma_m at every step, diameter above
/// gamma_M, and Hausdorff distances between steps whose directions differ by
/// a quarter turn bounded below (plain) or vanishing in the tail (rotated).
ExperimentReport ex_nonconvergence(const NonconvergenceParams& p, const ExperimentOptions& o);

struct RotatedCertificateParams {
    std::optional<CompactSet> K;  // default segment_and_ball(r)
    DirectionSpec spec = PowerLaw{0.5, 0.75, 0};
    double r = 0.05;
    long M = 5000;
    std::vector<double> deltas{0.05, 0.2};
    std::vector<double> radii{0.05, 0.3};
    std::vector<Point> anchors{{0.0, 0.0}, {0.0, 0.25}};
};

/// Rotated scheme: monotone monitor rows and a Cauchy tail.
ExperimentReport ex_rotated_convergence(const RotatedCertificateParams& p, const ExperimentOptions& o);

struct NotEllipseParams {
    std::optional<CompactSet> K;  // default segment_ball_hull(r)
    DirectionSpec spec = PowerLaw{0.5, 0.75, 0};
    double r = 0.05;
    long M = 2000;
    long drop_first = 0;  // PowerLaw only: added to the offset
};

/// Area certificate that the rotated limit is not an ellipse.
ExperimentReport ex_limit_not_ellipse(const NotEllipseParams& p, const ExperimentOptions& o);

struct NonconvexParams {
    std::optional<CompactSet> K;  // default segment_and_ball(r)
    DirectionSpec spec = PowerLaw{0.5, 0.75, 0};
    double r = 0.05;
    long M = 2000;
};

/// Hull-area certificate that the rotated limit is not convex.
ExperimentReport ex_limit_nonconvex(const NonconvexParams& p, const ExperimentOptions& o);

struct KroneckerParams {
    std::optional<CompactSet> K;  // default unit square
    double alpha = 1.0;
    long M = 2000;
};

/// Convergence to the equimeasurable centered ball.
ExperimentReport ex_kronecker(const KroneckerParams& p, const ExperimentOptions& o);

struct UniformDistributionParams {
    double theta = 0.5;
    double sigma = 0.75;
    long M = 5000;
    double r = 0.05;
    std::vector<long> discrepancy_n{100, 1000, 10000, 100000};
};

/// Discrepancy slope of the PowerLaw directions plus the non-Cauchy floor.
ExperimentReport ex_ud_counterexample(const UniformDistributionParams& p, const ExperimentOptions& o);

struct KlainParams {
    std::optional<CompactSet> K;  // default nonconvex_example()
    FiniteSet F;                  // default {0, pi/4, pi/2}, round robin
    long M = 600;
};

/// Finite direction sets: Cauchy tail and symmetry of the limit.
ExperimentReport ex_klain(const KlainParams& p, const ExperimentOptions& o);

/// Least-squares slope of log D(N) against log N.
double discrepancy_slope(const DirectionSpec& spec, const std::vector<long>& ns,
                         std::vector<double>* values = nullptr);

/// Overrides accepted by reproduce().
struct ReproduceOverrides {
    std::optional<long> M;
    std::optional<DirectionSpec> spec;
    std::optional<CompactSet> K;
};

/// ex2.1, ex2.2, ex2.3, thm2.1, thm5.1, sec5-ud, thm6.1.
std::vector<std::string> experiment_ids();
/// Runs one experiment by id; throws std::invalid_argument for unknown ids.
ExperimentReport reproduce(const std::string& id, const ReproduceOverrides& ov,
                           const ExperimentOptions& o);

}  // namespace steinerlab
