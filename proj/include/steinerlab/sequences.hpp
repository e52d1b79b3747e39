#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "steinerlab/geom.hpp"

namespace steinerlab {

/// u_m at angle m * alpha.
struct Kronecker {
    double alpha = 1.0;
};

/// u_m at angle beta_m = sum_{k <= m} theta (k + offset)^(-sigma). A positive
/// offset drops the first increments.
struct PowerLaw {
    double theta = 0.5;
    double sigma = 0.75;
    int offset = 0;
};

enum class Schedule { round_robin, indices, seeded_random };

/// Directions drawn from a finite list.
struct FiniteSet {
    std::vector<Direction> directions;
    Schedule schedule = Schedule::round_robin;
    std::vector<int> indices;  // for Schedule::indices, cycled
    std::uint64_t seed = 0;    // for Schedule::seeded_random
};

/// Independent uniform directions, random-access by (seed, m).
struct IID {
    std::uint64_t seed = 0;
};

/// A fixed list; u_m is the m-th entry.
struct Explicit {
    std::vector<Direction> directions;
};

using DirectionSpec = std::variant<Kronecker, PowerLaw, FiniteSet, IID, Explicit>;

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws SpecError on parameters outside their families (PowerLaw
/// theta >= pi/2 or sigma outside (1/2, 1), empty lists, bad indices).
void check_spec(const DirectionSpec& spec);

/// u_m for m >= 1. Deterministic; PowerLaw costs O(m).
Direction direction(const DirectionSpec& spec, long m);
/// u_1..u_M in one pass.
std::vector<Direction> directions(const DirectionSpec& spec, long M);

/// Angle in [0, pi/2] between the lines spanned by u and v.
double line_angle(Direction u, Direction v);

struct AngleLedger {
    std::vector<double> alphas;          // alpha_1..alpha_M, line angles with u_0 = e1
    std::vector<double> betas;           // partial sums of alphas
    std::vector<double> gamma_partials;  // partial products of cos(alpha)
    /// PowerLaw only: bound on gamma_M - gamma from the tail of sum alpha^2.
    std::optional<double> gamma_tail_bound;
    /// Best estimate of the infinite product (gamma_M when no tail model).
    double gamma_target = 1.0;
    /// Sum of alpha^2 over the ledger, and the analytic tail beyond M.
    double sum_alpha_sq = 0.0;
    std::optional<double> tail_alpha_sq;

    double gamma() const { return gamma_partials.empty() ? 1.0 : gamma_partials.back(); }
};

AngleLedger ledger(const DirectionSpec& spec, long M);

/// Whether the spec family has square-summable increments (the hypothesis
/// of the rotated scheme).
bool square_summable(const DirectionSpec& spec);

/// Extreme discrepancy on the circle of the angles of u_1..u_N: the sup over
/// arcs of |fraction of points - length / 2 pi|.
double discrepancy(const DirectionSpec& spec, long N);
double discrepancy_of_angles(std::vector<double> angles);
/// O(N^3) check over closed and open arcs with sample endpoints.
double discrepancy_brute_force(const std::vector<double>& angles);

/// Parses "kronecker:ALPHA", "powerlaw:THETA,SIGMA[,OFFSET]", "finite:PATH",
/// "iid:SEED" and "explicit:PATH".
DirectionSpec parse_spec(const std::string& text);
/// Key-value form: kind = kronecker | powerlaw | finite | iid | explicit, plus
/// alpha, theta, sigma, offset, seed, angles (comma list), schedule
/// (round_robin | random | indices), indices (comma list), path.
DirectionSpec spec_from_keys(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> spec_to_keys(const DirectionSpec& spec);
/// One-line description, e.g. "powerlaw:0.5,0.75".
std::string describe(const DirectionSpec& spec);

/// One angle (radians) per line; blank lines and '#' comments ignored.
std::vector<Direction> load_angle_file(const std::string& path);
/// Angle lines plus an optional "schedule round_robin | random SEED |
/// indices I..." line.
FiniteSet load_finite_file(const std::string& path);

}  // namespace steinerlab
