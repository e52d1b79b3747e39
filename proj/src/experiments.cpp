#include "steinerlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "steinerlab/clip.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/raster.hpp"
#include "steinerlab/symmetrize.hpp"

namespace steinerlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

const Check* ExperimentReport::find(const std::string& name) const {
    for (const Check& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

json ExperimentReport::to_json() const {
    json cs = json::array();
    for (const Check& c : checks) {
        cs.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"threshold", c.threshold}});
    }
    return {{"id", id},         {"title", title},       {"parameters", parameters},
            {"verdict", to_string(verdict)}, {"checks", cs}, {"certificates", certificates},
            {"warnings", warnings}, {"notes", notes},   {"files", {{"metrics", "metrics.csv"}}}};
}

// --- inputs -------------------------------------------------------------

CompactSet segment_and_ball(double r) {
    return merge_disjoint(polygon_ball({0, 0}, r, 256), segment_set({0, -0.5}, {0, 0.5}));
}

CompactSet segment_ball_hull(double r) {
    std::vector<Point> pts = all_vertices(polygon_ball({0, 0}, r, 256));
    pts.push_back({0, -0.5});
    pts.push_back({0, 0.5});
    return make_polygon_set(convex_hull(pts));
}

CompactSet nonconvex_example() {
    CompactSet s = make_polygon_set({{0, 0}, {1, 0}, {1, 0.4}, {0.4, 0.4}, {0.4, 1}, {0, 1}});
    Chain c;
    c.segments = {{{1.2, 0.1}, {1.6, 0.5}}, {{1.6, 0.5}, {1.3, 0.9}}};
    s.chains.push_back(c);
    return s;
}

CompactSet builtin_set(const std::string& name) {
    if (name == "square") return make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    if (name == "ball") return polygon_ball({0, 0}, 1.0, 256);
    if (name == "segment") return segment_set({0, -0.5}, {0, 0.5});
    if (name == "segment_ball") return segment_and_ball(0.05);
    if (name == "segment_ball_hull") return segment_ball_hull(0.05);
    if (name == "nonconvex") return nonconvex_example();
    if (name == "rotated_square") {
        return rotate(make_polygon_set({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}), 0.3);
    }
    if (name == "triangle") return make_polygon_set({{0, 0}, {1, 0}, {0, 1}});
    std::string list;
    for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown builtin set '" + name + "' (valid: " + list + ")");
}

std::vector<std::string> builtin_names() {
    return {"square", "ball", "segment", "segment_ball", "segment_ball_hull", "nonconvex", "rotated_square", "triangle"};
}

// --- shared machinery ---------------------------------------------------

namespace {

struct Metrics {
    std::vector<std::string> rows;

    void add(const std::string& metric, long m, double value) { add(metric, m, -1, value); }
    void add(const std::string& metric, long m, long m_prime, double value) {
        rows.push_back(metric + "," + std::to_string(m) + "," + (m_prime >= 0 ? std::to_string(m_prime) : "") +
                       "," + format_real(value));
    }
};

struct Run {
    ExperimentReport rep;
    Metrics metrics;
    const Trajectory* traj = nullptr;
    std::vector<std::pair<std::string, std::string>> extra_files;  // name, content

    void check(const std::string& name, bool passed, double value, const std::string& relation,
               double threshold) {
        rep.checks.push_back(Check{name, passed, value, threshold, relation});
    }
    bool all_passed() const {
        return std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.passed; });
    }
};

double resolve_h(const ExperimentOptions& o, const CompactSet& K) {
    if (o.h > 0) return o.h;
    const double d = diameter(K);
    if (!(d > 0)) throw Refused("input set has zero diameter");
    return d / 512.0;
}

json spec_json(const DirectionSpec& spec) {
    return {{"text", describe(spec)}, {"keys", spec_to_keys(spec)}};
}

json options_json(const ExperimentOptions& o, double h) {
    return {{"h", h}, {"tol", o.tol}, {"area_fault_step", o.area_fault_step}};
}

DynamicsOptions dynamics_options(const ExperimentOptions& o, long M, long snapshots, long dense_tail) {
    DynamicsOptions d;
    d.storage.keep_every = std::max(1L, M / std::max(1L, snapshots));
    d.storage.dense_tail = dense_tail;
    d.area_fault_step = o.area_fault_step;
    return d;
}

void write_outputs(const Run& run, const ExperimentOptions& o) {
    if (o.out_dir.empty()) return;
    const fs::path dir(o.out_dir);
    fs::create_directories(dir / "snapshots");
    std::string csv = "metric,m,m_prime,value\n";
    for (const auto& r : run.metrics.rows) csv += r + "\n";
    write_text(csv, (dir / "metrics.csv").string());
    for (const auto& [name, content] : run.extra_files) write_text(content, (dir / name).string());
    if (run.traj && !run.traj->steps.empty()) {
        const Trajectory& t = *run.traj;
        std::set<long> chosen;
        for (int k = 0; k <= 4; ++k) {
            const long target = t.M * k / 4;
            long best = 0;
            for (const Step& s : t.steps) {
                if (s.m <= target) best = s.m;
            }
            chosen.insert(best);
        }
        for (long m : chosen) {
            const CompactSet& s = t.at(m).set;
            const std::string base = "step_" + std::to_string(m);
            save_set(s, (dir / "snapshots" / (base + ".json")).string());
            save_svg(s, (dir / "snapshots" / (base + ".svg")).string());
        }
    }
    json j = run.rep.to_json();
    for (const auto& [name, content] : run.extra_files) j["files"][fs::path(name).stem().string()] = name;
    write_json(j, (dir / "report.json").string());
}

// Runs body; an invariant violation turns the verdict into fail.
ExperimentReport guarded(Run& run, const ExperimentOptions& o, const std::function<void()>& body) {
    try {
        body();
    } catch (const InvariantViolation& e) {
        run.check("invariants", false, 0.0, "holds", 0.0);
        run.rep.notes.push_back(std::string("invariant violated: ") + e.what());
        run.rep.verdict = Verdict::fail;
    } catch (const HypothesisError& e) {
        throw Refused(e.what());
    }
    write_outputs(run, o);
    return run.rep;
}

double beta_at(const AngleLedger& L, long m) {
    return m == 0 ? 0.0 : L.betas[static_cast<std::size_t>(m - 1)];
}

double gamma_at(const AngleLedger& L, long m) {
    return m == 0 ? 1.0 : L.gamma_partials[static_cast<std::size_t>(m - 1)];
}

// Stored pairs (m, m') with m >= from and m the latest stored step whose
// direction angle trails beta_{m'} by at least a quarter turn.
std::vector<std::pair<long, long>> quarter_turn_pairs(const Trajectory& t, const AngleLedger& L, long from) {
    std::vector<long> ms;
    for (const Step& s : t.steps) {
        if (s.m >= from) ms.push_back(s.m);
    }
    std::vector<std::pair<long, long>> pairs;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        for (std::size_t i = j; i-- > 0;) {
            if (beta_at(L, ms[j]) - beta_at(L, ms[i]) >= kPi / 2) {
                pairs.emplace_back(ms[i], ms[j]);
                break;
            }
        }
    }
    return pairs;
}

// Endpoints of the longest chord between chain points.
std::pair<Point, Point> chain_extent(const CompactSet& s) {
    std::vector<Point> pts;
    for (const Chain& c : s.chains) {
        for (const Segment& seg : c.segments) {
            pts.push_back(seg.a);
            pts.push_back(seg.b);
        }
    }
    if (pts.empty()) return {{}, {}};
    std::pair<Point, Point> best{pts[0], pts[0]};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (dist(pts[i], pts[j]) > dist(best.first, best.second)) best = {pts[i], pts[j]};
        }
    }
    return best;
}

struct NonconvergenceOutcome {
    Trajectory traj;
};

// Shared by the spinning-segment and the uniform-distribution experiments.
void nonconvergence_core(const NonconvergenceParams& p, const ExperimentOptions& o, Run& run,
                         NonconvergenceOutcome& out, const std::string& prefix) {
    if (!square_summable(p.spec)) {
        throw Refused("the increments of " + describe(p.spec) + " are not square summable; gamma = 0");
    }
    if (!(p.r > 0)) throw Refused("r must be positive");
    const AngleLedger L = ledger(p.spec, p.M);
    const double gamma = L.gamma_target;
    const CompactSet K = segment_and_ball(p.r);
    const double disc = kPi * gamma * gamma / 4;
    if (!(area(K) < disc)) {
        throw Refused("area(K) = " + format_real(area(K)) + " is not below the disc of diameter gamma (" +
                      format_real(disc) + ")");
    }
    const double h = resolve_h(o, K);
    run.rep.parameters["r"] = p.r;
    run.rep.parameters["M"] = p.M;
    run.rep.parameters["mode"] = to_string(p.mode);
    run.rep.parameters["spec"] = spec_json(p.spec);
    run.rep.parameters["options"] = options_json(o, h);

    DynamicsOptions d = dynamics_options(o, p.M, 200, std::max(1L, p.M / 20));
    double worst_length = 0.0, worst_orientation = 0.0, min_diameter_margin = INFINITY;
    const double gamma_M = L.gamma();
    d.observer = [&](long m, Direction u, const CompactSet& s) {
        const auto [a, b] = chain_extent(s);
        const double len = dist(a, b);
        worst_length = std::max(worst_length, std::abs(len - gamma_at(L, m)));
        if (m > 0) {
            const double off = p.mode == Mode::plain ? std::abs(dot(b - a, u.unit()))
                                                     : std::max(std::abs(a.x), std::abs(b.x));
            worst_orientation = std::max(worst_orientation, off);
        }
        min_diameter_margin = std::min(min_diameter_margin, diameter(s) - gamma_M);
    };
    out.traj = iterate(p.mode, K, p.spec, p.M, d);
    const Trajectory& t = out.traj;
    run.traj = &t;
    run.rep.warnings.insert(run.rep.warnings.end(), t.warnings.begin(), t.warnings.end());

    for (const Step& s : t.steps) {
        run.metrics.add(prefix + "segment_length", s.m, dist(chain_extent(s.set).first, chain_extent(s.set).second));
        run.metrics.add(prefix + "gamma_m", s.m, gamma_at(L, s.m));
        run.metrics.add(prefix + "beta_m", s.m, beta_at(L, s.m));
    }
    run.check(prefix + "segment_length_matches_gamma_m", worst_length <= 1e-9, worst_length, "<=", 1e-9);
    run.check(prefix + "segment_orientation", worst_orientation <= 1e-9, worst_orientation, "<=", 1e-9);
    run.check(prefix + "diameter_exceeds_gamma_M", min_diameter_margin > -1e-9, min_diameter_margin, ">", -1e-9);

    const auto pairs = quarter_turn_pairs(t, L, p.M / 10);
    const auto rows = cauchy_pairs(t, pairs, h);
    double floor = INFINITY, tail_max = 0.0, max_gap = 0.0;
    for (const CauchyRow& r : rows) {
        run.metrics.add(prefix + "quarter_turn_hausdorff", r.m, r.m_prime, r.hausdorff);
        floor = std::min(floor, r.hausdorff);
        if (r.m >= p.M - p.M / 10) tail_max = std::max(tail_max, r.hausdorff);
        max_gap = std::max(max_gap, beta_at(L, r.m_prime) - beta_at(L, r.m));
    }
    const double raster_tol = 2 * h;
    run.rep.certificates[prefix + "gamma_M"] = gamma_M;
    run.rep.certificates[prefix + "gamma_target"] = gamma;
    run.rep.certificates[prefix + "raster_tolerance"] = raster_tol;
    run.rep.certificates[prefix + "quarter_turn_pairs"] = rows.size();
    run.rep.certificates[prefix + "max_beta_gap"] = max_gap;
    // Two segments of length gamma at a right angle, each carrying B_r.
    run.rep.certificates[prefix + "expected_floor"] = gamma / 2 - p.r;
    if (rows.empty()) {
        run.check(prefix + "quarter_turn_pairs_exist", false, 0.0, ">", 0.0);
        return;
    }
    if (p.mode == Mode::plain) {
        run.rep.certificates[prefix + "hausdorff_floor"] = floor;
        run.check(prefix + "hausdorff_floor", floor > 10 * raster_tol, floor, ">", 10 * raster_tol);
        // Null sets are invisible to the measure distance.
        run.rep.certificates[prefix + "final_pair_symdiff"] =
            symdiff_area(t.at(rows.back().m).set, t.at(rows.back().m_prime).set);
    } else {
        const double bound = 0.01 * diameter(K) + raster_tol;
        run.rep.certificates[prefix + "tail_quarter_turn_hausdorff"] = tail_max;
        run.check(prefix + "tail_quarter_turn_hausdorff", tail_max < bound, tail_max, "<", bound);
    }
}

std::optional<std::pair<long, long>> rational_multiple_of_pi(double alpha) {
    const double x = alpha / kPi;
    for (long q = 1; q <= 1000; ++q) {
        const double pq = std::round(x * static_cast<double>(q));
        if (std::abs(x * static_cast<double>(q) - pq) <= 1e-9 * static_cast<double>(q)) {
            return std::make_pair(static_cast<long>(pq), q);
        }
    }
    return std::nullopt;
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

DirectionSpec with_drop(const DirectionSpec& spec, long drop_first) {
    if (drop_first == 0) return spec;
    if (drop_first < 0) throw Refused("drop_first must be nonnegative");
    if (const auto* pl = std::get_if<PowerLaw>(&spec)) {
        PowerLaw q = *pl;
        q.offset += static_cast<int>(drop_first);
        return q;
    }
    throw Refused("drop_first applies to powerlaw specs only");
}

}  // namespace

// --- experiments --------------------------------------------------------

ExperimentReport ex_nonconvergence(const NonconvergenceParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "ex2.1";
    run.rep.title = "Spinning segment: plain iterated symmetrals do not converge";
    NonconvergenceOutcome out;
    return guarded(run, o, [&] {
        nonconvergence_core(p, o, run, out, "");
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::fail;
    });
}

ExperimentReport ex_rotated_convergence(const RotatedCertificateParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "thm2.1";
    run.rep.title = "Rotated symmetrals converge: monotone monitors and Cauchy tail";
    Trajectory t;
    return guarded(run, o, [&] {
        if (!square_summable(p.spec)) {
            throw Refused("the increments of " + describe(p.spec) + " are not square summable");
        }
        const CompactSet K = p.K ? *p.K : segment_and_ball(p.r);
        const double h = resolve_h(o, K);
        run.rep.parameters = {{"M", p.M},
                              {"spec", spec_json(p.spec)},
                              {"deltas", p.deltas},
                              {"radii", p.radii},
                              {"input", p.K ? "custom" : "segment_and_ball"},
                              {"r", p.r},
                              {"options", options_json(o, h)}};
        json anchors = json::array();
        for (const Point& q : p.anchors) anchors.push_back({q.x, q.y});
        run.rep.parameters["anchors"] = anchors;

        DynamicsOptions d = dynamics_options(o, p.M, 200, 0);
        d.anchors = p.anchors;
        t = iterate_rotated(K, p.spec, p.M, d);
        run.traj = &t;
        run.rep.warnings.insert(run.rep.warnings.end(), t.warnings.begin(), t.warnings.end());

        const MonitorTable mon = monitor(t, p.deltas, p.radii, h);
        run.extra_files.emplace_back("monitor.csv", monitor_csv(mon));
        double worst_increase = 0.0;
        for (const MonitorFlag& f : mon.flags) worst_increase = std::max(worst_increase, f.increase - f.tolerance);
        run.rep.certificates["monitor_worst_excess"] = worst_increase;
        run.rep.certificates["monitor_rows"] = p.deltas.size() * p.radii.size() * p.anchors.size();
        run.rep.certificates["monitor_steps"] = mon.steps.size();
        run.rep.certificates["monitor_flags"] = mon.flags.size();
        run.check("monitor_rows_nonincreasing", mon.monotone(), static_cast<double>(mon.flags.size()), "==", 0.0);

        const long tail_start = p.M - p.M / 10;
        const LimitEstimate e = estimate_limit(t, tail_start, h);
        for (const CauchyRow& r : e.tail) {
            run.metrics.add("tail_hausdorff", r.m, r.m_prime, r.hausdorff);
            run.metrics.add("tail_symdiff", r.m, r.m_prime, r.symdiff);
        }
        const double bound = 0.01 * diameter(K) + 2 * h;
        run.rep.certificates["tail_hausdorff"] = e.tail_hausdorff;
        run.rep.certificates["limit_error_bound"] = e.error_bound;
        run.rep.certificates["limit_area"] = area(e.set);
        run.rep.certificates["limit_diameter"] = diameter(e.set);
        run.check("tail_cauchy", e.tail_hausdorff < bound, e.tail_hausdorff, "<", bound);

        const AngleLedger L = ledger(p.spec, p.M);
        run.rep.certificates["gamma_M"] = L.gamma();
        for (const Step& s : t.steps) run.metrics.add("area", s.m, area(s.set));
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::fail;
    });
}

ExperimentReport ex_limit_not_ellipse(const NotEllipseParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "ex2.2";
    run.rep.title = "The rotated limit need not be an ellipse";
    Trajectory t;
    return guarded(run, o, [&] {
        const DirectionSpec spec = with_drop(p.spec, p.drop_first);
        if (!square_summable(spec)) throw Refused("the increments of " + describe(spec) + " are not square summable");
        if (!(p.r > 0 && p.r < 0.5)) throw Refused("r must lie in (0, 1/2)");
        const CompactSet K = p.K ? *p.K : segment_ball_hull(p.r);
        const double h = resolve_h(o, K);
        run.rep.parameters = {{"r", p.r},
                              {"M", p.M},
                              {"drop_first", p.drop_first},
                              {"spec", spec_json(spec)},
                              {"input", p.K ? "custom" : "segment_ball_hull"},
                              {"options", options_json(o, h)}};
        const AngleLedger L = ledger(spec, p.M);
        const double gamma = L.gamma_target;
        if (!(gamma > 2 / kPi)) {
            run.rep.warnings.push_back("gamma <= 2/pi; increase drop_first");
        }
        t = iterate_rotated(K, spec, p.M, dynamics_options(o, p.M, 100, 0));
        run.traj = &t;
        const LimitEstimate e = estimate_limit(t, p.M - p.M / 10, h);
        const CompactSet& lim = e.set;
        const double tol = o.tol;

        const double ellipse_bound = kPi * gamma * p.r / 2;
        const double rhombus = p.r / std::sqrt(1 - 4 * p.r * p.r);
        const double gap = ellipse_bound - rhombus;
        const double margin = ellipse_bound - area(K);
        run.rep.certificates = {{"gamma_M", L.gamma()},
                                {"gamma_target", gamma},
                                {"area_K", area(K)},
                                {"area_limit", area(lim)},
                                {"limit_diameter", diameter(lim)},
                                {"ellipse_area_lower_bound", ellipse_bound},
                                {"rhombus_area_bound", rhombus},
                                {"analytic_gap", gap},
                                {"certificate_margin", margin},
                                {"limit_error_bound", e.error_bound}};
        for (const CauchyRow& r : e.tail) run.metrics.add("tail_hausdorff", r.m, r.m_prime, r.hausdorff);

        const CompactSet inner = polygon_ball({0, 0}, p.r * (1 - tol), 256);
        run.check("ball_inside_limit", contains(lim, inner), difference_area(inner, lim), "<=", kGeomEps);
        run.check("limit_contains_long_segment", diameter(lim) >= L.gamma() * (1 - tol), diameter(lim), ">=",
                  L.gamma() * (1 - tol));
        const double drift = std::abs(area(lim) - area(K));
        run.check("limit_area_equals_input", drift <= tol * area(K), drift, "<=", tol * area(K));
        run.check("area_below_ellipse_bound", area(K) < ellipse_bound * (1 - tol), area(K), "<",
                  ellipse_bound * (1 - tol));
        const double ratio = gap > 0 ? margin / gap : 0.0;
        run.rep.certificates["margin_over_gap"] = ratio;
        run.check("margin_at_least_half_gap", gap > 0 && ratio >= 0.5, ratio, ">=", 0.5);
        // The certificate either applies or it does not; it never refutes.
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::inconclusive;
        if (run.rep.verdict == Verdict::pass) run.rep.notes.push_back("not an ellipse");
    });
}

ExperimentReport ex_limit_nonconvex(const NonconvexParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "ex2.3";
    run.rep.title = "The rotated limit can be nonconvex";
    Trajectory t;
    return guarded(run, o, [&] {
        if (!square_summable(p.spec)) throw Refused("the increments of " + describe(p.spec) + " are not square summable");
        if (!(p.r > 0)) throw Refused("r must be positive");
        const CompactSet K = p.K ? *p.K : segment_and_ball(p.r);
        const double h = resolve_h(o, K);
        run.rep.parameters = {{"r", p.r},
                              {"M", p.M},
                              {"spec", spec_json(p.spec)},
                              {"input", p.K ? "custom" : "segment_and_ball"},
                              {"options", options_json(o, h)}};
        const AngleLedger L = ledger(p.spec, p.M);
        const double gamma = L.gamma_target;
        t = iterate_rotated(K, p.spec, p.M, dynamics_options(o, p.M, 100, 0));
        run.traj = &t;
        const LimitEstimate e = estimate_limit(t, p.M - p.M / 10, h);
        const CompactSet& lim = e.set;
        const double tol = o.tol;

        const double excess = convex_hull_area(lim) - area(lim);
        const double gap = gamma * p.r / 2 - kPi * p.r * p.r;
        run.rep.certificates = {{"gamma_M", L.gamma()},
                                {"gamma_target", gamma},
                                {"area_limit", area(lim)},
                                {"hull_area_limit", convex_hull_area(lim)},
                                {"hull_excess", excess},
                                {"analytic_gap", gap},
                                {"limit_error_bound", e.error_bound}};
        for (const CauchyRow& r : e.tail) run.metrics.add("tail_hausdorff", r.m, r.m_prime, r.hausdorff);

        run.check("below_threshold", kPi * p.r < gamma / 2 * (1 - tol), kPi * p.r, "<", gamma / 2 * (1 - tol));
        run.check("hull_excess_certificate", gap > 0 && excess >= gap * (1 - tol), excess, ">=", gap * (1 - tol));
        const double ratio = gap > 0 ? excess / gap : 0.0;
        run.rep.certificates["margin_over_gap"] = ratio;
        run.check("margin_at_least_half_gap", gap > 0 && ratio >= 0.5, ratio, ">=", 0.5);
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::inconclusive;
        if (run.rep.verdict == Verdict::pass) run.rep.notes.push_back("nonconvex");
    });
}

ExperimentReport ex_kronecker(const KroneckerParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "thm5.1";
    run.rep.title = "Kronecker directions: convergence to the equimeasurable ball";
    Trajectory t;
    return guarded(run, o, [&] {
        const CompactSet K = p.K ? *p.K : builtin_set("square");
        if (!(area(K) > 0)) throw Refused("the input set must have positive area");
        const double h = resolve_h(o, K);
        const Kronecker spec{p.alpha};
        run.rep.parameters = {{"alpha", p.alpha},
                              {"M", p.M},
                              {"spec", spec_json(spec)},
                              {"input", p.K ? "custom" : "square"},
                              {"options", options_json(o, h)}};
        t = iterate_plain(K, spec, p.M, dynamics_options(o, p.M, 100, 0));
        run.traj = &t;
        const Ball star = equimeasurable_ball(K);
        const CompactSet ball = polygon_ball(star.center, star.radius, 1024, BallFit::inscribed);
        const Grid gb = rasterize(ball, h);
        std::vector<double> ms, dh;
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            const Step& s = t.steps[i];
            const double d = hausdorff(rasterize(s.set, h), gb);
            ms.push_back(static_cast<double>(s.m));
            dh.push_back(d);
            run.metrics.add("hausdorff_to_ball", s.m, d);
            run.metrics.add("symdiff_to_ball", s.m, symdiff_area(s.set, ball));
        }
        const double diam = diameter(K);
        const double bound = 0.02 * diam + 2 * h;
        // Tail = second half of the stored steps; the fitted rise across it
        // must stay within the raster error of a difference of two distances.
        const std::size_t half = dh.size() / 2;
        const std::vector<double> tx(ms.begin() + static_cast<long>(half), ms.end());
        const std::vector<double> ty(dh.begin() + static_cast<long>(half), dh.end());
        const double rise = tx.size() > 1 ? fitted_slope(tx, ty) * (tx.back() - tx.front()) : 0.0;
        const double rise_tol = 2 * std::sqrt(2.0) * h;
        run.rep.certificates = {{"ball_radius", star.radius},
                                {"final_hausdorff", dh.back()},
                                {"hausdorff_bound", bound},
                                {"tail_fitted_rise", rise},
                                {"final_symdiff", symdiff_area(t.last().set, ball)}};

        run.check("final_hausdorff_to_ball", dh.back() <= bound, dh.back(), "<=", bound);
        run.check("tail_nonincreasing", rise <= rise_tol, rise, "<=", rise_tol);

        if (const auto pq = rational_multiple_of_pi(p.alpha)) {
            run.rep.notes.push_back("alpha/pi = " + std::to_string(pq->first) + "/" + std::to_string(pq->second) +
                                    " is rational: out of hypothesis; the directions form a finite set");
            json sym = json::array();
            std::set<long> seen;
            for (long k = 1; k <= 2 * pq->second; ++k) {
                const Direction u(static_cast<double>(k) * p.alpha);
                const long key = std::lround(std::fmod(u.theta(), kPi) * 1e9);
                if (!seen.insert(key).second) continue;
                const CompactSet& L = t.last().set;
                sym.push_back({{"theta", u.theta()}, {"hausdorff", raster_hausdorff(L, reflect(L, u), h)}});
            }
            run.rep.certificates["limit_symmetry"] = sym;
            run.rep.verdict = Verdict::inconclusive;
            return;
        }
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::fail;
    });
}

double discrepancy_slope(const DirectionSpec& spec, const std::vector<long>& ns, std::vector<double>* values) {
    std::vector<double> xs, ys;
    for (long n : ns) {
        const double d = discrepancy(spec, n);
        if (values) values->push_back(d);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(d));
    }
    return fitted_slope(xs, ys);
}

ExperimentReport ex_ud_counterexample(const UniformDistributionParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "sec5-ud";
    run.rep.title = "Uniformly distributed directions whose symmetrals do not converge";
    NonconvergenceOutcome out;
    const PowerLaw spec{p.theta, p.sigma, 0};
    try {
        check_spec(spec);
    } catch (const SpecError& e) {
        throw Refused(e.what());
    }
    return guarded(run, o, [&] {
        if (p.sigma >= 0.95) {
            run.rep.warnings.push_back("sigma close to 1: beta_m diverges slowly and the non-Cauchy floor needs large M");
        }
        std::vector<double> ds;
        const double slope = discrepancy_slope(spec, p.discrepancy_n, &ds);
        for (std::size_t i = 0; i < ds.size(); ++i) run.metrics.add("discrepancy", p.discrepancy_n[i], ds[i]);
        run.rep.certificates["discrepancy_slope"] = slope;
        run.rep.certificates["discrepancy_values"] = ds;
        run.check("discrepancy_slope_near_minus_sigma", std::abs(slope + p.sigma) <= 0.1, slope, "within 0.1 of",
                  -p.sigma);

        NonconvergenceParams np;
        np.spec = spec;
        np.r = p.r;
        np.M = p.M;
        nonconvergence_core(np, o, run, out, "nonconvergence/");
        run.rep.parameters["theta"] = p.theta;
        run.rep.parameters["sigma"] = p.sigma;
        run.rep.parameters["discrepancy_n"] = p.discrepancy_n;
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::fail;
    });
}

ExperimentReport ex_klain(const KlainParams& p, const ExperimentOptions& o) {
    Run run;
    run.rep.id = "thm6.1";
    run.rep.title = "Finitely many directions: symmetrals of a compact set converge";
    Trajectory t;
    return guarded(run, o, [&] {
        FiniteSet F = p.F;
        if (F.directions.empty()) F.directions = {Direction(0.0), Direction(kPi / 4), Direction(kPi / 2)};
        check_spec(F);
        const CompactSet K = p.K ? *p.K : nonconvex_example();
        const double h = resolve_h(o, K);
        run.rep.parameters = {{"M", p.M},
                              {"spec", spec_json(F)},
                              {"input", p.K ? "custom" : "nonconvex"},
                              {"options", options_json(o, h)}};
        t = iterate_plain(K, F, p.M, dynamics_options(o, p.M, 100, std::max(1L, p.M / 10)));
        run.traj = &t;
        const double diam = diameter(K);
        const double bound = 0.01 * diam + 2 * h;
        const LimitEstimate e = estimate_limit(t, p.M - p.M / 10, h);
        for (const CauchyRow& r : e.tail) {
            run.metrics.add("tail_hausdorff", r.m, r.m_prime, r.hausdorff);
            run.metrics.add("tail_symdiff", r.m, r.m_prime, r.symdiff);
        }
        run.rep.certificates["tail_hausdorff"] = e.tail_hausdorff;
        run.check("tail_cauchy", e.tail_hausdorff <= bound, e.tail_hausdorff, "<=", bound);

        std::set<int> recurring;
        if (F.schedule == Schedule::indices) {
            recurring.insert(F.indices.begin(), F.indices.end());
        } else {
            for (int i = 0; i < static_cast<int>(F.directions.size()); ++i) recurring.insert(i);
        }
        json sym = json::array();
        const Grid gl = rasterize(e.set, h);
        for (int i : recurring) {
            const Direction v = F.directions[static_cast<std::size_t>(i)];
            const CompactSet mirrored = reflect(e.set, v);
            const double d = hausdorff(gl, rasterize(mirrored, h));
            const double sd = symdiff_area(e.set, mirrored);
            sym.push_back({{"theta", v.theta()}, {"hausdorff", d}, {"symdiff", sd}});
            char name[64];
            std::snprintf(name, sizeof name, "limit_symmetric_%d", i);
            run.check(name, d <= bound, d, "<=", bound);
        }
        run.rep.certificates["limit_symmetry"] = sym;
        run.rep.certificates["limit_area"] = area(e.set);
        run.rep.verdict = run.all_passed() ? Verdict::pass : Verdict::fail;
    });
}

// --- dispatch -------------------------------------------------------------

std::vector<std::string> experiment_ids() {
    return {"ex2.1", "ex2.2", "ex2.3", "thm2.1", "thm5.1", "sec5-ud", "thm6.1"};
}

ExperimentReport reproduce(const std::string& id, const ReproduceOverrides& ov, const ExperimentOptions& o) {
    auto ignore_set = [&](ExperimentReport rep) {
        if (ov.K) rep.warnings.push_back("input set override ignored: this experiment fixes its input");
        return rep;
    };
    if (id == "ex2.1") {
        NonconvergenceParams p;
        if (ov.spec) p.spec = *ov.spec;
        if (ov.M) p.M = *ov.M;
        return ignore_set(ex_nonconvergence(p, o));
    }
    if (id == "ex2.2") {
        NotEllipseParams p;
        if (ov.spec) p.spec = *ov.spec;
        if (ov.M) p.M = *ov.M;
        p.K = ov.K;
        return ex_limit_not_ellipse(p, o);
    }
    if (id == "ex2.3") {
        NonconvexParams p;
        if (ov.spec) p.spec = *ov.spec;
        if (ov.M) p.M = *ov.M;
        p.K = ov.K;
        return ex_limit_nonconvex(p, o);
    }
    if (id == "thm2.1") {
        RotatedCertificateParams p;
        if (ov.spec) p.spec = *ov.spec;
        if (ov.M) p.M = *ov.M;
        p.K = ov.K;
        return ex_rotated_convergence(p, o);
    }
    if (id == "thm5.1") {
        KroneckerParams p;
        if (ov.spec) {
            const auto* k = std::get_if<Kronecker>(&*ov.spec);
            if (!k) throw Refused("thm5.1 takes a kronecker spec");
            p.alpha = k->alpha;
        }
        if (ov.M) p.M = *ov.M;
        p.K = ov.K;
        return ex_kronecker(p, o);
    }
    if (id == "sec5-ud") {
        UniformDistributionParams p;
        if (ov.spec) {
            const auto* pl = std::get_if<PowerLaw>(&*ov.spec);
            if (!pl) throw Refused("sec5-ud takes a powerlaw spec");
            p.theta = pl->theta;
            p.sigma = pl->sigma;
        }
        if (ov.M) p.M = *ov.M;
        return ignore_set(ex_ud_counterexample(p, o));
    }
    if (id == "thm6.1") {
        KlainParams p;
        if (ov.spec) {
            const auto* f = std::get_if<FiniteSet>(&*ov.spec);
            if (!f) throw Refused("thm6.1 takes a finite spec");
            p.F = *f;
        }
        if (ov.M) p.M = *ov.M;
        p.K = ov.K;
        return ex_klain(p, o);
    }
    std::string list;
    for (const auto& v : experiment_ids()) list += (list.empty() ? "" : ", ") + v;
    throw std::invalid_argument("unknown experiment id '" + id + "' (valid: " + list + ")");
}

}  // namespace steinerlab
