#include "steinerlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <map>

#include "steinerlab/clip.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/raster.hpp"
#include "steinerlab/symmetrize.hpp"

namespace steinerlab {

namespace fs = std::filesystem;

std::string to_string(Mode mode) {
    return mode == Mode::plain ? "plain" : "rotated";
}

Mode parse_mode(const std::string& text) {
    if (text == "plain") return Mode::plain;
    if (text == "rotated") return Mode::rotated;
    throw std::invalid_argument("mode must be plain or rotated, got '" + text + "'");
}

bool StoragePolicy::stores(long m, long M) const {
    if (m == 0 || m == M) return true;
    if (keep_every > 0 && m % keep_every == 0) return true;
    return m > M - dense_tail;
}

const Step* Trajectory::find(long m) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), m,
                               [](const Step& s, long v) { return s.m < v; });
    return it != steps.end() && it->m == m ? &*it : nullptr;
}

const Step& Trajectory::at(long m) const {
    if (const Step* s = find(m)) return *s;
    throw std::out_of_range("step " + std::to_string(m) + " is not stored");
}

namespace {

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Trajectory start(Mode mode, const CompactSet& K, const DirectionSpec& spec, long M,
                 const DynamicsOptions& opts) {
    if (M < 0) throw std::invalid_argument("M must be nonnegative");
    check_spec(spec);
    Trajectory t;
    t.mode = mode;
    t.spec = spec;
    t.M = M;
    t.initial_area = area(K);
    t.storage = opts.storage;
    t.simplify_tol = opts.simplify_tol;
    t.area_rate = opts.area_rate;
    t.symmetry_tol = opts.symmetry_tol;
    t.anchor_targets = opts.anchors.empty() ? std::vector<Point>{Point{}} : opts.anchors;
    return t;
}

void check_area(const Trajectory& t, long m, const CompactSet& K) {
    const double drift = std::abs(area(K) - t.initial_area);
    if (drift > t.area_rate * static_cast<double>(m)) {
        throw InvariantViolation("area drift " + real(drift) + " at step " + std::to_string(m) +
                                 " exceeds " + real(t.area_rate) + " * m");
    }
}

void inject_fault(const DynamicsOptions& opts, long m, CompactSet& K) {
    if (opts.area_fault_step > 0 && m == opts.area_fault_step) K = scale(K, std::sqrt(1.001));
}

}  // namespace

Trajectory iterate_plain(const CompactSet& K, const DirectionSpec& spec, long M,
                         const DynamicsOptions& opts) {
    Trajectory t = start(Mode::plain, K, spec, M, opts);
    const std::vector<Direction> us = directions(spec, M);
    SymmetrizeOptions sopts;
    sopts.simplify_tol = opts.simplify_tol;

    CompactSet cur = K;
    std::vector<Point> anchors = t.anchor_targets;
    if (opts.observer) opts.observer(0, Direction(0.0), cur);
    t.steps.push_back(Step{0, Direction(0.0), cur, 0.0, anchors});
    for (long m = 1; m <= M; ++m) {
        const Direction u = us[static_cast<std::size_t>(m - 1)];
        cur = steiner_symmetral(cur, u, sopts);
        inject_fault(opts, m, cur);
        const Point e = u.unit();
        for (Point& p : anchors) p = p - dot(p, e) * e;
        check_area(t, m, cur);
        if (opts.observer) opts.observer(m, u, cur);
        if (t.storage.stores(m, M)) t.steps.push_back(Step{m, u, cur, 0.0, anchors});
    }
    return t;
}

Trajectory iterate_rotated(const CompactSet& K, const DirectionSpec& spec, long M,
                           const DynamicsOptions& opts) {
    Trajectory t = start(Mode::rotated, K, spec, M, opts);
    if (!square_summable(spec)) {
        t.warnings.push_back("direction increments are not square summable; the rotated "
                             "sequence need not converge");
    }
    for (const Point& q : t.anchor_targets) {
        if (std::abs(q.x) > kGeomEps) {
            throw std::invalid_argument("rotated-mode anchors must lie on the y-axis");
        }
    }
    const std::vector<Direction> us = directions(spec, M);
    const auto trackers = track_anchors(spec, M, t.anchor_targets);
    SymmetrizeOptions sopts;
    sopts.simplify_tol = opts.simplify_tol;
    const Direction e1(0.0);

    auto anchors_at = [&](long m) {
        std::vector<Point> out;
        for (const auto& tr : trackers) out.push_back(tr.p[static_cast<std::size_t>(m)]);
        return out;
    };

    CompactSet cur = K;
    double rho = 0.0;  // angle of the accumulated rotation R_{m-1}
    if (opts.observer) opts.observer(0, e1, cur);
    t.steps.push_back(Step{0, e1, cur, 0.0, anchors_at(0)});
    for (long m = 1; m <= M; ++m) {
        const Direction u = us[static_cast<std::size_t>(m - 1)];
        double phi = std::remainder(u.theta() + rho, kPi);
        if (phi <= -kPi / 2) phi += kPi;
        const double alpha = std::abs(phi);
        if (!(alpha > 0.0 && alpha < kPi / 2)) {
            throw HypothesisError("increment alpha_" + std::to_string(m) + " = " + real(alpha) +
                                  " is outside (0, pi/2)");
        }
        cur = steiner_symmetral(rotate(cur, -phi), e1, sopts);
        inject_fault(opts, m, cur);
        rho = std::remainder(rho - phi, kTwoPi);
        check_area(t, m, cur);
        if (opts.observer) opts.observer(m, u, cur);
        if (t.storage.stores(m, M)) {
            if (!is_symmetric(cur, e1, t.symmetry_tol)) {
                throw InvariantViolation("rotated step " + std::to_string(m) +
                                         " is not symmetric about the y-axis");
            }
            t.steps.push_back(Step{m, u, cur, -phi, anchors_at(m)});
        }
    }
    return t;
}

Trajectory iterate(Mode mode, const CompactSet& K, const DirectionSpec& spec, long M,
                   const DynamicsOptions& opts) {
    return mode == Mode::plain ? iterate_plain(K, spec, M, opts) : iterate_rotated(K, spec, M, opts);
}

std::vector<AnchorTracker> track_anchors(const DirectionSpec& spec, long M,
                                         const std::vector<Point>& qs) {
    const AngleLedger L = ledger(spec, M);
    std::vector<AnchorTracker> out;
    for (const Point& q : qs) {
        AnchorTracker tr;
        tr.q = q;
        Point p = (1.0 / L.gamma_target) * q;
        tr.p.push_back(p);
        for (double a : L.alphas) {
            p = std::cos(a) * p;
            tr.p.push_back(p);
        }
        out.push_back(std::move(tr));
    }
    return out;
}

double MonitorTable::value(std::size_t s, std::size_t d, std::size_t r, std::size_t a) const {
    return values[((s * deltas.size() + d) * radii.size() + r) * anchors.size() + a];
}

double boundary_length(const CompactSet& set) {
    double len = perimeter(set);
    for (const Chain& c : set.chains) {
        for (const Segment& s : c.segments) len += 2.0 * s.length();
    }
    return len;
}

MonitorTable monitor(const Trajectory& traj, const std::vector<double>& deltas,
                     const std::vector<double>& radii, double h) {
    if (!(h > 0)) throw std::invalid_argument("monitor: h must be positive");
    for (double d : deltas) {
        if (!(d > 0)) throw std::invalid_argument("monitor: deltas must be positive");
    }
    for (double r : radii) {
        if (!(r > 0)) throw std::invalid_argument("monitor: radii must be positive");
    }
    MonitorTable t;
    t.h = h;
    t.deltas = deltas;
    t.radii = radii;
    for (const Point& q : traj.anchor_targets) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", q.x, q.y);
        t.anchors.push_back(buf);
    }
    const std::size_t nd = deltas.size(), nr = radii.size(), na = t.anchors.size();
    std::vector<double> prev_perimeter;
    for (std::size_t s = 0; s < traj.steps.size(); ++s) {
        const Step& st = traj.steps[s];
        t.steps.push_back(st.m);
        const Grid g = rasterize(st.set, h);
        for (double delta : deltas) {
            const Grid par = parallel_set(g, delta);
            for (double r : radii) {
                for (std::size_t a = 0; a < na; ++a) {
                    t.values.push_back(outside_ball_area(par, Ball{st.anchor_points[a], r}));
                }
            }
        }
        const double per = boundary_length(st.set);
        if (s == 0) {
            prev_perimeter.assign(1, per);
            continue;
        }
        const double per_max = std::max(per, prev_perimeter[0]);
        prev_perimeter[0] = per;
        for (std::size_t d = 0; d < nd; ++d) {
            const double tol = 6.0 * h * (per_max + kTwoPi * deltas[d]);
            for (std::size_t r = 0; r < nr; ++r) {
                for (std::size_t a = 0; a < na; ++a) {
                    const double inc = t.value(s, d, r, a) - t.value(s - 1, d, r, a);
                    if (inc > tol) t.flags.push_back(MonitorFlag{st.m, d, r, a, inc, tol});
                }
            }
        }
    }
    return t;
}

std::vector<CauchyRow> cauchy_pairs(const Trajectory& traj,
                                    const std::vector<std::pair<long, long>>& pairs, double h,
                                    bool with_symdiff) {
    std::map<long, Grid> grids;
    auto grid = [&](long m) -> const Grid& {
        auto it = grids.find(m);
        if (it == grids.end()) it = grids.emplace(m, rasterize(traj.at(m).set, h)).first;
        return it->second;
    };
    std::vector<CauchyRow> rows;
    for (const auto& [m, mp] : pairs) {
        CauchyRow row{m, mp, hausdorff(grid(m), grid(mp)), 0.0};
        if (with_symdiff) row.symdiff = symdiff_area(traj.at(m).set, traj.at(mp).set);
        rows.push_back(row);
    }
    return rows;
}

std::vector<CauchyRow> cauchy_diagnostics(const Trajectory& traj, const std::vector<long>& lags,
                                          double h, bool with_symdiff) {
    std::vector<std::pair<long, long>> pairs;
    for (long lag : lags) {
        for (const Step& s : traj.steps) {
            if (traj.find(s.m + lag)) pairs.emplace_back(s.m, s.m + lag);
        }
    }
    return cauchy_pairs(traj, pairs, h, with_symdiff);
}

LimitEstimate estimate_limit(const Trajectory& traj, long tail_start, double h) {
    LimitEstimate e;
    const Step& last = traj.last();
    e.set = last.set;
    e.m = last.m;
    std::vector<std::pair<long, long>> pairs;
    for (const Step& s : traj.steps) {
        if (s.m >= tail_start && s.m < last.m) pairs.emplace_back(s.m, last.m);
    }
    e.tail = cauchy_pairs(traj, pairs, h);
    for (const CauchyRow& r : e.tail) e.tail_hausdorff = std::max(e.tail_hausdorff, r.hausdorff);
    e.error_bound = e.tail_hausdorff + 2.0 * h;
    return e;
}

void write_checkpoints(const Trajectory& traj, const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json steps = nlohmann::json::array();
    for (const Step& s : traj.steps) {
        const std::string name = "step_" + std::to_string(s.m) + ".json";
        save_set(s.set, (fs::path(dir) / name).string());
        nlohmann::json anchors = nlohmann::json::array();
        for (const Point& p : s.anchor_points) anchors.push_back({p.x, p.y});
        steps.push_back({{"m", s.m},
                         {"file", name},
                         {"u_theta", s.u.theta()},
                         {"rotation_applied", s.rotation_applied},
                         {"area", area(s.set)},
                         {"anchor_points", anchors}});
    }
    nlohmann::json targets = nlohmann::json::array();
    for (const Point& q : traj.anchor_targets) targets.push_back({q.x, q.y});
    nlohmann::json manifest = {
        {"mode", to_string(traj.mode)},
        {"spec", describe(traj.spec)},
        {"spec_keys", spec_to_keys(traj.spec)},
        {"M", traj.M},
        {"initial_area", traj.initial_area},
        {"storage", {{"keep_every", traj.storage.keep_every}, {"dense_tail", traj.storage.dense_tail}}},
        {"tolerances",
         {{"simplify_tol", traj.simplify_tol},
          {"area_rate", traj.area_rate},
          {"symmetry_tol", traj.symmetry_tol}}},
        {"anchor_targets", targets},
        {"warnings", traj.warnings},
        {"steps", steps}};
    write_json(manifest, (fs::path(dir) / "manifest.json").string());
}

std::string monitor_csv(const MonitorTable& t) {
    std::ostringstream out;
    out << "m,delta,r,anchor,value\n";
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
        for (std::size_t d = 0; d < t.deltas.size(); ++d) {
            for (std::size_t r = 0; r < t.radii.size(); ++r) {
                for (std::size_t a = 0; a < t.anchors.size(); ++a) {
                    out << t.steps[s] << ',' << real(t.deltas[d]) << ',' << real(t.radii[r]) << ",\""
                        << t.anchors[a] << "\"," << real(t.value(s, d, r, a)) << '\n';
                }
            }
        }
    }
    return out.str();
}

void write_monitor_csv(const MonitorTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << monitor_csv(t);
}

void write_cauchy_csv(const std::vector<CauchyRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << "m,m_prime,hausdorff,symdiff\n";
    for (const CauchyRow& r : rows) {
        out << r.m << ',' << r.m_prime << ',' << real(r.hausdorff) << ',' << real(r.symdiff) << '\n';
    }
}

}  // namespace steinerlab
