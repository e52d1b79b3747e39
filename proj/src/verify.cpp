#include "steinerlab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "steinerlab/clip.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/random_sets.hpp"
#include "steinerlab/raster.hpp"
#include "steinerlab/symmetrize.hpp"

namespace steinerlab {

void PropertyResult::record(long index, double lhs, double bound) {
    ++total;
    worst = std::max(worst, lhs - bound);
    if (lhs <= bound) {
        ++passed;
    } else if (first_failure.empty()) {
        first_failure = "case " + std::to_string(index) + ": " + format_real(lhs) + " > " + format_real(bound);
    }
}

void PropertyResult::record(long index, bool holds, const std::string& detail) {
    ++total;
    if (holds) {
        ++passed;
    } else if (first_failure.empty()) {
        first_failure = "case " + std::to_string(index) + ": " + detail;
    }
}

bool SuiteResult::ok() const {
    for (const auto& p : properties) {
        if (!p.ok()) return false;
    }
    return true;
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : properties) {
        nlohmann::json j = {{"name", p.name}, {"passed", p.passed}, {"total", p.total}};
        j["worst"] = std::isfinite(p.worst) ? nlohmann::json(p.worst) : nlohmann::json(nullptr);
        if (!p.first_failure.empty()) j["first_failure"] = p.first_failure;
        props.push_back(j);
    }
    return {{"suite", suite}, {"n_cases", n_cases}, {"seed", seed}, {"ok", ok()}, {"properties", props}};
}

std::string SuiteResult::summary() const {
    std::string out;
    char buf[256];
    for (const auto& p : properties) {
        std::snprintf(buf, sizeof buf, "%s/%s %ld/%ld", suite.c_str(), p.name.c_str(), p.passed, p.total);
        out += buf;
        if (std::isfinite(p.worst)) {
            std::snprintf(buf, sizeof buf, " worst=%.3g", p.worst);
            out += buf;
        }
        if (!p.first_failure.empty()) out += " first failure " + p.first_failure;
        out += "\n";
    }
    return out;
}

namespace {

SuiteResult start(const std::string& name, long n_cases, std::uint64_t seed,
                  std::initializer_list<const char*> properties) {
    if (n_cases < 1) throw std::invalid_argument("n_cases must be at least 1");
    SuiteResult r;
    r.suite = name;
    r.n_cases = n_cases;
    r.seed = seed;
    for (const char* p : properties) {
        PropertyResult pr;
        pr.name = p;
        r.properties.push_back(pr);
    }
    return r;
}

// Points along every ring edge and chain at the given spacing.
std::vector<Point> boundary_samples(const CompactSet& s, double spacing) {
    std::vector<Point> pts;
    auto sample = [&](Point a, Point b) {
        const int n = std::max(1, static_cast<int>(std::ceil(dist(a, b) / spacing)));
        for (int k = 0; k <= n; ++k) pts.push_back(a + (static_cast<double>(k) / n) * (b - a));
    };
    auto ring = [&](const Ring& r) {
        for (std::size_t k = 0; k < r.size(); ++k) sample(r.vertices[k], r.vertices[(k + 1) % r.size()]);
    };
    for (const auto& r : s.regions) {
        ring(r.outer);
        for (const auto& h : r.holes) ring(h);
    }
    for (const auto& c : s.chains) {
        for (const auto& seg : c.segments) sample(seg.a, seg.b);
    }
    return pts;
}

// The farthest point of either set from the other lies on a boundary or a
// chain, so sampling those at spacing s is exact to within s/2.
double sampled_hausdorff(const CompactSet& a, const CompactSet& b, double spacing) {
    double best = 0.0;
    for (const Point& p : boundary_samples(a, spacing)) best = std::max(best, distance_to_set(b, p));
    for (const Point& p : boundary_samples(b, spacing)) best = std::max(best, distance_to_set(a, p));
    return best;
}

}  // namespace

SuiteResult verify_conservation(long n_cases, std::uint64_t seed) {
    SuiteResult r = start("conservation", n_cases, seed, {"area"});
    Rng rng(seed);
    for (long i = 0; i < n_cases; ++i) {
        const CompactSet k = random_compact_set(rng);
        const Direction u = random_direction(rng);
        const double a = area(k);
        r.properties[0].record(i, std::abs(area(steiner_symmetral(k, u)) - a), 1e-9 * std::max(1.0, a));
    }
    return r;
}

SuiteResult verify_inequalities(long n_cases, std::uint64_t seed) {
    SuiteResult r = start("inequalities", n_cases, seed,
                          {"difference", "symdiff_contractive", "inclusion", "convexity", "perimeter", "second_moment"});
    Rng rng(seed);
    for (long i = 0; i < n_cases; ++i) {
        const CompactSet a = random_compact_set(rng);
        const CompactSet b = translate(random_compact_set(rng), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
        const Direction u = random_direction(rng);
        const CompactSet sa = steiner_symmetral(a, u);
        const CompactSet sb = steiner_symmetral(b, u);
        r.properties[0].record(i, difference_area(sa, sb), difference_area(a, b) + 1e-8);
        r.properties[1].record(i, symdiff_area(sa, sb), symdiff_area(a, b) + 1e-8);

        const CompactSet inner = intersect(a, b);
        r.properties[2].record(i, contains(sa, steiner_symmetral(inner, u)), "S_u(A cap B) not inside S_u A");

        const CompactSet c = random_convex_polygon(rng, {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                                   rng.uniform(0.2, 2.0), rng.uniform_int(3, 16));
        const CompactSet sc = steiner_symmetral(c, u);
        r.properties[3].record(i, is_convex(sc, 1e-7), "symmetral of a convex polygon is not convex");
        r.properties[4].record(i, perimeter(sc), perimeter(c) + 1e-8);

        const Point p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Point pp = dot(p, u.normal()) * u.normal();
        r.properties[5].record(i, second_moment(sa, pp), second_moment(a, p) + 1e-8);
    }
    return r;
}

SuiteResult verify_oracle(long n_cases, std::uint64_t seed) {
    SuiteResult r = start("oracle", n_cases, seed, {"raster_area", "raster_hausdorff"});
    Rng rng(seed);
    for (long i = 0; i < n_cases; ++i) {
        const CompactSet s = random_compact_set(rng);
        const CompactSet t = steiner_symmetral(s, random_direction(rng));
        const double h = diameter(s) / 512;
        r.properties[0].record(i, std::abs(rasterize(s, h).area() - area(s)), 3 * h * perimeter(s));
        const double exact = sampled_hausdorff(s, t, h / 8);
        r.properties[1].record(i, std::abs(raster_hausdorff(s, t, h) - exact), 2 * h);
    }
    return r;
}

std::vector<std::string> suite_names() { return {"all", "conservation", "inequalities", "oracle"}; }

std::vector<SuiteResult> run_suites(const std::string& name, long n_cases, std::uint64_t seed) {
    if (n_cases < 1) throw std::invalid_argument("n_cases must be at least 1");
    std::vector<SuiteResult> out;
    if (name == "all" || name == "conservation") out.push_back(verify_conservation(n_cases, seed));
    if (name == "all" || name == "inequalities") out.push_back(verify_inequalities(n_cases, seed));
    if (name == "all" || name == "oracle") out.push_back(verify_oracle(n_cases, seed));
    if (out.empty()) {
        throw std::invalid_argument("unknown suite '" + name + "' (valid: all, conservation, inequalities, oracle)");
    }
    return out;
}

}  // namespace steinerlab
