// Acceptance run: one PASS/FAIL line per criterion, full-scale parameters.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "steinerlab/experiments.hpp"
#include "steinerlab/random_sets.hpp"
#include "steinerlab/sequences.hpp"
#include "steinerlab/verify.hpp"

using namespace steinerlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string check_line(const ExperimentReport& r, const std::string& name) {
    const Check* c = r.find(name);
    if (!c) return name + " missing";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s=%.6g %s %.6g", name.c_str(), c->value, c->relation.c_str(), c->threshold);
    return buf;
}

bool check_ok(const ExperimentReport& r, const std::string& name) {
    const Check* c = r.find(name);
    return c && c->passed;
}

Outcome suite(SuiteResult (*fn)(long, std::uint64_t), long n, double time_limit) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult s = fn(n, 20240601);
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = s.ok() && (time_limit <= 0 || secs < time_limit);
    for (const auto& p : s.properties) {
        o.detail += p.name + " " + std::to_string(p.passed) + "/" + std::to_string(p.total) + "; ";
        if (!p.first_failure.empty()) o.detail += "(" + p.first_failure + ") ";
    }
    o.detail += fmt("%.1f s", secs);
    if (time_limit > 0) o.detail += fmt(" (limit %.0f s)", time_limit);
    return o;
}

Outcome criterion_1() { return suite(verify_conservation, 1000, 60.0); }
Outcome criterion_2() { return suite(verify_inequalities, 1000, 0.0); }
Outcome criterion_3() { return suite(verify_oracle, 200, 0.0); }

Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = ex_nonconvergence(NonconvergenceParams{}, {});
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = check_ok(r, "segment_length_matches_gamma_m") && check_ok(r, "hausdorff_floor") && secs < 300;
    o.detail = check_line(r, "segment_length_matches_gamma_m") + "; " + check_line(r, "hausdorff_floor") + "; " +
               fmt("%.1f s (limit 300 s)", secs);
    return o;
}

Outcome criterion_5() {
    const ExperimentReport r = ex_rotated_convergence(RotatedCertificateParams{}, {});
    Outcome o;
    o.pass = check_ok(r, "monitor_rows_nonincreasing") && check_ok(r, "tail_cauchy");
    o.detail = check_line(r, "monitor_rows_nonincreasing") + " flags; " + check_line(r, "tail_cauchy");
    return o;
}

Outcome criterion_6() {
    const ExperimentReport r = ex_kronecker(KroneckerParams{}, {});
    Outcome o;
    o.pass = r.verdict == Verdict::pass && check_ok(r, "final_hausdorff_to_ball") && check_ok(r, "tail_nonincreasing");
    o.detail = check_line(r, "final_hausdorff_to_ball") + "; " + check_line(r, "tail_nonincreasing");
    return o;
}

Outcome criterion_7() {
    const ExperimentReport r = ex_klain(KlainParams{}, {});
    Outcome o;
    o.pass = r.verdict == Verdict::pass;
    o.detail = check_line(r, "tail_cauchy");
    for (int i = 0; i < 3; ++i) o.detail += "; " + check_line(r, "limit_symmetric_" + std::to_string(i));
    return o;
}

Outcome criterion_8() {
    Outcome o;
    bool ok = true;
    const std::vector<long> ns{100, 1000, 10000, 100000};
    for (double sigma : {0.6, 0.75, 0.9}) {
        const double slope = discrepancy_slope(PowerLaw{0.5, sigma, 0}, ns);
        const bool good = std::abs(slope + sigma) <= 0.1;
        ok = ok && good;
        o.detail += fmt("sigma=%.2f ", sigma) + fmt("slope=%.3f ", slope) + (good ? "ok; " : "off; ");
    }
    const Kronecker golden{kPi * (std::sqrt(5.0) - 1)};
    double worst = 0.0;
    for (long n : ns) worst = std::max(worst, discrepancy(golden, n) * static_cast<double>(n) / std::log(static_cast<double>(n)));
    ok = ok && worst <= 1.0;
    o.detail += fmt("golden max D*N/logN=%.3f (<= 1); ", worst);

    Rng rng(5);
    double gap = 0.0;
    for (int n = 1; n <= 50; ++n) {
        std::vector<double> a;
        for (int i = 0; i < n; ++i) a.push_back(rng.uniform(0, kTwoPi));
        gap = std::max(gap, std::abs(discrepancy_of_angles(a) - discrepancy_brute_force(a)));
        for (const DirectionSpec& spec : std::vector<DirectionSpec>{golden, PowerLaw{0.5, 0.75, 0}}) {
            std::vector<double> b;
            for (const auto& d : directions(spec, n)) b.push_back(d.theta());
            gap = std::max(gap, std::abs(discrepancy_of_angles(b) - discrepancy_brute_force(b)));
        }
    }
    ok = ok && gap <= 1e-15;
    o.detail += fmt("brute force gap=%.2g (N <= 50)", gap);
    o.pass = ok;
    return o;
}

Outcome criterion_9() {
    const ExperimentReport e = ex_limit_not_ellipse(NotEllipseParams{}, {});
    const ExperimentReport n = ex_limit_nonconvex(NonconvexParams{}, {});
    Outcome o;
    const double re = e.certificates.value("margin_over_gap", 0.0);
    const double rn = n.certificates.value("margin_over_gap", 0.0);
    o.pass = e.verdict == Verdict::pass && n.verdict == Verdict::pass && re >= 0.5 && rn >= 0.5;
    o.detail = "ellipse: " + to_string(e.verdict) + fmt(" margin/gap=%.3f; ", re) + "convexity: " +
               to_string(n.verdict) + fmt(" margin/gap=%.3f", rn);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"conservation suite", criterion_1},
        {"inequality suite", criterion_2},
        {"raster oracle equivalence", criterion_3},
        {"spinning segment, plain", criterion_4},
        {"rotated convergence certificate", criterion_5},
        {"kronecker convergence to the ball", criterion_6},
        {"finite direction set", criterion_7},
        {"discrepancy", criterion_8},
        {"not an ellipse / nonconvex certificates", criterion_9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
