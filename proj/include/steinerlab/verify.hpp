#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace steinerlab {

/// Pass count of one property over a seeded batch. worst is the largest
/// value of lhs - bound seen (nonpositive when every case passes).
struct PropertyResult {
    std::string name;
    long passed = 0;
    long total = 0;
    double worst = -INFINITY;
    std::string first_failure;

    bool ok() const { return passed == total; }
    void record(long index, double lhs, double bound);
    void record(long index, bool holds, const std::string& detail);
};

struct SuiteResult {
    std::string suite;
    long n_cases = 0;
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool ok() const;
    nlohmann::json to_json() const;
    /// One "name passed/total worst=..." line per property.
    std::string summary() const;
};

/// |area(S_u K) - area(K)| <= 1e-9 max(1, area K).
SuiteResult verify_conservation(long n_cases, std::uint64_t seed);
/// Difference inequality, symdiff contractivity, inclusion, convexity,
/// perimeter (convex inputs) and second moment about the projected point.
SuiteResult verify_inequalities(long n_cases, std::uint64_t seed);
/// Raster area within 3h perimeter and raster Hausdorff within 2h of a
/// boundary-sampled distance, at h = diam / 512.
SuiteResult verify_oracle(long n_cases, std::uint64_t seed);

std::vector<std::string> suite_names();
/// "all" runs every suite; throws std::invalid_argument for unknown names or
/// n_cases < 1.
std::vector<SuiteResult> run_suites(const std::string& name, long n_cases, std::uint64_t seed);

}  // namespace steinerlab
