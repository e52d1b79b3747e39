#pragma once

#include <cstdint>
#include <random>

#include "steinerlab/geom.hpp"

namespace steinerlab {

/// Seeded generator with platform-independent real draws (the standard
/// distributions are implementation-defined, the engine is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
    }
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// Star-shaped simple polygon around center; n >= 5 keeps the center
/// strictly inside with clearance >= 0.4 * rmin.
CompactSet random_star_polygon(Rng& rng, Point center, double rmin, double rmax, int n);
CompactSet random_convex_polygon(Rng& rng, Point center, double radius, int n);
Direction random_direction(Rng& rng);

/// One to three disjoint star regions (some with a hole), sometimes with a
/// chain attached; diameter O(1..8).
CompactSet random_compact_set(Rng& rng);

}  // namespace steinerlab
