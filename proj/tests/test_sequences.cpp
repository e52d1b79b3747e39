#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "steinerlab/random_sets.hpp"
#include "steinerlab/sequences.hpp"

using namespace steinerlab;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    std::ofstream(name) << body;
    return name;
}

// Independent product in extended precision.
long double powerlaw_gamma(double theta, double sigma, long M) {
    long double g = 1.0L;
    for (long k = 1; k <= M; ++k) g *= std::cos(static_cast<long double>(theta) * std::pow(static_cast<long double>(k), -static_cast<long double>(sigma)));
    return g;
}

}  // namespace

TEST_CASE("direction examples") {
    CHECK(direction(Kronecker{1.0}, 3).theta() == doctest::Approx(3.0));
    const PowerLaw p{0.5, 0.75, 0};
    CHECK(direction(p, 1).theta() == doctest::Approx(0.5));
    CHECK(direction(p, 2).theta() == doctest::Approx(0.5 + 0.5 * std::pow(2.0, -0.75)));
    CHECK(direction(p, 3).theta() == doctest::Approx(0.5 + 0.5 * std::pow(2.0, -0.75) + 0.5 * std::pow(3.0, -0.75)));
    FiniteSet f;
    f.directions = {Direction(0.0), Direction(kPi / 2)};
    CHECK(direction(f, 4).theta() == doctest::Approx(kPi / 2));
    CHECK(direction(f, 3).theta() == 0.0);
}

TEST_CASE("random access matches the sequential stream") {
    FiniteSet rnd;
    rnd.directions = {Direction(0.0), Direction(1.0), Direction(2.0)};
    rnd.schedule = Schedule::seeded_random;
    rnd.seed = 5;
    FiniteSet idx = rnd;
    idx.schedule = Schedule::indices;
    idx.indices = {2, 2, 0};
    for (const DirectionSpec& spec : std::vector<DirectionSpec>{Kronecker{1.0}, PowerLaw{0.5, 0.75, 3}, IID{9}, rnd, idx}) {
        const auto all = directions(spec, 50);
        for (long m : {1L, 2L, 17L, 50L}) CHECK(direction(spec, m).theta() == doctest::Approx(all[static_cast<std::size_t>(m - 1)].theta()).epsilon(1e-13));
    }
    CHECK(direction(idx, 4).theta() == doctest::Approx(2.0));
    CHECK(direction(idx, 3).theta() == 0.0);
    // IID draws are spread over the circle and reproducible
    CHECK(direction(IID{9}, 7).theta() == direction(IID{9}, 7).theta());
    CHECK(direction(IID{9}, 7).theta() != direction(IID{10}, 7).theta());
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(check_spec(PowerLaw{2.0, 0.75, 0}), SpecError);
    CHECK_THROWS_AS(check_spec(PowerLaw{0.5, 0.25, 0}), SpecError);
    CHECK_THROWS_AS(check_spec(PowerLaw{0.5, 1.0, 0}), SpecError);
    CHECK_NOTHROW(check_spec(PowerLaw{2.0, 0.75, 3}));  // dropping increments brings theta*4^-0.75 < pi/2
    CHECK_THROWS_AS(check_spec(FiniteSet{}), SpecError);
    CHECK_THROWS_AS(check_spec(Explicit{}), SpecError);
    CHECK_THROWS_AS(direction(Explicit{{Direction(0.1)}}, 2), SpecError);
    CHECK_THROWS_AS(direction(Kronecker{1.0}, 0), SpecError);
}

TEST_CASE("ledger examples") {
    SUBCASE("power law product against an extended-precision oracle") {
        const long M = 100000;
        const AngleLedger L = ledger(PowerLaw{0.5, 0.75, 0}, M);
        const double oracle = static_cast<double>(powerlaw_gamma(0.5, 0.75, M));
        CHECK(L.gamma() == doctest::Approx(oracle).epsilon(1e-9));
        REQUIRE(L.gamma_tail_bound.has_value());
        // the limit lies within the reported tail bound, and the target is
        // accurate to 6 digits
        const double longer = static_cast<double>(powerlaw_gamma(0.5, 0.75, 4000000));
        CHECK(L.gamma() - longer >= 0.0);
        CHECK(L.gamma() - longer <= *L.gamma_tail_bound);
        // remaining tail beyond 4e6 is ~1e-4 relative; -log cos x ~ x^2/2
        const double limit = longer * std::exp(-0.5 * 0.25 * std::pow(4000000.5, -0.5) / 0.5);
        CHECK(std::abs(L.gamma_target - limit) <= 1e-6);
    }
    SUBCASE("kronecker alpha = 1 decays geometrically") {
        const AngleLedger L = ledger(Kronecker{1.0}, 40);
        CHECK(L.gamma() == doctest::Approx(std::pow(std::cos(1.0), 40)).epsilon(1e-12));
        CHECK_FALSE(L.gamma_tail_bound.has_value());
        for (double a : L.alphas) CHECK(a == doctest::Approx(1.0));
    }
    SUBCASE("a repeated direction stops contributing") {
        const AngleLedger L = ledger(Explicit{{Direction(0.3), Direction(0.3), Direction(0.3)}}, 3);
        CHECK(L.alphas[0] == doctest::Approx(0.3));
        CHECK(L.alphas[1] == 0.0);
        CHECK(L.alphas[2] == 0.0);
        CHECK(L.gamma() == doctest::Approx(std::cos(0.3)));
    }
    SUBCASE("line angles fold to [0, pi/2]") {
        CHECK(line_angle(Direction(0.0), Direction(kPi)) == doctest::Approx(0.0));
        CHECK(line_angle(Direction(0.0), Direction(2.0)) == doctest::Approx(kPi - 2.0));
        CHECK(line_angle(Direction(0.2), Direction(0.2 + 3 * kPi / 2)) == doctest::Approx(kPi / 2));
    }
}

TEST_CASE("power law increments diverge and are square summable") {
    const double theta = 0.5, sigma = 0.75;
    const AngleLedger L = ledger(PowerLaw{theta, sigma, 0}, 200000);
    for (std::size_t m : {100u, 10000u, 199999u}) {
        const double M = static_cast<double>(m + 1);
        // integral comparison for a decreasing summand
        CHECK(L.betas[m] >= theta * (std::pow(M + 1, 1 - sigma) - 1) / (1 - sigma));
        CHECK(L.betas[m] <= theta * (1 + (std::pow(M, 1 - sigma) - 1) / (1 - sigma)));
    }
    CHECK(L.betas.back() > 40.0);  // grows like 2 M^(1/4)
    CHECK(L.sum_alpha_sq <= theta * theta * (1 + 1 / (2 * sigma - 1)));
    for (std::size_t i = 1; i < L.gamma_partials.size(); ++i) CHECK(L.gamma_partials[i] <= L.gamma_partials[i - 1]);
    CHECK(L.gamma() > 0.0);
    CHECK(square_summable(PowerLaw{theta, sigma, 0}));
    CHECK_FALSE(square_summable(Kronecker{1.0}));
}

TEST_CASE("discrepancy examples") {
    CHECK(discrepancy(Explicit{std::vector<Direction>(20, Direction(1.0))}, 20) == doctest::Approx(1.0));
    for (int n : {1, 5, 12, 50}) {
        std::vector<double> eq;
        for (int i = 0; i < n; ++i) eq.push_back(kTwoPi * i / n + 0.1);
        CHECK(discrepancy_of_angles(eq) == doctest::Approx(1.0 / n));
        CHECK(discrepancy_brute_force(eq) == doctest::Approx(1.0 / n));
    }
    CHECK_THROWS_AS(discrepancy(Kronecker{1.0}, 0), SpecError);
    CHECK_THROWS_AS(discrepancy_of_angles({}), SpecError);
}

TEST_CASE("discrepancy agrees with the brute force over arcs") {
    Rng rng(3);
    std::vector<std::vector<double>> cases;
    for (int n = 1; n <= 50; ++n) {
        std::vector<double> a;
        for (int i = 0; i < n; ++i) a.push_back(rng.uniform(0, kTwoPi));
        cases.push_back(a);
        // repeated angles
        std::vector<double> t;
        for (int i = 0; i < n; ++i) t.push_back(kTwoPi * rng.uniform_int(0, 3) / 4);
        cases.push_back(t);
    }
    for (const DirectionSpec& spec : std::vector<DirectionSpec>{Kronecker{1.0}, Kronecker{kPi * (std::sqrt(5.0) - 1)}, PowerLaw{0.5, 0.75, 0}, IID{4}}) {
        for (long n : {1L, 7L, 33L, 50L}) {
            std::vector<double> a;
            for (const auto& d : directions(spec, n)) a.push_back(d.theta());
            cases.push_back(a);
        }
    }
    for (const auto& a : cases) {
        const double fast = discrepancy_of_angles(a), slow = discrepancy_brute_force(a);
        CHECK(std::abs(fast - slow) <= 1e-15);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0);
    }
}

TEST_CASE("golden kronecker discrepancy is of order log N / N") {
    const Kronecker golden{kPi * (std::sqrt(5.0) - 1)};
    for (long n : {100L, 1000L, 10000L, 100000L}) {
        const double d = discrepancy(golden, n);
        CHECK(d * static_cast<double>(n) / std::log(static_cast<double>(n)) < 1.0);
    }
}

TEST_CASE("spec parsing") {
    CHECK(std::get<Kronecker>(parse_spec("kronecker:1")).alpha == 1.0);
    const auto p = std::get<PowerLaw>(parse_spec("powerlaw:0.5,0.75"));
    CHECK(p.theta == 0.5);
    CHECK(p.sigma == 0.75);
    CHECK(std::get<PowerLaw>(parse_spec("powerlaw:0.5,0.75,4")).offset == 4);
    CHECK(std::get<IID>(parse_spec("iid:17")).seed == 17);
    CHECK_THROWS_AS(parse_spec("powerlaw:0.5"), SpecError);
    CHECK_THROWS_AS(parse_spec("powerlaw:2,0.75"), SpecError);
    CHECK_THROWS_AS(parse_spec("spiral:1"), SpecError);
    CHECK_THROWS_AS(parse_spec("kronecker"), SpecError);
    CHECK_THROWS_WITH_AS(parse_spec("kronecker:abc"), doctest::Contains("alpha"), SpecError);
    CHECK_THROWS_AS(parse_spec("iid:-3"), SpecError);

    const std::string ex = write_temp("seq_explicit.txt", "# angles\n0.1\n\n0.2  # second\n0.3\n");
    const auto e = std::get<Explicit>(parse_spec("explicit:" + ex));
    REQUIRE(e.directions.size() == 3);
    CHECK(e.directions[1].theta() == doctest::Approx(0.2));
    std::remove(ex.c_str());

    const std::string fin = write_temp("seq_finite.txt", "0\n0.7853981633974483\n1.5707963267948966\nschedule indices 0 2 1 2\n");
    const auto f = std::get<FiniteSet>(parse_spec("finite:" + fin));
    CHECK(f.directions.size() == 3);
    CHECK(f.schedule == Schedule::indices);
    CHECK(direction(f, 2).theta() == doctest::Approx(kPi / 2));
    std::remove(fin.c_str());

    const std::string bad = write_temp("seq_bad.txt", "0.1\nzero\n");
    CHECK_THROWS_WITH_AS(parse_spec("explicit:" + bad), doctest::Contains("seq_bad.txt:2"), SpecError);
    std::remove(bad.c_str());
    CHECK_THROWS_AS(parse_spec("explicit:/nonexistent/angles.txt"), SpecError);
}

TEST_CASE("key-value round trip") {
    FiniteSet f;
    f.directions = {Direction(0.0), Direction(kPi / 4), Direction(kPi / 2)};
    f.schedule = Schedule::seeded_random;
    f.seed = 11;
    for (const DirectionSpec& spec : std::vector<DirectionSpec>{Kronecker{1.0}, PowerLaw{0.5, 0.75, 2}, IID{3}, f,
                                                                Explicit{{Direction(0.25), Direction(1.5)}}}) {
        const DirectionSpec back = spec_from_keys(spec_to_keys(spec));
        CHECK(back.index() == spec.index());
        const auto a = directions(spec, 2), b = directions(back, 2);
        CHECK(a[0].theta() == b[0].theta());
        CHECK(a[1].theta() == b[1].theta());
        CHECK(describe(spec) == describe(back));
    }
}
