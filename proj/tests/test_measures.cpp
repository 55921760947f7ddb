#include <doctest.h>

#include <cmath>
#include <random>

#include "imsweep/measures.hpp"
#include "oracles.hpp"

using namespace imsweep;

TEST_CASE("counting_radial counts closed disks") {
    Divisor d({{cplx(1, 0), 1}, {cplx(2, 0), 1}, {cplx(3, 0), 1}});
    CHECK(counting_radial(d, 2.5) == doctest::Approx(2.0));
    CHECK(counting_radial(d, 3.0) == doctest::Approx(3.0));  // boundary included

    AtomicCharge c({{cplx(1, 0), 1.0}, {cplx(-1, 0), -1.0}});
    CHECK(counting_radial(c, 1.0) == doctest::Approx(0.0));

    CHECK(counting_radial(oracle::naturals(10), 10.0) == doctest::Approx(10.0));
    CHECK(counting_radial(AtomicCharge{}, 5.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(counting_radial(AtomicCharge{}, -1.0), std::invalid_argument);
}

TEST_CASE("counting_radial monotone for positive charges, additive over parts") {
    std::mt19937 rng(11);
    for (int it = 0; it < 20; ++it) {
        const auto c = oracle::random_charge(rng);
        const auto pos = c.positive_part(), neg = c.negative_part();
        double prev = 0.0;
        for (double r : {0.5, 1.0, 5.0, 20.0, 100.0}) {
            const double v = counting_radial(pos, r);
            CHECK(v >= prev - 1e-15);
            prev = v;
            CHECK(counting_radial(c.absolute(), r) ==
                  doctest::Approx(counting_radial(pos, r) + counting_radial(neg, r))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("distribution_on_line follows the two-sided sign convention") {
    SUBCASE("single upper atom") {
        const auto lc = distribution_on_line(AtomicCharge({{cplx(0, 1), 1.0}}));
        CHECK(lc.distribution(0.5) == doctest::Approx(0.0));
        CHECK(lc.distribution(1.0) == doctest::Approx(1.0));
        CHECK(lc.distribution(7.0) == doctest::Approx(1.0));
        CHECK(lc.distribution(-2.0) == doctest::Approx(0.0));
    }
    SUBCASE("single lower atom") {
        const auto lc = distribution_on_line(AtomicCharge({{cplx(0, -1), 1.0}}));
        CHECK(lc.distribution(-2.0) == doctest::Approx(-1.0));
        CHECK(lc.distribution(-1.0) == doctest::Approx(-1.0));
        CHECK(lc.distribution(-0.5) == doctest::Approx(0.0));
        CHECK(lc.distribution(3.0) == doctest::Approx(0.0));
    }
    SUBCASE("empty charge") {
        const auto lc = distribution_on_line(AtomicCharge{});
        CHECK(lc.distribution(-3.0) == 0.0);
        CHECK(lc.distribution(4.0) == 0.0);
    }
    SUBCASE("off-axis atom rejected") {
        CHECK_THROWS_AS(distribution_on_line(AtomicCharge({{cplx(1e-16, 1), 1.0}})),
                        std::invalid_argument);
    }
}

TEST_CASE("distribution jumps reproduce interval charges") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int it = 0; it < 20; ++it) {
        AtomicCharge c;
        for (int i = 0; i < 8; ++i) c.atoms.push_back({cplx(0.0, u(rng)), u(rng)});
        c = c.canonicalized();
        const auto lc = distribution_on_line(c);
        for (int i = 0; i < 10; ++i) {
            double y1 = u(rng), y2 = u(rng);
            if (y1 > y2) std::swap(y1, y2);
            double direct = 0.0;
            for (const auto& a : c.atoms) {
                const double v = a.location.imag();
                if (v > y1 && v <= y2) direct += a.mass;
            }
            CHECK(lc.distribution(y2) - lc.distribution(y1) ==
                  doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("positive line charges have a monotone split at zero") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int it = 0; it < 20; ++it) {
        AtomicCharge c;
        for (int i = 0; i < 6; ++i) c.atoms.push_back({cplx(0.0, u(rng)), 0.1 - u(rng) / 10.0 + 0.6});
        const auto lc = distribution_on_line(c.canonicalized());
        const double eps = 1e-9;
        CHECK(lc.distribution(-eps) <= 0.0);
        CHECK(lc.distribution(0.0) >= 0.0);
    }
}

TEST_CASE("upper_density_profile") {
    CHECK(upper_density_profile(oracle::naturals(100), {100.0}).back() ==
          doctest::Approx(1.0));
    CHECK(upper_density_profile(AtomicCharge({{cplx(1, 0), 5.0}}), {10.0}).back() ==
          doctest::Approx(0.5));
    Divisor squares;
    for (long k = 1; k <= 100; ++k)
        squares.atoms.push_back({cplx(static_cast<double>(k) * k, 0.0), 1});
    CHECK(upper_density_profile(squares, {100.0 * 100.0}).back() ==
          doctest::Approx(0.01));
}

TEST_CASE("canonicalization merges, drops zeros, preserves mass") {
    AtomicCharge c({{cplx(1, 1), 2.0}, {cplx(1, 1), 3.0}, {cplx(2, 0), 1.5},
                    {cplx(3, 0), 1.0}, {cplx(3, 0), -1.0}});
    const auto k = c.canonicalized();
    CHECK(k.atoms.size() == 2);
    CHECK(k.total_mass() == doctest::Approx(c.total_mass()));
    const auto kk = k.canonicalized();
    CHECK(kk.atoms.size() == k.atoms.size());  // idempotent
    // positive charges preserve total variation
    std::mt19937 rng(3);
    for (int it = 0; it < 10; ++it) {
        auto p = oracle::random_charge(rng, 30, 0.1, 10.0, /*positive=*/true);
        p.atoms.push_back(p.atoms.front());  // force a duplicate location
        CHECK(p.canonicalized().total_variation() ==
              doctest::Approx(p.total_variation()).epsilon(1e-12));
    }
    // rounding precision merges nearby locations
    AtomicCharge near({{cplx(1.0000004, 0), 1.0}, {cplx(0.9999996, 0), 1.0}});
    CHECK(near.canonicalized().atoms.size() == 2);
    CHECK(near.canonicalized(5).atoms.size() == 1);
}

TEST_CASE("IntervalGrid validation and restriction") {
    CHECK_THROWS_AS(IntervalGrid::geometric(0.5, 10.0, 2.0), std::invalid_argument);
    const auto g = IntervalGrid::geometric(1.0, 64.0, 2.0);
    for (const auto& [r, R] : g.pairs) {
        CHECK(r >= 1.0);
        CHECK(R > r);
    }
    const auto h = g.restricted_to(8.0);
    CHECK(!h.pairs.empty());
    CHECK(h.pairs.size() < g.pairs.size());
    CHECK(g.max_R() == doctest::Approx(64.0));
}
