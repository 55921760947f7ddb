#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "imsweep/entire.hpp"
#include "oracles.hpp"

using namespace imsweep;

namespace {

// divisor Z \ {0} truncated at |k| <= K, with the analytic two-sided tail
CanonicalProduct sin_product(long K) {
    Divisor d;
    for (long k = 1; k <= K; ++k) {
        d.atoms.push_back({cplx(double(k), 0.0), 1});
        d.atoms.push_back({cplx(-double(k), 0.0), 1});
    }
    TailDescriptor t;
    t.step = 1.0;
    t.first_index = K + 1;
    t.two_sided = true;
    return CanonicalProduct(std::move(d), 0, t);
}

double log_sinc_abs(cplx z) {  // log|sin(pi z)/(pi z)|
    return std::log(std::abs(std::sin(pi * z) / (pi * z)));
}

}  // namespace

TEST_CASE("log_abs basics") {
    const auto la = log_abs(CanonicalProduct(Divisor({{cplx(2, 0), 1}})), cplx(1, 0));
    CHECK(la.value == doctest::Approx(std::log(0.5 * std::exp(0.5))).epsilon(1e-14));
    CHECK(la.tail_bound == 0.0);

    CHECK(log_abs(CanonicalProduct{}, cplx(3, 4)).value == 0.0);

    const auto hit = log_abs(CanonicalProduct(Divisor({{cplx(2, 0), 1}})), cplx(2, 0));
    CHECK(hit.hit_atom);
    CHECK(hit.value == -std::numeric_limits<double>::infinity());

    // monomial factor
    CanonicalProduct mono(Divisor{}, 2);
    CHECK(log_abs(mono, cplx(0, 3)).value == doctest::Approx(2.0 * std::log(3.0)));
    CHECK(log_abs(mono, cplx(0, 0)).hit_atom);
}

TEST_CASE("canonical product of the integers matches the sine identity") {
    const auto f = sin_product(10000);
    const auto at_i = log_abs(f, cplx(0, 1));
    CHECK(at_i.value ==
          doctest::Approx(std::log(std::sinh(pi) / pi)).epsilon(1e-6));
    CHECK(at_i.tail_bound <= 1e-8);

    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int it = 0; it < 100; ++it) {
        cplx z(u(rng), u(rng));
        if (std::abs(z.real() - std::round(z.real())) < 1e-3 && std::abs(z.imag()) < 1e-3)
            z += cplx(0.3, 0.2);  // keep clear of the zeros
        const auto la = log_abs(f, z);
        CHECK(la.value == doctest::Approx(log_sinc_abs(z))
                              .epsilon(1e-7 + la.tail_bound));
    }
}

TEST_CASE("tail descriptor rejects points outside its certified range") {
    TailDescriptor t;
    t.step = 1.0;
    t.first_index = 11;
    t.two_sided = true;
    CanonicalProduct f(Divisor({{cplx(1, 0), 1}}), 0, t);
    CHECK_THROWS_AS(log_abs(f, cplx(0, 20)), std::domain_error);
}

TEST_CASE("circle means and the Jensen values") {
    auto log_abs_z = [](cplx z) { return std::log(std::abs(z)); };
    const auto c1 = circle_mean(log_abs_z, cplx(0, 0), std::exp(1.0));
    CHECK(c1.converged);
    CHECK(c1.value == doctest::Approx(1.0).epsilon(1e-8));

    auto shifted = [](cplx z) { return std::log(std::abs(z - cplx(2, 0))); };
    const auto c2 = circle_mean(shifted, cplx(0, 0), 1.0);
    CHECK(c2.value == doctest::Approx(std::log(2.0)).epsilon(1e-8));

    auto inside = [](cplx z) { return std::log(std::abs(z - cplx(0.5, 0))); };
    const auto c3 = circle_mean(inside, cplx(0, 0), 1.0);
    CHECK(c3.value == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("Jensen identity for genus-1 factors") {
    // C_{log|E(./a;1)|}(0, r) = int_0^r n(t)/t dt = max(log(r/|a|), 0)
    for (double a : {0.4, 1.3, 2.5}) {
        CanonicalProduct f(Divisor({{cplx(a, 0), 1}}));
        for (double r : {1.0, 2.0}) {
            const auto c = circle_mean(log_abs_fn(f), cplx(0, 0), r, 1e-9);
            CHECK(c.value ==
                  doctest::Approx(std::max(std::log(r / a), 0.0)).epsilon(1e-7));
        }
    }
}

TEST_CASE("disk means") {
    auto log_abs_z = [](cplx z) { return std::log(std::abs(z)); };
    const auto b = disk_mean(log_abs_z, cplx(0, 0), std::exp(1.0));
    CHECK(b.converged);
    CHECK(b.value == doctest::Approx(0.5).epsilon(1e-6));

    const auto bc = disk_mean([](cplx) { return 3.25; }, cplx(1, 1), 2.0);
    CHECK(bc.value == doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("sup on circle") {
    auto logsin = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
    const auto m = sup_on_circle(logsin, cplx(0, 0), 10.0);
    CHECK(m.value == doctest::Approx(pi * 10.0 - std::log(2.0)).epsilon(0.01));

    const auto mre = sup_on_circle([](cplx z) { return z.real(); }, cplx(0, 0), 1.0);
    CHECK(mre.value == doctest::Approx(1.0).epsilon(1e-6));

    const auto mz = sup_on_circle([](cplx) { return 0.0; }, cplx(0, 0), 1.0);
    CHECK(mz.value == doctest::Approx(0.0));
}

TEST_CASE("means are ordered: B <= C <= M for subharmonic evaluators") {
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 12; ++it) {
        const auto d = oracle::random_divisor(rng, 10, 0.5, 10.0);
        CanonicalProduct f(d);
        auto v = log_abs_fn(f);
        const cplx z(4.0 * (u(rng) - 0.5), 4.0 * (u(rng) - 0.5));
        const double r = 0.5 + 2.0 * u(rng);
        const double B = disk_mean(v, z, r, 1e-7).value;
        const double C = circle_mean(v, z, r, 1e-8).value;
        const double M = sup_on_circle(v, z, r).value;
        CHECK(B <= C + 1e-5);
        CHECK(C <= M + 1e-5);
    }
}

TEST_CASE("mean value property on atom-free disks") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 8; ++it) {
        const auto d = oracle::random_divisor(rng, 8, 0.5, 5.0);
        CanonicalProduct f(d);
        auto v = log_abs_fn(f);
        // pick a disk well away from every atom
        const cplx z(8.0 + 2.0 * u(rng), 8.0 + 2.0 * u(rng));
        double rho = 1.0;
        for (const auto& a : d.atoms)
            rho = std::min(rho, 0.8 * std::abs(z - a.location));
        const auto c = circle_mean(v, z, rho, 1e-9);
        CHECK(std::abs(c.value - v(z)) <= 1e-6);
    }
}

TEST_CASE("growth report on closed forms") {
    auto logsin = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
    const auto radii = geometric_points(4.0, 2000.0, 1.35);
    const auto rep = growth_report(logsin, radii, {0.0, pi / 2.0, -pi / 2.0});
    CHECK(rep.type1 == doctest::Approx(pi).epsilon(0.01 / pi));
    CHECK(rep.indicator[1].second == doctest::Approx(pi).epsilon(0.02 / pi));
    CHECK(rep.indicator[2].second == doctest::Approx(pi).epsilon(0.02 / pi));
    CHECK(rep.order == doctest::Approx(1.0).epsilon(0.2));

    const auto lin = growth_report([](cplx z) { return z.real(); },
                                   geometric_points(1.0, 100.0, 2.0), {0.0, pi});
    CHECK(lin.type1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lin.indicator[0].second == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lin.indicator[1].second == doctest::Approx(-1.0).epsilon(1e-6));

    const auto zero = growth_report([](cplx) { return 0.0; },
                                    geometric_points(1.0, 64.0, 2.0), {0.0});
    CHECK(zero.type1 == doctest::Approx(0.0));
}

TEST_CASE("growth report is independent of the worker thread count") {
    auto logsin = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
    const auto radii = geometric_points(2.0, 200.0, 1.6);
    const auto base = growth_report(logsin, radii, {0.0, pi / 2.0});
    setenv("IMSWEEP_THREADS", "3", 1);
    const auto threaded = growth_report(logsin, radii, {0.0, pi / 2.0});
    unsetenv("IMSWEEP_THREADS");
    CHECK(base.type1 == threaded.type1);  // bitwise: work is index-partitioned
    CHECK(base.profile.rows == threaded.profile.rows);
}

TEST_CASE("self-comparison sanity for the majorant checkers") {
    std::mt19937 rng(73);
    for (int it = 0; it < 5; ++it) {
        const auto d = oracle::random_divisor(rng, 12, 0.5, 20.0);
        CanonicalProduct f(d);
        auto v = log_abs_fn(f);
        const std::vector<double> ys = {1.0, -1.0, 2.5, -2.5, 6.0, -6.0};
        const auto a3 = check_a3(v, v, [](double) { return 1.0; }, 1.0, ys);
        CHECK(a3.holds == Verdict3::yes);
        const auto c3 = check_b3_c3(v, v, {}, GrowthMode::c3, 0.5, ys);
        CHECK(c3.holds == Verdict3::yes);
        const auto b3 = check_b3_c3(
            v, v, [](double y) { return std::sqrt(std::abs(y)) + 0.1; }, GrowthMode::b3,
            0.0, ys);
        CHECK(b3.holds == Verdict3::yes);
    }
}

TEST_CASE("a3 rejects unbounded growth against a flat majorant") {
    auto logsin = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
    auto flat = [](cplx) { return 0.0; };
    const std::vector<double> ys = {2.0, -2.0, 8.0, -8.0, 32.0, -32.0};
    CHECK(check_a3(logsin, flat, [](double) { return 1.0; }, 1.0, ys).holds ==
          Verdict3::no);
    CHECK(check_a3([](cplx) { return -1.0; }, flat, [](double) { return 1.0; }, 1.0,
                   ys).holds == Verdict3::yes);
    CHECK_THROWS_AS(check_a3(flat, flat, [](double) { return -1.0; }, 1.0, ys),
                    std::invalid_argument);
}

TEST_CASE("b3 validates sublinearity of q and accepts flat data") {
    auto zero = [](cplx) { return 0.0; };
    const std::vector<double> ys = {2.0, -2.0, 8.0, -8.0, 32.0, -32.0};
    // q proportional to |y| is not o(|y|): rejected with a note
    const auto bad = check_b3_c3(zero, zero, [](double y) { return std::abs(y); },
                                 GrowthMode::b3, 0.0, ys);
    CHECK(bad.holds == Verdict3::no);
    REQUIRE(!bad.notes.empty());
    CHECK(bad.notes.front().find("vanish") != std::string::npos);
    // U = M = 0 passes trivially
    const auto ok = check_b3_c3(zero, zero, [](double y) { return std::sqrt(std::abs(y)); },
                                GrowthMode::b3, 0.0, ys);
    CHECK(ok.holds == Verdict3::yes);
}

TEST_CASE("c3 verdict tracks the epsilon budget on the sine model") {
    auto logsin = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
    auto surrogate = [](cplx z) { return (pi + 0.1) * std::abs(z.imag()); };
    // the 0.1 type excess is absorbed by eps = 0.2 only once eps|y| clears
    // the log 2 offset of the sine majorant, so samples start at |y| = 8
    const std::vector<double> ys = {8.0, -8.0, 16.0, -16.0, 64.0, -64.0};
    CHECK(check_b3_c3(surrogate, logsin, {}, GrowthMode::c3, 0.2, ys).holds ==
          Verdict3::yes);
    CHECK(check_b3_c3(surrogate, logsin, {}, GrowthMode::c3, 0.01, ys).holds ==
          Verdict3::no);
    CHECK_THROWS_AS(check_b3_c3(surrogate, logsin, {}, GrowthMode::c3, -0.1, ys),
                    std::invalid_argument);
}

TEST_CASE("a1 bound checker") {
    auto zero = [](cplx) { return 0.0; };
    const std::vector<double> ys = {1.0, -1.0, 3.0, -3.0};
    SUBCASE("trivial equality case") {
        const auto v = check_a1_bound(zero, CanonicalProduct{}, zero, 0.0, ys);
        CHECK(v.holds == Verdict3::yes);
        CHECK(v.witness.at("type1_of_sum") == doctest::Approx(0.0));
    }
    SUBCASE("positive constant exceeds the zero majorant") {
        const auto v = check_a1_bound([](cplx) { return 1.0; }, CanonicalProduct{}, zero,
                                      0.0, ys);
        CHECK(v.holds == Verdict3::no);
    }
    SUBCASE("samples on zeros of f are excluded") {
        CanonicalProduct f(Divisor({{cplx(0, 1), 1}}));
        const auto v = check_a1_bound(zero, f, zero, 0.0, {1.0, -1.0, 2.0});
        CHECK(v.witness.at("excluded_samples") == doctest::Approx(1.0));
    }
    SUBCASE("sine-model majorant dominates its own zero product on the axis") {
        // log|f(iy)| = log(sinh pi|y|) - log(pi|y|) <= M(iy) <= B_M(iy, rho)
        const auto f = sin_product(200);
        auto M = [](cplx z) { return std::log(std::abs(std::sin(pi * z))); };
        const std::vector<double> ys = {1.0, -1.0, 4.0, -4.0, 16.0};
        const auto ok = check_a1_bound(zero, f, M, 1.0, ys);
        CHECK(ok.holds == Verdict3::yes);
        CHECK(ok.witness.at("type1_of_sum") == doctest::Approx(pi).epsilon(0.2));
        // shifting the majorant down by 5 breaks the bound near |y| = 1
        auto M_low = [&](cplx z) { return M(z) - 5.0; };
        CHECK(check_a1_bound(zero, f, M_low, 1.0, ys).holds == Verdict3::no);
    }
}
