#include <doctest.h>

#include <cmath>

#include "imsweep/quadrature.hpp"
#include "oracles.hpp"

using namespace imsweep;

TEST_CASE("polynomials are integrated exactly by the Kronrod rule") {
    auto q = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0, 1e-12);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("smooth transcendental integrand to tight tolerance") {
    auto q = integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("integrable log singularity inside the range") {
    // int_0^1 log(x) dx = -1; the singular endpoint sample is non-finite
    auto q = integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("interior spike from |log|") {
    auto q = integrate([](double x) { return std::log(std::abs(x - 0.3)); }, 0.0, 1.0, 1e-10);
    // exact: (x-0.3)log|x-0.3| - x piecewise -> 0.7 log 0.7 + 0.3 log 0.3 - 1
    const double exact = 0.7 * std::log(0.7) + 0.3 * std::log(0.3) - 1.0;
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("orientation sign") {
    auto q = integrate([](double x) { return x; }, 1.0, 0.0, 1e-12);
    CHECK(q.value == doctest::Approx(-0.5));
}

TEST_CASE("fully non-finite integrands terminate without converging") {
    auto q = integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                       0.0, 1.0, 1e-10);
    CHECK(!q.converged);
    auto p = integrate([](double x) { return 1.0 / (x - 0.5); }, 0.4, 0.6, 1e-10);
    CHECK(!p.converged);  // non-integrable pole: error budget blows up
}

TEST_CASE("agreement with a naive Simpson oracle on an oscillatory integrand") {
    auto f = [](double x) { return std::sin(7.0 * x) / (1.0 + x * x); };
    auto q = integrate(f, 0.0, 10.0, 1e-11);
    const double s = oracle::simpson(f, 0.0, 10.0, 200000);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(s).epsilon(1e-8));
}
