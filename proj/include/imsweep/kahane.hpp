#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "imsweep/balayage.hpp"
#include "imsweep/conditions.hpp"
#include "imsweep/logmetrics.hpp"

namespace imsweep {

struct KahaneOptions {
    double blaschke_r0 = 1.0;
    double quad_tol = 1e-8;
};

/// Kahane outer density of a positive charge relative to a Lipschitz
/// candidate k: finiteness of J(|F - k|) with F the distribution function of
/// the genus-0 balayage. The verdict is relative to the supplied k; a "no"
/// never claims nonexistence over all Lipschitz functions.
inline ConditionVerdict kahane_outer_density(const AtomicCharge& mu,
                                             const std::function<double(double)>& k,
                                             double lipschitz_constant,
                                             KahaneOptions opt = {}) {
    if (!mu.is_positive())
        throw std::invalid_argument("kahane_outer_density: charge must be positive");
    ConditionVerdict v;

    const auto b = blaschke(mu, opt.blaschke_r0);
    if (b.holds == Verdict3::no)
        throw std::invalid_argument("kahane_outer_density: Blaschke condition fails");
    if (b.holds == Verdict3::inconclusive) {
        v.holds = Verdict3::inconclusive;
        v.notes.push_back("Blaschke precondition inconclusive");
        return v;
    }
    if (!std::isfinite(lipschitz_constant)) {
        v.holds = Verdict3::no;
        v.notes.push_back("candidate k has no finite Lipschitz constant");
        return v;
    }
    v.witness["lipschitz_k"] = lipschitz_constant;

    const auto bal = balayage_genus0(mu, {.check_blaschke = false});
    auto F = [&bal](double y) { return bal.line.distribution(y); };
    const auto j = J_tail([&](double y) { return std::abs(F(y) - k(y)); }, opt.quad_tol);
    v.witness["J"] = j.value;
    v.holds = j.converged ? Verdict3::yes : Verdict3::no;
    if (!j.converged) v.notes.push_back("logarithmic integral did not converge");
    return v;
}

inline ConditionVerdict kahane_outer_density(const AtomicCharge& mu,
                                             const PiecewiseLinear& k,
                                             KahaneOptions opt = {}) {
    return kahane_outer_density(
        mu, [&k](double y) { return k(y); }, k.lipschitz_constant(), opt);
}

}  // namespace imsweep
