#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "imsweep/core.hpp"
#include "imsweep/measures.hpp"
#include "imsweep/quadrature.hpp"

namespace imsweep {

// ---------------------------------------------------------------------------
// Genus-1 canonical products
// ---------------------------------------------------------------------------

/// Analytic description of the omitted tail of a model divisor: atoms at
/// step*n for n >= first_index (and at -step*n when two_sided). Everything
/// with |atom| below that range must already be listed in the finite divisor.
struct TailDescriptor {
    double step = 0.0;  // 0 disables the analytic tail
    long first_index = 0;
    bool two_sided = false;

    bool active() const { return step > 0.0 && first_index > 0; }
};

/// Genus-1 Weierstrass-Hadamard product over a finite divisor, with an
/// optional monomial factor z^m and an optional analytic tail.
/// log|f(z)| = m log|z| + sum mult * log|E(z/z_k; 1)|,  E(w;1) = (1-w) e^w.
struct CanonicalProduct {
    Divisor divisor;
    long monomial_degree = 0;
    TailDescriptor tail;

    CanonicalProduct() = default;
    CanonicalProduct(Divisor d, long m = 0, TailDescriptor t = {})
        : divisor(std::move(d)), monomial_degree(m), tail(t) {
        for (const auto& a : divisor.atoms)
            if (a.location == cplx{0.0, 0.0})
                throw std::invalid_argument(
                    "CanonicalProduct: atom at 0 must go into the monomial factor");
    }
};

struct LogAbsValue {
    double value = 0.0;
    double tail_bound = 0.0;  // certified bound on the omitted-tail error
    bool hit_atom = false;    // z landed exactly on an atom: value is -inf
};

namespace detail {

// sum_{n > K} n^{-j} by Euler-Maclaurin at a = K+1; relative error ~ a^{-6}.
inline double zeta_tail(int j, long K) {
    const double a = static_cast<double>(K) + 1.0;
    const double ja = static_cast<double>(j);
    double s = std::pow(a, 1.0 - ja) / (ja - 1.0);
    s += 0.5 * std::pow(a, -ja);
    s += ja / 12.0 * std::pow(a, -ja - 1.0);
    s -= ja * (ja + 1.0) * (ja + 2.0) / 720.0 * std::pow(a, -ja - 3.0);
    s += ja * (ja + 1.0) * (ja + 2.0) * (ja + 3.0) * (ja + 4.0) / 30240.0 *
         std::pow(a, -ja - 5.0);
    return s;
}

struct TailCorrection {
    double value = 0.0;
    double bound = 0.0;
};

// Closed-form correction for the omitted log|E| sum over an arithmetic
// progression, from the expansion log|E(w;1)| = -Re sum_{j>=2} w^j / j.
// Requires |z| < step*(first_index)/2 so the series certifies.
inline TailCorrection progression_tail(const TailDescriptor& t, cplx z) {
    TailCorrection out;
    if (!t.active() || z == cplx{0.0, 0.0}) return out;
    const long K = t.first_index - 1;
    const double h = t.step;
    const double q = std::abs(z) / (h * (static_cast<double>(K) + 1.0));
    if (q >= 0.5)
        throw std::domain_error(
            "CanonicalProduct: evaluation point too large for the analytic tail");
    constexpr int J = 16;
    if (t.two_sided) {
        // pairs E(w)E(-w) = 1 - w^2: log|..| = Re log(1-u), u = (z/(hn))^2
        cplx zp = z * z;  // z^{2j}
        const cplx z2 = z * z;
        double hp = h * h;
        for (int j = 1; 2 * j <= J; ++j) {
            out.value -= zp.real() / (static_cast<double>(j) * hp) * zeta_tail(2 * j, K);
            zp *= z2;
            hp *= h * h;
        }
        const double qq = q * q;
        out.bound = (static_cast<double>(K) + 1.0) * std::pow(qq, J / 2 + 1) /
                    ((J / 2) * (J + 1) * (1.0 - qq));
    } else {
        cplx zp = z * z;  // z^j starting at j = 2
        double hp = h * h;
        for (int j = 2; j <= J; ++j) {
            out.value -= zp.real() / (static_cast<double>(j) * hp) * zeta_tail(j, K);
            zp *= z;
            hp *= h;
        }
        out.bound = 2.0 * (static_cast<double>(K) + 1.0) * std::pow(q, J + 1) /
                    (static_cast<double>(J) * (J + 1) * (1.0 - q));
    }
    return out;
}

}  // namespace detail

/// log|f(z)| of the product, with a certified bound for the analytic tail.
inline LogAbsValue log_abs(const CanonicalProduct& p, cplx z) {
    LogAbsValue out;
    std::vector<double> terms;
    terms.reserve(p.divisor.atoms.size() + 2);
    if (p.monomial_degree != 0) {
        if (z == cplx{0.0, 0.0}) {
            out.value = -std::numeric_limits<double>::infinity();
            out.hit_atom = true;
            return out;
        }
        terms.push_back(static_cast<double>(p.monomial_degree) * std::log(std::abs(z)));
    }
    for (const auto& a : p.divisor.atoms) {
        if (z == a.location) {
            out.value = -std::numeric_limits<double>::infinity();
            out.hit_atom = true;
            return out;
        }
        const cplx w = z / a.location;
        terms.push_back(static_cast<double>(a.multiplicity) *
                        (std::log(std::abs(1.0 - w)) + w.real()));
    }
    const auto tc = detail::progression_tail(p.tail, z);
    terms.push_back(tc.value);
    out.value = pairwise_sum(terms);
    out.tail_bound = tc.bound;
    return out;
}

/// Plain evaluator form, for plugging into means and growth reports.
inline std::function<double(cplx)> log_abs_fn(const CanonicalProduct& p) {
    return [p](cplx z) { return log_abs(p, z).value; };
}

// ---------------------------------------------------------------------------
// Circle / disk means and circle suprema
// ---------------------------------------------------------------------------

struct MeanResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
};

/// C_v(z, r) = (1/2pi) int_0^{2pi} v(z + r e^{i theta}) d theta.
/// Integrable log-singularities on the circle are isolated by the adaptive
/// subdivision; a persistent non-integrable sample fails the tolerance.
inline MeanResult circle_mean(const std::function<double(cplx)>& v, cplx z, double r,
                              double abs_tol = 1e-8) {
    if (!(r >= 0.0)) throw std::invalid_argument("circle_mean: r must be >= 0");
    if (r == 0.0) return {v(z), 0.0, true};
    auto q = integrate(
        [&](double th) { return v(z + r * cplx(std::cos(th), std::sin(th))); }, 0.0,
        2.0 * pi, abs_tol * 2.0 * pi);
    return {q.value / (2.0 * pi), q.abs_error / (2.0 * pi), q.converged};
}

/// B_v(z, r) = (2/r^2) int_0^r C_v(z, t) t dt.
inline MeanResult disk_mean(const std::function<double(cplx)>& v, cplx z, double r,
                            double abs_tol = 1e-7) {
    if (!(r > 0.0)) throw std::invalid_argument("disk_mean: r must be > 0");
    double inner_err = 0.0;
    bool inner_ok = true;
    auto q = integrate(
        [&](double t) {
            auto c = circle_mean(v, z, t, abs_tol * 0.5);
            inner_err = std::max(inner_err, c.abs_error);
            inner_ok = inner_ok && c.converged;
            return c.value * t;
        },
        0.0, r, abs_tol * 0.5 * r * r);
    const double scale = 2.0 / (r * r);
    return {q.value * scale, q.abs_error * scale + inner_err, q.converged && inner_ok};
}

struct CircleSup {
    double value = -std::numeric_limits<double>::infinity();
    double theta = 0.0;
    int samples = 0;
};

/// M_v(z, r): maximum of v over the circle, from a theta sample grid with
/// local dyadic refinement around the best sample. Reported value is a lower
/// bound for the true supremum.
inline CircleSup sup_on_circle(const std::function<double(cplx)>& v, cplx z, double r,
                               int samples = 64, int refine_rounds = 6) {
    if (!(r > 0.0)) throw std::invalid_argument("sup_on_circle: r must be > 0");
    CircleSup out;
    auto probe = [&](double th) {
        const double val = v(z + r * cplx(std::cos(th), std::sin(th)));
        ++out.samples;
        if (std::isfinite(val) && val > out.value) {
            out.value = val;
            out.theta = th;
        }
    };
    const int n = std::max(8, samples);
    for (int i = 0; i < n; ++i) probe(2.0 * pi * i / n);
    double half_width = pi / n;
    for (int round = 0; round < refine_rounds; ++round) {
        const double c = out.theta;
        for (int i = -4; i <= 4; ++i) probe(c + half_width * i / 4.0);
        half_width *= 0.25;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Growth functionals
// ---------------------------------------------------------------------------

struct GrowthReport {
    double type1 = 0.0;  // tail sup of M_v(r) / r
    double order = 0.0;  // tail sup of log(1 + M_v^+(r)) / log r
    std::vector<std::pair<double, double>> indicator;  // theta -> tail sup v(r e^{i theta})/r
    std::vector<double> radii;
    EvidenceProfile profile;  // r, M_v(r), M_v(r)/r
};

inline GrowthReport growth_report(const std::function<double(cplx)>& v,
                                  const std::vector<double>& radii,
                                  const std::vector<double>& thetas,
                                  double tail_fraction = 0.5, int circle_samples = 128) {
    if (radii.empty() || thetas.empty())
        throw std::invalid_argument("growth_report: empty grids");
    GrowthReport rep;
    rep.radii = radii;
    rep.profile.columns = {"r", "M", "M_over_r"};
    std::vector<double> type_vals, order_vals, order_radii;
    std::vector<double> Ms(radii.size());
    parallel_for_index(radii.size(), [&](std::size_t i) {
        Ms[i] = sup_on_circle(v, 0.0, radii[i], circle_samples).value;
    });
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double M = Ms[i];
        rep.profile.add_row({r, M, M / r});
        type_vals.push_back(M / r);
        if (r > 1.0 + 1e-9) {
            order_vals.push_back(std::log1p(std::max(0.0, M)) / std::log(r));
            order_radii.push_back(r);
        }
    }
    rep.type1 = tail_sup(radii, type_vals, tail_fraction);
    rep.order = order_radii.empty() ? 0.0 : tail_sup(order_radii, order_vals, tail_fraction);
    for (double th : thetas) {
        std::vector<double> vals;
        vals.reserve(radii.size());
        for (double r : radii) {
            const double s = v(r * cplx(std::cos(th), std::sin(th)));
            vals.push_back(std::isfinite(s) ? s / r
                                            : -std::numeric_limits<double>::infinity());
        }
        rep.indicator.emplace_back(th, tail_sup(radii, vals, tail_fraction));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Growth-majorant inequality checkers
// ---------------------------------------------------------------------------

struct CheckOptions {
    double tolerance = 1e-6;   // base slack for hard inequalities
    double extra_tol = 0.0;    // certified evaluation error of the inputs
    double circle_tol = 1e-8;
    double vanish_threshold = 0.05;  // sublinear-slack acceptance level
};

// local J(q) helper so entire.hpp does not depend on logmetrics.hpp
inline std::pair<double, bool> J_tail_local(const std::function<double(double)>& v_of_y,
                                            double abs_tol) {
    auto q = integrate([&](double t) { return v_of_y(1.0 / t) + v_of_y(-1.0 / t); }, 0.0,
                       1.0, abs_tol);
    return {q.value, q.converged};
}

/// U(iy) <= C_M(iy, q(iy)) + q(iy) for all |y| >= y0.
/// q must be positive, nondecreasing along +iR and nonincreasing along -iR
/// (as a function of y on the negative ray), with J(q) finite.
inline ConditionVerdict check_a3(const std::function<double(cplx)>& U,
                                 const std::function<double(cplx)>& M,
                                 const std::function<double(double)>& q_of_y, double y0,
                                 const std::vector<double>& ys, CheckOptions opt = {}) {
    ConditionVerdict v;
    v.profile.columns = {"y", "U", "C_M", "q", "violation"};

    std::vector<double> pos, neg;
    for (double y : ys) {
        if (!(q_of_y(y) > 0.0)) throw std::invalid_argument("check_a3: q must be positive");
        (y > 0.0 ? pos : neg).push_back(y);
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    for (std::size_t i = 0; i + 1 < pos.size(); ++i)
        if (q_of_y(pos[i + 1]) < q_of_y(pos[i]) - 1e-12)
            throw std::invalid_argument("check_a3: q not increasing on the positive ray");
    for (std::size_t i = 0; i + 1 < neg.size(); ++i)
        if (q_of_y(neg[i + 1]) > q_of_y(neg[i]) + 1e-12)
            throw std::invalid_argument("check_a3: q not decreasing on the negative ray");
    const auto jq = J_tail_local(q_of_y, opt.circle_tol);
    if (!jq.second) {
        v.holds = Verdict3::no;
        v.notes.push_back("J(q) quadrature did not converge");
        return v;
    }
    v.witness["J_q"] = jq.first;

    double worst = -std::numeric_limits<double>::infinity();
    for (double y : ys) {
        if (std::abs(y) < y0) continue;
        const double u = U(cplx(0.0, y));
        const double q = q_of_y(y);
        const auto c = circle_mean(M, cplx(0.0, y), q, opt.circle_tol);
        const double viol = std::isfinite(u)
                                ? u - c.value - q
                                : -std::numeric_limits<double>::infinity();
        v.profile.add_row({y, u, c.value, q, viol});
        worst = std::max(worst, viol);
    }
    v.witness["max_violation"] = worst;
    v.witness["y0"] = y0;
    v.holds = (worst <= opt.tolerance + opt.extra_tol) ? Verdict3::yes : Verdict3::no;
    return v;
}

enum class GrowthMode { b3, c3 };

/// b3: U(iy) <= C_M(iy, q(iy)) + o(|y|), with q(iy) = o(|y|) validated on the
/// tail and the fitted slack/|y| profile required to fall below the
/// vanish threshold at the largest samples.
/// c3: U(iy) <= C_M(iy, eps|y|) + eps|y| as a hard pointwise inequality.
inline ConditionVerdict check_b3_c3(const std::function<double(cplx)>& U,
                                    const std::function<double(cplx)>& M,
                                    const std::function<double(double)>& q_of_y,
                                    GrowthMode mode, double eps,
                                    const std::vector<double>& ys, CheckOptions opt = {}) {
    ConditionVerdict v;
    if (mode == GrowthMode::c3 && !(eps > 0.0))
        throw std::invalid_argument("check_b3_c3: c3 requires eps > 0");
    v.profile.columns = {"y", "U", "C_M", "q", "slack_over_y"};

    auto q_at = [&](double y) {
        return (mode == GrowthMode::c3) ? eps * std::abs(y) : q_of_y(y);
    };

    if (mode == GrowthMode::b3) {
        // validate q(iy) = o(|y|) on the sampled tail
        std::vector<double> ay, ratio;
        for (double y : ys) {
            ay.push_back(std::abs(y));
            ratio.push_back(q_of_y(y) / std::abs(y));
        }
        std::vector<std::size_t> idx(ay.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return ay[a] < ay[b]; });
        if (ratio[idx.back()] > 0.5 * ratio[idx.front()] &&
            ratio[idx.back()] > opt.vanish_threshold) {
            v.holds = Verdict3::no;
            v.notes.push_back("q(iy)/|y| does not vanish on the sampled tail");
            return v;
        }
    }

    double worst_hard = -std::numeric_limits<double>::infinity();
    std::vector<double> ay_sorted, slack_ratio;
    for (double y : ys) {
        const double u = U(cplx(0.0, y));
        const double q = q_at(y);
        const auto c = circle_mean(M, cplx(0.0, y), q, opt.circle_tol);
        const double slack = std::isfinite(u) ? u - c.value
                                              : -std::numeric_limits<double>::infinity();
        v.profile.add_row({y, u, c.value, q,
                           std::isfinite(slack) ? std::max(0.0, slack) / std::abs(y) : 0.0});
        if (mode == GrowthMode::c3)
            worst_hard = std::max(worst_hard, slack - eps * std::abs(y));
        else {
            ay_sorted.push_back(std::abs(y));
            slack_ratio.push_back(std::isfinite(slack) ? std::max(0.0, slack) / std::abs(y)
                                                       : 0.0);
        }
    }

    if (mode == GrowthMode::c3) {
        v.witness["max_violation"] = worst_hard;
        v.holds = (worst_hard <= opt.tolerance + opt.extra_tol) ? Verdict3::yes : Verdict3::no;
        return v;
    }
    std::vector<std::size_t> idx(ay_sorted.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](auto a, auto b) { return ay_sorted[a] < ay_sorted[b]; });
    const double tail_value = slack_ratio[idx.back()];
    v.witness["tail_slack_over_y"] = tail_value;
    v.holds = (tail_value <= opt.vanish_threshold) ? Verdict3::yes : Verdict3::no;
    return v;
}

/// u(iy) + log|f(iy)| <= B_M(iy, (1+|y|)^{-p}) at the samples, plus a growth
/// report of u + log|f| as the finite-type evidence. Samples landing on a
/// zero of f contribute -inf and are excluded (the bound holds trivially).
inline ConditionVerdict check_a1_bound(const std::function<double(cplx)>& u,
                                       const CanonicalProduct& f,
                                       const std::function<double(cplx)>& M, double p,
                                       const std::vector<double>& ys, CheckOptions opt = {}) {
    if (!(p >= 0.0)) throw std::invalid_argument("check_a1_bound: p must be >= 0");
    ConditionVerdict v;
    v.profile.columns = {"y", "lhs", "B_M", "violation"};
    double worst = -std::numeric_limits<double>::infinity();
    int excluded = 0;
    for (double y : ys) {
        const auto la = log_abs(f, cplx(0.0, y));
        if (la.hit_atom) {
            ++excluded;
            continue;
        }
        const double lhs = u(cplx(0.0, y)) + la.value;
        const double rho = std::pow(1.0 + std::abs(y), -p);
        const auto b = disk_mean(M, cplx(0.0, y), rho, opt.circle_tol * 10.0);
        const double viol = lhs - b.value;
        v.profile.add_row({y, lhs, b.value, viol});
        worst = std::max(worst, viol + la.tail_bound);
    }
    v.witness["max_violation"] = worst;
    v.witness["excluded_samples"] = excluded;

    auto combined = [&](cplx z) { return u(z) + log_abs(f, z).value; };
    double rmax = 10.0;
    for (const auto& a : f.divisor.atoms) rmax = std::max(rmax, 2.0 * std::abs(a.location));
    if (f.tail.active())  // stay inside the certified range of the analytic tail
        rmax = std::min(rmax, 0.45 * f.tail.step * static_cast<double>(f.tail.first_index));
    if (rmax > 2.0) {
        const auto rep = growth_report(combined, geometric_points(1.0, rmax, 1.5),
                                       {0.0, pi / 2.0, pi, -pi / 2.0});
        v.witness["type1_of_sum"] = rep.type1;
    } else {
        v.notes.push_back("growth report skipped: certified evaluation range too small");
    }
    v.holds = (worst <= opt.tolerance + opt.extra_tol) ? Verdict3::yes : Verdict3::no;
    return v;
}

}  // namespace imsweep
