#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "imsweep/core.hpp"
#include "imsweep/measures.hpp"
#include "imsweep/quadrature.hpp"

namespace imsweep {

enum class HalfPlane { right, left };
enum class CosWeight { cos_plus, cos_minus };

/// Additive function of radius intervals (r, R], 0 < r < R.
class IntervalFunction {
  public:
    explicit IntervalFunction(std::function<double(double, double)> eval)
        : eval_(std::move(eval)) {}

    double operator()(double r, double R) const {
        if (!(r > 0.0) || !(R > r))
            throw std::invalid_argument("IntervalFunction: need 0 < r < R");
        return eval_(r, R);
    }

  private:
    std::function<double(double, double)> eval_;
};

namespace detail {

/// Per-charge radial prefix sums: cumulative weighted masses over closed
/// disks, queried with the half-open (r, R] interval convention.
struct RadialTable {
    std::vector<double> radius;     // ascending atom radii
    std::vector<double> cum_right;  // mass * Re(1/z) over Re z > 0
    std::vector<double> cum_left;   // mass * Re(-1/z) over Re z < 0
    std::vector<double> cum_wplus;  // mass * cos^+(arg z)
    std::vector<double> cum_wminus; // mass * cos^-(arg z)

    explicit RadialTable(const AtomicCharge& charge) {
        std::vector<std::pair<double, const ChargeAtom*>> order;
        order.reserve(charge.atoms.size());
        for (const auto& a : charge.atoms) order.emplace_back(std::abs(a.location), &a);
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        radius.reserve(order.size());
        cum_right.reserve(order.size());
        cum_left.reserve(order.size());
        cum_wplus.reserve(order.size());
        cum_wminus.reserve(order.size());
        double sr = 0.0, sl = 0.0, wp = 0.0, wm = 0.0;
        for (const auto& [rho, a] : order) {
            const double x = a->location.real();
            if (rho > 0.0) {
                const double inv_re = x / (rho * rho);  // Re(1/z)
                const double cosab = x / rho;           // cos(arg z)
                if (x > 0.0) {
                    sr += a->mass * inv_re;
                    wp += a->mass * cosab;
                } else if (x < 0.0) {
                    sl += a->mass * (-inv_re);
                    wm += a->mass * (-cosab);
                }
            }
            radius.push_back(rho);
            cum_right.push_back(sr);
            cum_left.push_back(sl);
            cum_wplus.push_back(wp);
            cum_wminus.push_back(wm);
        }
    }

    // cumulative value over the closed disk of radius r
    static double at(const std::vector<double>& radius, const std::vector<double>& cum,
                     double r) {
        auto it = std::upper_bound(radius.begin(), radius.end(), r);
        if (it == radius.begin()) return 0.0;
        return cum[static_cast<std::size_t>(it - radius.begin()) - 1];
    }

    double right(double r) const { return at(radius, cum_right, r); }
    double left(double r) const { return at(radius, cum_left, r); }
    double wplus(double r) const { return at(radius, cum_wplus, r); }
    double wminus(double r) const { return at(radius, cum_wminus, r); }

    /// Exact value of the integral of W(t)/t^2 over (r, R], where W(t) is the
    /// cos^{+/-}-weighted counting function (a step function in t). Uses the
    /// identity  int = W(r)(1/r - 1/R) + [V(R) - V(r)] - (W(R) - W(r))/R
    /// with V the prefix sum of weight/radius.
    double weighted_integral(double r, double R, CosWeight w) const {
        const auto& cw = (w == CosWeight::cos_plus) ? cum_wplus : cum_wminus;
        const auto& cv = (w == CosWeight::cos_plus) ? cum_right : cum_left;
        const double Wr = at(radius, cw, r);
        const double WR = at(radius, cw, R);
        const double Vr = at(radius, cv, r);
        const double VR = at(radius, cv, R);
        return Wr * (1.0 / r - 1.0 / R) + (VR - Vr) - (WR - Wr) / R;
    }
};

inline std::shared_ptr<const RadialTable> make_table(const AtomicCharge& charge) {
    return std::make_shared<const RadialTable>(charge);
}

}  // namespace detail

/// Weighted counting function: integral of cos^{+/-}(arg z) over the closed
/// disk of radius r against the charge. arg is taken in [-pi/2, 3*pi/2).
inline double weighted_count(const AtomicCharge& charge, double r, CosWeight w) {
    if (!(r >= 0.0)) throw std::invalid_argument("weighted_count: r must be >= 0");
    if (charge.has_atom_at_origin())
        throw std::invalid_argument("weighted_count: atom at 0 has no argument");
    detail::RadialTable t(charge);
    return (w == CosWeight::cos_plus) ? t.wplus(r) : t.wminus(r);
}

/// Right characteristic logarithm as an interval function:
///   l^+(r, R) = sum of mass * Re(1/z) over atoms with Re z > 0, r < |z| <= R.
inline IntervalFunction char_log_right(const AtomicCharge& charge) {
    auto t = detail::make_table(charge);
    return IntervalFunction([t](double r, double R) { return t->right(R) - t->right(r); });
}

inline IntervalFunction char_log_left(const AtomicCharge& charge) {
    auto t = detail::make_table(charge);
    return IntervalFunction([t](double r, double R) { return t->left(R) - t->left(r); });
}

/// Logarithmic interval function l = max(l^left, l^right); identically 0 for
/// the empty charge.
inline IntervalFunction interval_log(const AtomicCharge& charge) {
    auto t = detail::make_table(charge);
    return IntervalFunction([t](double r, double R) {
        return std::max(t->right(R) - t->right(r), t->left(R) - t->left(r));
    });
}

/// Integral form of the interval function: max over the two weighted
/// integrals of mu(t; cos^{+/-})/t^2 over (r, R], computed exactly for
/// atomic charges by piecewise integration between atom radii.
inline IntervalFunction interval_log_bar(const AtomicCharge& charge) {
    auto t = detail::make_table(charge);
    return IntervalFunction([t](double r, double R) {
        return std::max(t->weighted_integral(r, R, CosWeight::cos_plus),
                        t->weighted_integral(r, R, CosWeight::cos_minus));
    });
}

inline IntervalFunction char_log_right(const Divisor& d) { return char_log_right(d.as_charge()); }
inline IntervalFunction char_log_left(const Divisor& d) { return char_log_left(d.as_charge()); }
inline IntervalFunction interval_log(const Divisor& d) { return interval_log(d.as_charge()); }
inline IntervalFunction interval_log_bar(const Divisor& d) { return interval_log_bar(d.as_charge()); }

/// |LHS - RHS| of the integration-by-parts identity
///   l^{+/-}(r,R) = mu(R;k)/R - mu(r;k)/r + int_r^R mu(t;k)/t^2 dt,
/// k = cos^+ for the right side, cos^- for the left. The left-hand side is
/// summed directly over the annulus atoms so the two routes stay independent.
inline double ibp_residual(const AtomicCharge& charge, double r, double R, HalfPlane side) {
    if (!(r > 0.0) || !(R > r))
        throw std::invalid_argument("ibp_residual: need 0 < r < R");
    std::vector<double> terms;
    for (const auto& a : charge.atoms) {
        const double rho = std::abs(a.location);
        if (!(rho > r) || rho > R) continue;
        const double x = a.location.real();
        if (side == HalfPlane::right && x > 0.0)
            terms.push_back(a.mass * x / (rho * rho));
        else if (side == HalfPlane::left && x < 0.0)
            terms.push_back(a.mass * (-x) / (rho * rho));
    }
    const double lhs = pairwise_sum(terms);

    detail::RadialTable t(charge);
    const CosWeight w = (side == HalfPlane::right) ? CosWeight::cos_plus : CosWeight::cos_minus;
    const double muR = (w == CosWeight::cos_plus) ? t.wplus(R) : t.wminus(R);
    const double mur = (w == CosWeight::cos_plus) ? t.wplus(r) : t.wminus(r);
    const double rhs = muR / R - mur / r + t.weighted_integral(r, R, w);
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Logarithmic block densities
// ---------------------------------------------------------------------------

enum class DensityVariant { limsup_log, inf_log, best_b };

struct BlockDensityOptions {
    double r_min = 10.0;    // inner-limit grid
    double r_max = 1e6;     // capped per ratio so r * a stays inside the data
    double r_ratio = 1.25;
    double a_min = 2.0;     // outer grid of block ratios a > 1
    double a_max = 64.0;
    double a_ratio = 2.0;
    double tail_fraction = 0.5;
    double bisect_tol = 1e-3;       // best_b only
    StabilityRule stability{};      // best_b feasibility rule
    double density_warn_threshold = 1e6;
};

struct BlockDensityResult {
    double value = 0.0;
    DensityVariant variant = DensityVariant::limsup_log;
    BlockDensityOptions options;
    bool finite_density_warning = false;
    EvidenceProfile profile;
};

namespace detail {

inline double max_atom_radius(const AtomicCharge& c) {
    double m = 0.0;
    for (const auto& a : c.atoms) m = std::max(m, std::abs(a.location));
    return m;
}

// sup over the grid of l(r,R) - b*log(R/r)
inline double affine_fit_constant(const detail::RadialTable& t, const IntervalGrid& grid,
                                  double b) {
    double c = -std::numeric_limits<double>::infinity();
    for (const auto& [r, R] : grid.pairs) {
        const double l = std::max(t.right(R) - t.right(r), t.left(R) - t.left(r));
        c = std::max(c, l - b * std::log(R / r));
    }
    return c;
}

}  // namespace detail

/// Logarithmic block density of a charge/divisor, desk-scale: limits are
/// replaced by tail suprema over the supplied geometric grids, and the
/// best-b variant fits the smallest slope whose affine-bound constant
/// stabilizes when the grid's R-range is extended.
inline BlockDensityResult block_density(const AtomicCharge& charge, DensityVariant variant,
                                        BlockDensityOptions opt = {}) {
    BlockDensityResult res;
    res.variant = variant;
    res.options = opt;

    const double rho_max = detail::max_atom_radius(charge);
    if (rho_max <= opt.r_min)
        throw std::invalid_argument("block_density: charge has no atoms beyond the grid start");

    {   // finite-upper-density precheck (warning only)
        const auto radii = geometric_points(std::max(1.0, opt.r_min), std::max(2.0, rho_max), 2.0);
        const auto prof = upper_density_profile(charge, radii);
        if (tail_sup(radii, prof) > opt.density_warn_threshold)
            res.finite_density_warning = true;
    }

    detail::RadialTable table(charge);

    if (variant == DensityVariant::best_b) {
        const IntervalGrid grid =
            IntervalGrid::geometric(opt.r_min, std::min(opt.r_max, rho_max), opt.r_ratio);
        const double R_full = grid.max_R();
        const double R_half = std::sqrt(opt.r_min * R_full);
        const IntervalGrid half = grid.restricted_to(R_half);
        if (half.pairs.empty() || half.pairs.size() == grid.pairs.size())
            throw std::invalid_argument("block_density: grid too small for stability split");

        auto feasible = [&](double b) {
            const double c_half = detail::affine_fit_constant(table, half, b);
            const double c_full = detail::affine_fit_constant(table, grid, b);
            return opt.stability.bounded(c_half, c_full);
        };

        double hi = 0.0;
        for (const auto& [r, R] : grid.pairs)
            hi = std::max(hi, std::max(table.right(R) - table.right(r),
                                       table.left(R) - table.left(r)) /
                                  std::log(R / r));
        hi = std::max(hi, opt.bisect_tol);
        double lo = 0.0;
        if (feasible(lo)) {
            res.value = 0.0;
        } else {
            while (hi - lo > opt.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                (feasible(mid) ? hi : lo) = mid;
            }
            res.value = hi;
        }
        res.profile.columns = {"b", "C_b_half", "C_b_full"};
        for (double b : {res.value, res.value + 0.1, res.value + 0.5})
            res.profile.add_row({b, detail::affine_fit_constant(table, half, b),
                                 detail::affine_fit_constant(table, grid, b)});
        return res;
    }

    // limsup_log / inf_log: inner tail-sup of l(r, a r) over r, then outer
    // tail-sup (resp. infimum) over the a-grid.
    const auto a_points = geometric_points(opt.a_min, opt.a_max, opt.a_ratio);
    std::vector<double> per_a;
    res.profile.columns = {"a", "limsup_r", "normalized"};
    for (double a : a_points) {
        const double r_hi = std::min(opt.r_max, rho_max / a);
        if (r_hi <= opt.r_min * opt.r_ratio)
            throw std::invalid_argument("block_density: a-grid too wide for the data range");
        const auto r_points = geometric_points(opt.r_min, r_hi, opt.r_ratio);
        std::vector<double> vals;
        vals.reserve(r_points.size());
        for (double r : r_points)
            vals.push_back(std::max(table.right(a * r) - table.right(r),
                                    table.left(a * r) - table.left(r)));
        const double inner = tail_sup(r_points, vals, opt.tail_fraction);
        per_a.push_back(inner / std::log(a));
        res.profile.add_row({a, inner, inner / std::log(a)});
    }
    if (variant == DensityVariant::limsup_log)
        res.value = tail_sup(a_points, per_a, opt.tail_fraction);
    else
        res.value = *std::min_element(per_a.begin(), per_a.end());
    return res;
}

inline BlockDensityResult block_density(const Divisor& d, DensityVariant variant,
                                        BlockDensityOptions opt = {}) {
    return block_density(d.as_charge(), variant, opt);
}

// ---------------------------------------------------------------------------
// Logarithmic integrals J
// ---------------------------------------------------------------------------

struct JResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
};

/// J(r, R; v) = int_r^R (v(-iy) + v(iy)) / y^2 dy for a function v on the
/// imaginary axis, given as y -> v(iy).
inline JResult J_interval(const std::function<double(double)>& v_of_y, double r, double R,
                          double abs_tol = 1e-10) {
    if (!(r > 0.0) || !(R > r)) throw std::invalid_argument("J_interval: need 0 < r < R");
    auto q = integrate([&](double y) { return (v_of_y(-y) + v_of_y(y)) / (y * y); }, r, R,
                       abs_tol);
    return {q.value, q.abs_error, q.converged};
}

/// J(v) = int_1^inf (v(-iy) + v(iy)) / y^2 dy, via the substitution t = 1/y.
/// A nonconvergence flag is raised when the compactified integral fails the
/// tolerance (e.g. v grows linearly).
inline JResult J_tail(const std::function<double(double)>& v_of_y, double abs_tol = 1e-10) {
    auto q = integrate([&](double t) { return v_of_y(1.0 / t) + v_of_y(-1.0 / t); }, 0.0, 1.0,
                       abs_tol);
    return {q.value, q.abs_error, q.converged};
}

// ---------------------------------------------------------------------------
// J vs characteristic-logarithm diagnostic
// ---------------------------------------------------------------------------

struct LemJDiagnostic {
    EvidenceProfile profile;  // r, R, J, l_right, l_left, diff_sum
    double max_diff_sum = 0.0;
    Verdict3 bounded = Verdict3::inconclusive;
    std::string note;
};

/// Reports |J(r,R;u) - l^right(r,R)| + |J(r,R;u) - l^left(r,R)| over the grid
/// for a subharmonic evaluator u with Riesz charge upsilon. The raw
/// differences are reported as-is; the kernel normalization between J and
/// l^{+/-} is deliberately not folded in, so the boundedness verdict is
/// advisory (based on the grid-growth rule) rather than asserted.
inline LemJDiagnostic lemJ_diagnostic(const std::function<double(cplx)>& u,
                                      const AtomicCharge& upsilon, const IntervalGrid& grid,
                                      double quad_tol = 1e-8) {
    LemJDiagnostic out;
    out.profile.columns = {"r", "R", "J", "l_right", "l_left", "diff_sum"};
    auto lr = char_log_right(upsilon);
    auto ll = char_log_left(upsilon);
    std::vector<double> Rs, diffs;
    for (const auto& [r, R] : grid.pairs) {
        const auto j = J_interval([&](double y) { return u(cplx(0.0, y)); }, r, R, quad_tol);
        if (!j.converged) throw std::runtime_error("lemJ_diagnostic: J quadrature failed");
        const double dr = std::abs(j.value - lr(r, R));
        const double dl = std::abs(j.value - ll(r, R));
        out.profile.add_row({r, R, j.value, lr(r, R), ll(r, R), dr + dl});
        Rs.push_back(R);
        diffs.push_back(dr + dl);
        out.max_diff_sum = std::max(out.max_diff_sum, dr + dl);
    }
    if (!diffs.empty()) {
        std::vector<std::size_t> idx(diffs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return Rs[a] < Rs[b]; });
        std::vector<double> xs, vs;
        for (auto i : idx) {
            xs.push_back(Rs[i]);
            vs.push_back(diffs[i]);
        }
        const double mid = std::sqrt(xs.front() * xs.back());
        double inner = 0.0, full = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            full = std::max(full, vs[i]);
            if (xs[i] <= mid) inner = std::max(inner, vs[i]);
        }
        StabilityRule rule;
        out.bounded = rule.bounded(inner, full) ? Verdict3::yes : Verdict3::no;
    }
    out.note = "raw differences; J vs l normalization not calibrated";
    return out;
}

}  // namespace imsweep
