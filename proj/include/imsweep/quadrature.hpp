#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "imsweep/core.hpp"

namespace imsweep {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    long evaluations = 0;
};

namespace detail {

// 15-point Gauss-Kronrod pair (QUADPACK dqk15 nodes/weights).
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
inline constexpr double gk_xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

struct Gk15Sample {
    double kronrod = 0.0;
    double err = 0.0;
    bool finite = true;
    double finite_scale = 0.0;  // magnitude scale of finite samples, for skip bookkeeping
};

template <class F>
Gk15Sample gk15(F&& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    Gk15Sample out;

    double fv[15];
    double absmax = 0.0;
    bool finite = true;
    const double fc = f(centr);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * gk_xgk[j];
        fv[j] = f(centr - absc);
        fv[7 + j] = f(centr + absc);
    }
    for (int j = 0; j < 15; ++j) {
        if (!std::isfinite(fv[j])) finite = false;
        else absmax = std::max(absmax, std::abs(fv[j]));
    }
    out.finite = finite;
    out.finite_scale = absmax;
    if (!finite) return out;

    double resg = gk_wg[3] * fc;
    double resk = gk_wgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double fsum = fv[j] + fv[7 + j];
        resk += gk_wgk[j] * fsum;
        if (j % 2 == 1) resg += gk_wg[j / 2] * fsum;
    }
    out.kronrod = resk * hlgth;
    // conservative: plain |G7 - K15| difference, no QUADPACK sharpening
    out.err = std::abs((resk - resg) * hlgth);
    return out;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute tolerance.
/// Non-finite samples force subdivision; once an offending subinterval is
/// narrower than `singular_width`, it is skipped and charged to the error
/// budget (integrable log-type spikes contribute O(width * log width)).
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     int max_intervals = 4000) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    const double sign = (b >= a) ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);
    const double singular_width = std::max(1e-13 * (b - a), 1e-300);

    struct Seg {
        double a, b, value, err;
        bool finite;
        double scale;
    };
    std::vector<Seg> work;
    auto push = [&](double x0, double x1) {
        auto s = detail::gk15(f, x0, x1);
        res.evaluations += 15;
        work.push_back({x0, x1, s.kronrod, s.err, s.finite, s.finite_scale});
    };
    push(a, b);

    double total = 0.0, total_err = 0.0;
    int used = 1;
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        const double width = s.b - s.a;
        if (s.finite && s.err <= abs_tol * std::max(1e-3, width / (b - a))) {
            total += s.value;
            total_err += s.err;
            continue;
        }
        if (!s.finite && width <= singular_width) {
            total_err += width * std::max(1.0, s.scale);
            continue;
        }
        if (used >= max_intervals) {
            if (s.finite) {
                total += s.value;
                total_err += s.err;
            } else {
                total_err += width * std::max(1.0, s.scale);
            }
            continue;
        }
        const double mid = 0.5 * (s.a + s.b);
        push(s.a, mid);
        push(mid, s.b);
        used += 2;
    }
    res.value = sign * total;
    res.abs_error = total_err;
    res.converged = total_err <= 10.0 * abs_tol;
    return res;
}

inline QuadResult integrate_fn(const std::function<double(double)>& f, double a,
                               double b, double abs_tol = 1e-10,
                               int max_intervals = 4000) {
    return integrate([&](double x) { return f(x); }, a, b, abs_tol, max_intervals);
}

}  // namespace imsweep
