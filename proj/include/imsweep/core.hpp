#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace imsweep {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Deterministic pairwise summation, independent of element magnitudes'
/// ordering-induced rounding drift for long sums.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

/// Ascending geometric grid covering [rmin, rmax]; rmax is always included.
inline std::vector<double> geometric_points(double rmin, double rmax, double ratio) {
    if (!(rmin > 0.0) || !(rmax > rmin) || !(ratio > 1.0))
        throw std::invalid_argument("geometric_points: need 0 < rmin < rmax and ratio > 1");
    std::vector<double> pts;
    for (double r = rmin; r < rmax * (1.0 - 1e-12); r *= ratio) pts.push_back(r);
    pts.push_back(rmax);
    return pts;
}

/// Supremum of the profile over the tail of a (log-scaled) abscissa range.
/// Surrogate for limsup as the abscissa grows: only the points with
/// x >= geometric midpoint of [x_front, x_back] count (fraction 0.5).
inline double tail_sup(std::span<const double> x, std::span<const double> v,
                       double fraction = 0.5) {
    if (x.size() != v.size() || x.empty())
        throw std::invalid_argument("tail_sup: mismatched or empty profile");
    const double lo = std::log(x.front());
    const double hi = std::log(x.back());
    const double cut = lo + (1.0 - fraction) * (hi - lo);
    double s = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::log(x[i]) >= cut - 1e-12) s = std::max(s, v[i]);
    return s;
}

enum class Verdict3 { yes, no, inconclusive };

inline const char* to_string(Verdict3 v) {
    switch (v) {
        case Verdict3::yes: return "yes";
        case Verdict3::no: return "no";
        default: return "inconclusive";
    }
}

/// Desk-scale surrogate for "= O(1)" claims: a supremum statistic computed on
/// the lower half of the grid's log-range must not grow by more than `factor`
/// when the whole grid is used. Nonpositive suprema count as bounded.
struct StabilityRule {
    double factor = 1.2;
    double floor = 1e-9;

    bool bounded(double inner, double full) const {
        if (full <= floor) return true;
        if (inner <= floor) return false;
        return full <= factor * inner;
    }
};

/// Tabular grid evidence attached to verdicts and reports.
struct EvidenceProfile {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> r) { rows.emplace_back(r); }
};

/// Decision-procedure outcome: tri-state verdict, fitted witness constants,
/// and the grid evidence they were fitted from.
struct ConditionVerdict {
    Verdict3 holds = Verdict3::inconclusive;
    std::map<std::string, double> witness;
    EvidenceProfile profile;
    std::vector<std::string> notes;
};

inline int thread_count_from_env() {
    if (const char* s = std::getenv("IMSWEEP_THREADS")) {
        const long n = std::strtol(s, nullptr, 10);
        if (n >= 1 && n <= 256) return static_cast<int>(n);
    }
    return 1;
}

/// Index-parallel map with deterministic output: fn(i) writes only slot i.
template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn) {
    const int threads = thread_count_from_env();
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace imsweep
