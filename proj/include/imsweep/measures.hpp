#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "imsweep/core.hpp"

namespace imsweep {

// ---------------------------------------------------------------------------
// Atomic charges and divisors
// ---------------------------------------------------------------------------

struct ChargeAtom {
    cplx location;
    double mass = 0.0;
};

struct DivisorAtom {
    cplx location;
    long multiplicity = 1;
};

namespace detail {

inline cplx round_location(cplx z, int decimals) {
    if (decimals < 0) return z;  // exact bitwise comparison
    const double s = std::pow(10.0, decimals);
    return {std::round(z.real() * s) / s, std::round(z.imag() * s) / s};
}

struct CplxLess {
    bool operator()(const cplx& a, const cplx& b) const {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    }
};

}  // namespace detail

/// Signed measure given by finitely many point masses. Canonical form keeps
/// at most one atom per location and no zero masses.
struct AtomicCharge {
    std::vector<ChargeAtom> atoms;

    AtomicCharge() = default;
    explicit AtomicCharge(std::vector<ChargeAtom> a) : atoms(std::move(a)) {}

    bool empty() const { return atoms.empty(); }

    /// Merge atoms at equal locations (optionally after rounding to a decimal
    /// precision), drop exact-zero masses. Idempotent and mass-preserving.
    AtomicCharge canonicalized(int round_decimals = -1) const {
        std::vector<ChargeAtom> merged;
        merged.reserve(atoms.size());
        for (const auto& a : atoms)
            merged.push_back({detail::round_location(a.location, round_decimals), a.mass});
        std::stable_sort(merged.begin(), merged.end(),
                         [](const ChargeAtom& a, const ChargeAtom& b) {
                             return detail::CplxLess{}(a.location, b.location);
                         });
        std::vector<ChargeAtom> out;
        for (const auto& a : merged) {
            if (!out.empty() && out.back().location == a.location)
                out.back().mass += a.mass;
            else
                out.push_back(a);
        }
        std::erase_if(out, [](const ChargeAtom& a) { return a.mass == 0.0; });
        return AtomicCharge{std::move(out)};
    }

    double total_mass() const {
        std::vector<double> m;
        m.reserve(atoms.size());
        for (const auto& a : atoms) m.push_back(a.mass);
        return pairwise_sum(m);
    }

    double total_variation() const {
        std::vector<double> m;
        m.reserve(atoms.size());
        for (const auto& a : atoms) m.push_back(std::abs(a.mass));
        return pairwise_sum(m);
    }

    AtomicCharge positive_part() const {
        AtomicCharge out;
        for (const auto& a : atoms)
            if (a.mass > 0.0) out.atoms.push_back(a);
        return out;
    }

    AtomicCharge negative_part() const {  // returned with positive masses
        AtomicCharge out;
        for (const auto& a : atoms)
            if (a.mass < 0.0) out.atoms.push_back({a.location, -a.mass});
        return out;
    }

    AtomicCharge absolute() const {
        AtomicCharge out;
        for (const auto& a : atoms) out.atoms.push_back({a.location, std::abs(a.mass)});
        return out;
    }

    bool is_positive() const {
        return std::all_of(atoms.begin(), atoms.end(),
                           [](const ChargeAtom& a) { return a.mass >= 0.0; });
    }

    bool has_atom_at_origin() const {
        return std::any_of(atoms.begin(), atoms.end(),
                           [](const ChargeAtom& a) { return a.location == cplx{0.0, 0.0}; });
    }
};

/// Zero sequence with multiplicities (positive divisor).
struct Divisor {
    std::vector<DivisorAtom> atoms;

    Divisor() = default;
    explicit Divisor(std::vector<DivisorAtom> a) : atoms(std::move(a)) { validate(); }

    void validate() const {
        for (const auto& a : atoms)
            if (a.multiplicity < 1)
                throw std::invalid_argument("Divisor: multiplicities must be >= 1");
    }

    bool empty() const { return atoms.empty(); }

    Divisor canonicalized(int round_decimals = -1) const {
        AtomicCharge c = as_charge().canonicalized(round_decimals);
        Divisor out;
        for (const auto& a : c.atoms)
            out.atoms.push_back({a.location, static_cast<long>(std::llround(a.mass))});
        return out;
    }

    /// The counting measure of the divisor.
    AtomicCharge as_charge() const {
        AtomicCharge c;
        c.atoms.reserve(atoms.size());
        for (const auto& a : atoms)
            c.atoms.push_back({a.location, static_cast<double>(a.multiplicity)});
        return c;
    }

    long total_count() const {
        long n = 0;
        for (const auto& a : atoms) n += a.multiplicity;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Charges living on the imaginary axis
// ---------------------------------------------------------------------------

struct LineAtom {
    double ordinate = 0.0;  // atom at i*ordinate
    double mass = 0.0;
};

/// Charge on i*R split into an absolutely continuous part (distribution +
/// density evaluators, normalized so the a.c. distribution vanishes at 0)
/// and an atom list. The full distribution F(iy) follows the two-sided
/// convention: F(iy) = charge([0, iy]) for y >= 0 and -charge([iy, 0)) for
/// y < 0; in particular F jumps *at* atoms on both rays.
struct LineCharge {
    std::function<double(double)> ac_distribution;  // null means 0
    std::function<double(double)> ac_density;       // null means 0
    std::vector<LineAtom> atoms;                    // sorted by ordinate

    void sort_atoms() {
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const LineAtom& a, const LineAtom& b) {
                             return a.ordinate < b.ordinate;
                         });
    }

    double atom_jump_part(double y) const {
        double s = 0.0;
        if (y >= 0.0) {
            for (const auto& a : atoms)
                if (a.ordinate >= 0.0 && a.ordinate <= y) s += a.mass;
        } else {
            for (const auto& a : atoms)
                if (a.ordinate >= y && a.ordinate < 0.0) s -= a.mass;
        }
        return s;
    }

    double distribution(double y) const {
        const double ac = ac_distribution ? ac_distribution(y) : 0.0;
        return ac + atom_jump_part(y);
    }

    double density_at(double y) const { return ac_density ? ac_density(y) : 0.0; }

    bool has_ac_part() const { return static_cast<bool>(ac_density); }
};

// ---------------------------------------------------------------------------
// Interval grids
// ---------------------------------------------------------------------------

/// Finite family of radius pairs 1 <= r < R over which interval functions and
/// boundedness profiles are evaluated.
struct IntervalGrid {
    std::vector<std::pair<double, double>> pairs;

    IntervalGrid() = default;
    explicit IntervalGrid(std::vector<std::pair<double, double>> p) : pairs(std::move(p)) {
        validate();
    }

    void validate() const {
        for (const auto& [r, R] : pairs)
            if (!(r >= 1.0) || !(R > r))
                throw std::invalid_argument("IntervalGrid: need 1 <= r < R for every pair");
    }

    /// All pairs (r_i, r_j), i < j, from a geometric point set.
    static IntervalGrid geometric(double rmin, double rmax, double ratio) {
        if (!(rmin >= 1.0)) throw std::invalid_argument("IntervalGrid: rmin must be >= 1");
        const auto pts = geometric_points(rmin, rmax, ratio);
        IntervalGrid g;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                g.pairs.emplace_back(pts[i], pts[j]);
        return g;
    }

    std::vector<double> distinct_radii() const {
        std::vector<double> v;
        for (const auto& [r, R] : pairs) {
            v.push_back(r);
            v.push_back(R);
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    double max_R() const {
        double m = 0.0;
        for (const auto& [r, R] : pairs) m = std::max(m, R);
        return m;
    }

    /// Sub-grid with R below a cutoff (stability comparisons).
    IntervalGrid restricted_to(double Rmax) const {
        IntervalGrid g;
        for (const auto& p : pairs)
            if (p.second <= Rmax * (1.0 + 1e-12)) g.pairs.push_back(p);
        return g;
    }
};

// ---------------------------------------------------------------------------
// Counting and distribution functions
// ---------------------------------------------------------------------------

/// Mass of the closed disk of radius r centered at 0.
inline double counting_radial(const AtomicCharge& charge, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("counting_radial: r must be >= 0");
    std::vector<double> m;
    for (const auto& a : charge.atoms)
        if (std::abs(a.location) <= r) m.push_back(a.mass);
    return pairwise_sum(m);
}

inline double counting_radial(const Divisor& d, double r) {
    return counting_radial(d.as_charge(), r);
}

/// Distribution function of a charge supported on the imaginary axis.
/// Atoms with Re != 0 are rejected (exact check).
inline LineCharge distribution_on_line(const AtomicCharge& charge) {
    LineCharge lc;
    for (const auto& a : charge.atoms) {
        if (a.location.real() != 0.0)
            throw std::invalid_argument("distribution_on_line: atom off the imaginary axis");
        lc.atoms.push_back({a.location.imag(), a.mass});
    }
    lc.sort_atoms();
    return lc;
}

/// |charge|^rad(r) / r at each requested radius. The tail supremum of this
/// profile is the desk-scale surrogate for the upper density.
inline std::vector<double> upper_density_profile(const AtomicCharge& charge,
                                                 const std::vector<double>& radii) {
    std::vector<double> out;
    out.reserve(radii.size());
    const AtomicCharge abs_charge = charge.absolute();
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > prev))
            throw std::invalid_argument(
                "upper_density_profile: radii must be positive increasing");
        prev = r;
        out.push_back(counting_radial(abs_charge, r) / r);
    }
    return out;
}

inline std::vector<double> upper_density_profile(const Divisor& d,
                                                 const std::vector<double>& radii) {
    return upper_density_profile(d.as_charge(), radii);
}

}  // namespace imsweep
