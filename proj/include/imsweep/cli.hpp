#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imsweep/balayage.hpp"
#include "imsweep/conditions.hpp"
#include "imsweep/core.hpp"
#include "imsweep/entire.hpp"
#include "imsweep/io.hpp"
#include "imsweep/kahane.hpp"
#include "imsweep/logmetrics.hpp"
#include "imsweep/measures.hpp"

namespace imsweep {

using nlohmann::json;

/// Fully describes one tool invocation; echoed verbatim into every report so
/// identical configs reproduce byte-identical output.
struct RunConfig {
    std::string command;       // density | check | balayage | product | verify | report
    std::string input;         // primary input file
    std::string z_file;        // mr comparison: Z
    std::string w_file;        // mr comparison: W
    std::string condition;     // check: blaschke|weak-blaschke|lindelof|separation|mr|kahane
    std::string variant;       // density variant / product action / verify mode / mr slack
    std::string emit = "distribution";  // balayage: distribution|density
    std::string grid = "";     // rmin:rmax:ratio
    std::string output_format = "json";  // json|csv
    int genus = 0;
    double r0 = 1.0;
    double tol = 1e-8;
    double b = 0.0;
    std::vector<double> eps;
    double q_const = 1.0;
    double p = 0.0;
    double at_re = 0.0, at_im = 0.0;
    double ymax = 10.0;
    int points = 201;
    bool use_bar = false;
    unsigned long seed = 0;
};

struct RunReport {
    int exit_code = 0;  // 0 yes/computed, 1 no, 2 inconclusive, 3 input error
    std::string body;
};

namespace detail {

inline json config_to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["input"] = c.input;
    j["z"] = c.z_file;
    j["w"] = c.w_file;
    j["condition"] = c.condition;
    j["variant"] = c.variant;
    j["emit"] = c.emit;
    j["grid"] = c.grid;
    j["output_format"] = c.output_format;
    j["genus"] = c.genus;
    j["r0"] = c.r0;
    j["tol"] = c.tol;
    j["b"] = c.b;
    j["eps"] = c.eps;
    j["q_const"] = c.q_const;
    j["p"] = c.p;
    j["at"] = {c.at_re, c.at_im};
    j["ymax"] = c.ymax;
    j["points"] = c.points;
    j["use_bar"] = c.use_bar;
    j["seed"] = c.seed;
    return j;
}

inline json profile_to_json(const EvidenceProfile& p) {
    json j;
    j["columns"] = p.columns;
    j["rows"] = p.rows;
    return j;
}

inline json verdict_to_json(const ConditionVerdict& v) {
    json j;
    j["holds"] = to_string(v.holds);
    j["witness"] = v.witness;
    j["profile"] = profile_to_json(v.profile);
    j["notes"] = v.notes;
    return j;
}

inline int verdict_exit(Verdict3 v) {
    switch (v) {
        case Verdict3::yes: return 0;
        case Verdict3::no: return 1;
        default: return 2;
    }
}

// CSV rendering of a profile-carrying report: config and scalar results go
// into '#' header comments, the grid evidence into the table body.
inline std::string report_csv(const RunConfig& cfg, const EvidenceProfile& profile,
                              const std::vector<std::pair<std::string, std::string>>& scalars) {
    std::vector<std::string> hdr = {"config " + config_to_json(cfg).dump()};
    for (const auto& [k, val] : scalars) hdr.push_back(k + "=" + val);
    return profile_to_csv(profile, hdr);
}

inline std::vector<std::pair<std::string, std::string>> verdict_scalars(
    const ConditionVerdict& v) {
    std::vector<std::pair<std::string, std::string>> s;
    s.emplace_back("holds", to_string(v.holds));
    for (const auto& [k, val] : v.witness) s.emplace_back(k, format_number(val));
    for (const auto& n : v.notes) s.emplace_back("note", n);
    return s;
}

struct GridSpec {
    double rmin = 1.0, rmax = 1e4, ratio = 1.25;
};

inline GridSpec parse_grid(const std::string& s, GridSpec fallback) {
    if (s.empty()) return fallback;
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> g.rmin >> c1 >> g.rmax >> c2 >> g.ratio) || c1 != ':' || c2 != ':')
        throw ParseError("grid spec must be rmin:rmax:ratio");
    return g;
}

inline DensityVariant density_variant(const std::string& s) {
    if (s == "limsup_log" || s.empty()) return DensityVariant::limsup_log;
    if (s == "inf_log") return DensityVariant::inf_log;
    if (s == "best_b") return DensityVariant::best_b;
    throw ParseError("unknown density variant: " + s);
}

}  // namespace detail

inline RunReport run(const RunConfig& cfg) {
    RunReport rep;
    json out;
    out["config"] = detail::config_to_json(cfg);
    try {
        if (cfg.command == "density") {
            const AtomicCharge c = load_charge(cfg.input);
            BlockDensityOptions opt;
            const auto gs = detail::parse_grid(cfg.grid, {10.0, 1e6, 1.25});
            opt.r_min = gs.rmin;
            opt.r_max = gs.rmax;
            opt.r_ratio = gs.ratio;
            const auto res = block_density(c, detail::density_variant(cfg.variant), opt);
            out["value"] = res.value;
            out["variant"] = cfg.variant.empty() ? "limsup_log" : cfg.variant;
            out["finite_density_warning"] = res.finite_density_warning;
            out["grid"] = {{"r_min", opt.r_min}, {"r_max", opt.r_max},
                           {"r_ratio", opt.r_ratio}, {"a_min", opt.a_min},
                           {"a_max", opt.a_max}, {"a_ratio", opt.a_ratio},
                           {"tail_fraction", opt.tail_fraction}};
            out["profile"] = detail::profile_to_json(res.profile);
            rep.exit_code = 0;
            if (cfg.output_format == "csv") {
                rep.body = detail::report_csv(
                    cfg, res.profile,
                    {{"value", format_number(res.value)},
                     {"variant", cfg.variant.empty() ? "limsup_log" : cfg.variant}});
                return rep;
            }
        } else if (cfg.command == "check") {
            ConditionVerdict v;
            if (cfg.condition == "blaschke") {
                v = blaschke(load_charge(cfg.input), cfg.r0);
            } else if (cfg.condition == "weak-blaschke") {
                v = weak_blaschke_genus1(load_charge(cfg.input), cfg.r0);
            } else if (cfg.condition == "lindelof") {
                v = lindelof_genus1(load_charge(cfg.input), cfg.r0);
            } else if (cfg.condition == "separation") {
                v = separated_from_axis(load_charge(cfg.input), cfg.r0);
            } else if (cfg.condition == "mr") {
                const auto gs = detail::parse_grid(cfg.grid, {1.0, 1e4, 1.25});
                MrOptions mo;
                mo.use_bar = cfg.use_bar;
                if (!cfg.eps.empty()) {
                    mo.slack = MrSlack::eps;
                    mo.eps_values = cfg.eps;
                } else if (cfg.variant == "vanishing") {
                    mo.slack = MrSlack::vanishing;
                } else if (cfg.variant == "b" || cfg.b > 0.0) {
                    mo.slack = MrSlack::b_log;
                    mo.b = cfg.b;
                }
                v = mr_compare(load_charge(cfg.z_file), load_charge(cfg.w_file),
                               IntervalGrid::geometric(gs.rmin, gs.rmax, gs.ratio), mo);
            } else if (cfg.condition == "kahane") {
                KahaneOptions ko;
                ko.quad_tol = cfg.tol;
                const AtomicCharge mu = load_charge(cfg.input);
                if (cfg.variant == "fit") {
                    const auto bal = balayage_genus0(mu, {.check_blaschke = false});
                    std::vector<double> nodes;
                    for (double y = 1.0; y <= 256.0; y *= 2.0) {
                        nodes.push_back(y);
                        nodes.push_back(-y);
                    }
                    nodes.push_back(0.0);
                    const auto k = fit_lipschitz_k(
                        [&](double y) { return bal.line.distribution(y); }, nodes,
                        std::max(0.0, cfg.b));
                    v = kahane_outer_density(mu, k, ko);
                } else {
                    v = kahane_outer_density(mu, [](double) { return 0.0; }, 0.0, ko);
                }
            } else {
                throw ParseError("unknown condition: " + cfg.condition);
            }
            out["verdict"] = detail::verdict_to_json(v);
            rep.exit_code = detail::verdict_exit(v.holds);
            if (cfg.output_format == "csv") {
                rep.body = detail::report_csv(cfg, v.profile, detail::verdict_scalars(v));
                return rep;
            }
        } else if (cfg.command == "balayage") {
            const AtomicCharge c = load_charge(cfg.input);
            BalayageResult bal = (cfg.genus == 0)
                                     ? balayage_genus0(c)
                                     : balayage_genus1(c, cfg.r0);
            EvidenceProfile prof;
            prof.columns = {"y", cfg.emit == "density" ? "density" : "distribution"};
            const int n = std::max(2, cfg.points);
            for (int i = 0; i < n; ++i) {
                const double y = -cfg.ymax + 2.0 * cfg.ymax * i / (n - 1);
                prof.add_row({y, cfg.emit == "density" ? bal.line.density_at(y)
                                                       : bal.line.distribution(y)});
            }
            std::vector<std::string> hdr = {
                "config " + detail::config_to_json(cfg).dump(),
                "genus=" + std::to_string(bal.genus), "r0=" + format_number(bal.r0)};
            for (const auto& f : bal.flags) hdr.push_back("flag: " + f);
            rep.body = profile_to_csv(prof, hdr);
            rep.exit_code = 0;
            return rep;
        } else if (cfg.command == "product") {
            const Divisor d = load_divisor(cfg.input);
            const CanonicalProduct f(d);
            if (cfg.variant == "growth") {
                double rmax = 10.0;
                for (const auto& a : d.atoms)
                    rmax = std::max(rmax, 0.45 * std::abs(a.location));
                const auto g = growth_report(log_abs_fn(f),
                                             geometric_points(1.0, rmax, 1.25),
                                             {0.0, pi / 2.0, pi, -pi / 2.0});
                out["type1"] = g.type1;
                out["order"] = g.order;
                json ind = json::array();
                for (const auto& [th, val] : g.indicator)
                    ind.push_back({{"theta", th}, {"value", val}});
                out["indicator"] = ind;
                out["profile"] = detail::profile_to_json(g.profile);
                if (cfg.output_format == "csv") {
                    std::vector<std::pair<std::string, std::string>> scalars = {
                        {"type1", format_number(g.type1)}, {"order", format_number(g.order)}};
                    for (const auto& [th, val] : g.indicator)
                        scalars.emplace_back("indicator_" + format_number(th),
                                             format_number(val));
                    rep.body = detail::report_csv(cfg, g.profile, scalars);
                    rep.exit_code = 0;
                    return rep;
                }
            } else {
                const auto la = log_abs(f, cplx(cfg.at_re, cfg.at_im));
                out["log_abs"] = la.value;
                out["tail_bound"] = la.tail_bound;
                out["hit_atom"] = la.hit_atom;
            }
            rep.exit_code = 0;
        } else if (cfg.command == "verify") {
            const Divisor du = load_divisor(cfg.z_file.empty() ? cfg.input : cfg.z_file);
            const Divisor dm = load_divisor(cfg.w_file.empty() ? cfg.input : cfg.w_file);
            const CanonicalProduct fu(du), fm(dm);
            auto U = log_abs_fn(fu);
            auto M = log_abs_fn(fm);
            std::vector<double> ys;
            for (double y = std::max(1.0, cfg.r0); y <= cfg.ymax; y *= 2.0) {
                ys.push_back(y);
                ys.push_back(-y);
            }
            CheckOptions co;
            co.circle_tol = cfg.tol;
            ConditionVerdict v;
            if (cfg.variant == "a3") {
                v = check_a3(U, M, [&](double) { return cfg.q_const; }, cfg.r0, ys, co);
            } else if (cfg.variant == "b3") {
                v = check_b3_c3(U, M, [&](double y) { return cfg.q_const * std::sqrt(std::abs(y)); },
                                GrowthMode::b3, 0.0, ys, co);
            } else if (cfg.variant == "c3") {
                const double e = cfg.eps.empty() ? 0.1 : cfg.eps.front();
                v = check_b3_c3(U, M, {}, GrowthMode::c3, e, ys, co);
            } else if (cfg.variant == "a1") {
                v = check_a1_bound([](cplx) { return 0.0; }, fu, M, cfg.p, ys, co);
            } else {
                throw ParseError("unknown verify mode: " + cfg.variant);
            }
            out["verdict"] = detail::verdict_to_json(v);
            rep.exit_code = detail::verdict_exit(v.holds);
            if (cfg.output_format == "csv") {
                rep.body = detail::report_csv(cfg, v.profile, detail::verdict_scalars(v));
                return rep;
            }
        } else if (cfg.command == "report") {
            const AtomicCharge c = load_charge(cfg.input);
            json battery;
            for (auto variant : {DensityVariant::limsup_log, DensityVariant::inf_log,
                                 DensityVariant::best_b}) {
                BlockDensityOptions opt;
                const auto gs = detail::parse_grid(cfg.grid, {10.0, 1e5, 1.25});
                opt.r_min = gs.rmin;
                opt.r_max = gs.rmax;
                opt.r_ratio = gs.ratio;
                const char* name = variant == DensityVariant::limsup_log ? "limsup_log"
                                   : variant == DensityVariant::inf_log  ? "inf_log"
                                                                         : "best_b";
                try {
                    battery["density"][name] = block_density(c, variant, opt).value;
                } catch (const std::exception& e) {
                    battery["density"][name] = nullptr;
                    battery["density_errors"][name] = e.what();
                }
            }
            battery["blaschke"] = detail::verdict_to_json(blaschke(c, cfg.r0));
            battery["weak_blaschke"] = detail::verdict_to_json(weak_blaschke_genus1(c, cfg.r0));
            battery["lindelof"] = detail::verdict_to_json(lindelof_genus1(c, cfg.r0));
            battery["separation"] = detail::verdict_to_json(separated_from_axis(c, cfg.r0));
            out["report"] = battery;
            rep.exit_code = 0;
        } else {
            throw ParseError("unknown command: " + cfg.command);
        }
    } catch (const std::exception& e) {
        out["error"] = e.what();
        rep.exit_code = 3;
    }
    rep.body = out.dump(2) + "\n";
    return rep;
}

}  // namespace imsweep
