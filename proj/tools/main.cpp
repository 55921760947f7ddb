#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "imsweep/cli.hpp"

namespace {

void add_common(CLI::App* s, imsweep::RunConfig& cfg) {
    s->add_option("--input,-i", cfg.input, "input charge/divisor file (re im [mass])");
    s->add_option("--grid", cfg.grid, "geometric grid spec rmin:rmax:ratio");
    s->add_option("--tol", cfg.tol, "quadrature absolute tolerance");
    s->add_option("--r0", cfg.r0, "split / tail radius");
    s->add_option("--format", cfg.output_format, "json|csv");
    s->add_option("--seed", cfg.seed, "seed echoed into the report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"imsweep: interval logarithms, densities and two-sided balayage "
                 "onto the imaginary axis"};
    app.require_subcommand(1);
    imsweep::RunConfig cfg;

    auto* density = app.add_subcommand("density", "logarithmic block densities");
    add_common(density, cfg);
    density->add_option("--variant", cfg.variant, "limsup_log|inf_log|best_b");

    auto* check = app.add_subcommand("check", "condition decision procedures");
    add_common(check, cfg);
    check->add_option("--condition", cfg.condition,
                      "blaschke|weak-blaschke|lindelof|separation|mr|kahane")
        ->required();
    check->add_option("--z", cfg.z_file, "Z charge file (mr)");
    check->add_option("--w", cfg.w_file, "W charge file (mr)");
    check->add_option("--b", cfg.b, "slope for the b*log(R/r) slack");
    check->add_option("--eps", cfg.eps, "epsilon values for the eps slack");
    check->add_option("--variant", cfg.variant, "mr: none|b|vanishing; kahane: zero|fit");
    check->add_flag("--use-bar", cfg.use_bar, "use the integral-form interval function");

    auto* bal = app.add_subcommand("balayage", "sweep a charge onto the imaginary axis");
    add_common(bal, cfg);
    bal->add_option("--genus", cfg.genus, "0 or 1")->required();
    bal->add_option("--emit", cfg.emit, "distribution|density");
    bal->add_option("--ymax", cfg.ymax, "ordinate range [-ymax, ymax]");
    bal->add_option("--points", cfg.points, "number of ordinate samples");

    auto* prod = app.add_subcommand("product", "canonical product evaluation / growth");
    add_common(prod, cfg);
    prod->add_option("--variant", cfg.variant, "evaluate|growth");
    prod->add_option("--at-re", cfg.at_re, "evaluation point, real part");
    prod->add_option("--at-im", cfg.at_im, "evaluation point, imaginary part");

    auto* verify = app.add_subcommand("verify", "growth-majorant inequality checks");
    add_common(verify, cfg);
    verify->add_option("--mode", cfg.variant, "a3|b3|c3|a1")->required();
    verify->add_option("--u", cfg.z_file, "divisor file for the U product");
    verify->add_option("--m", cfg.w_file, "divisor file for the M product");
    verify->add_option("--q", cfg.q_const, "constant q (a3) / scale (b3)");
    verify->add_option("--eps", cfg.eps, "epsilon (c3)");
    verify->add_option("--p", cfg.p, "disk-mean shrink exponent (a1)");
    verify->add_option("--ymax", cfg.ymax, "largest |y| sample");

    auto* report = app.add_subcommand("report", "combined density/condition battery");
    add_common(report, cfg);

    CLI11_PARSE(app, argc, argv);
    for (auto* s : {density, check, bal, prod, verify, report})
        if (s->parsed()) cfg.command = s->get_name();

    const auto rep = imsweep::run(cfg);
    std::fputs(rep.body.c_str(), stdout);
    return rep.exit_code;
}
