#include <string>

#include <CLI11.hpp>

#include "papeq/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "papeq: pseudo almost periodic solutions of hyperbolic evolution equations\n"
        "in a diagonal spectral model, with certified dichotomy estimates.\n\n"
        "Commands:\n"
        "  verify-estimates  certify the six dichotomy inequalities\n"
        "                    (estimates.csv: inequality,max_ratio,argmax_t,pass)\n"
        "  theta             contraction constant and its five terms (theta.txt)\n"
        "  solve             Picard fixed-point solve\n"
        "                    (solution.csv: t,re_n,im_n,...,alpha_norm; report.txt;\n"
        "                     physical.csv: t,x,u for heat/transport models)\n"
        "  ergodic-mean      sliding means of a configured function\n"
        "                    (means.csv: r,mean)\n"
        "  oracle            scalar closed-form convolution cross-checks\n"
        "                    (oracle.csv: name,t,computed_re,computed_im,\n"
        "                     expected_re,expected_im,abs_err)\n\n"
        "Exit codes: 0 ok, 1 config error, 2 not hyperbolic, 3 Theta >= 1,\n"
        "5 other domain error, 4 no convergence within max_iter."};

    papeq::RunConfig rc;
    std::string command, config, out = ".";
    app.add_option("--command", command, "one of verify-estimates|theta|solve|ergodic-mean|oracle")
        ->required();
    app.add_option("--config", config, "input config file (JSON)");
    app.add_option("--out", out, "output directory for CSV / report artifacts");
    app.add_option("--tol", rc.tol, "tolerance override (command-dependent)");
    app.add_option("--seed", rc.seed, "seed for all randomized sampling");

    CLI11_PARSE(app, argc, argv);

    rc.command = command;
    rc.config_path = config;
    rc.out_dir = out;
    return papeq::run(rc);
}
