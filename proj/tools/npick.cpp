#include <string>

#include "CLI11.hpp"

#include "npick/cli.hpp"

int main(int argc, char** argv) {
    using npick::cli::Command;
    npick::cli::RunConfig cfg;
    CLI::App app{"Constructs and certifies Nevanlinna-Pick problems whose set of uniqueness is an inner curve"};
    app.require_subcommand(1);

    // option holders; CLI11 cannot bind std::optional directly on every version
    double tol_rank = 0, tol_extend = 0, epsilon = 0, radius = 0;
    int degree = 0, quad = 0, nodes = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Artifact output path (stdout when omitted)");
        sub->add_option("--seed", cfg.seed, "Seed for all sampling")->capture_default_str();
    };
    auto kernel_opts = [&](CLI::App* sub) {
        sub->add_option("--degree", degree, "Kernel truncation: max total monomial degree");
        sub->add_option("--quad", quad, "Quadrature points on the circle");
    };
    auto tol_opts = [&](CLI::App* sub) {
        sub->add_option("--tol-rank", tol_rank, "Relative singular-value threshold");
        sub->add_option("--tol-extend", tol_extend, "Allowed on-curve extension deviation");
    };

    auto* construct = app.add_subcommand("construct", "Place nodes on a curve and write a problem");
    construct->add_option("--curve", cfg.curve, "Curve JSON")->required();
    construct->add_option("--function", cfg.function, "Rational inner function JSON")->required();
    construct->add_option("--nodes", nodes, "Number of nodes (default deg_V(F) + 1)");
    construct->add_option("--radius", radius, "Node radius in the parameter disc (default 0.7)");
    kernel_opts(construct);
    common(construct);

    auto* certify = app.add_subcommand("certify", "Certify a constructed problem");
    certify->add_option("--problem,--in", cfg.in, "Problem JSON")->required();
    certify->add_option("--function", cfg.function, "Rational inner function JSON")->required();
    certify->add_option("--snapshot", cfg.snapshot, "Kernel-space snapshot to reuse");
    certify->add_option("--epsilon", epsilon, "Fixed perturbation size (searched when omitted)");
    tol_opts(certify);
    common(certify);

    auto* extend = app.add_subcommand("extend", "Value forced on every solution at a new point");
    extend->add_option("--problem,--in", cfg.in, "Problem JSON")->required();
    extend->add_option("--at", cfg.at, "Curve parameter, or comma-separated point for ambient problems")->required();
    extend->add_option("--snapshot", cfg.snapshot, "Kernel-space snapshot to reuse");
    tol_opts(extend);
    common(extend);

    auto* degree_cmd = app.add_subcommand("degree", "Degree of F on a curve by formula and by winding count");
    degree_cmd->add_option("--curve", cfg.curve, "Curve JSON")->required();
    degree_cmd->add_option("--function", cfg.function, "Rational inner function JSON")->required();
    common(degree_cmd);

    auto* perturb = app.add_subcommand("perturb", "Build a rational inner perturbation");
    perturb->add_option("--in", cfg.in, "Perturbation spec JSON")->required();
    common(perturb);

    auto* demo = app.add_subcommand("neil-demo", "End-to-end run on the Neil parabola");
    demo->add_option("--epsilon", epsilon, "Perturbation size (default 0.1)");
    demo->add_option("--nodes", nodes, "Number of nodes (default 13)");
    demo->add_option("--radius", radius, "Node radius (default 0.7)");
    kernel_opts(demo);
    tol_opts(demo);
    common(demo);

    auto* gram = app.add_subcommand("kernel-gram", "Write a kernel-space snapshot");
    gram->add_option("--problem,--in", cfg.in, "Problem JSON (adds the node kernel matrix)");
    gram->add_option("--curve", cfg.curve, "Curve JSON when no problem is given");
    kernel_opts(gram);
    common(gram);

    auto* replay = app.add_subcommand("replay", "Recompute a certificate and compare its clauses");
    replay->add_option("--in", cfg.in, "Certificate JSON")->required();
    replay->add_option("--snapshot", cfg.snapshot, "Kernel-space snapshot to reuse");
    common(replay);

    CLI11_PARSE(app, argc, argv);

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "construct") cfg.command = Command::construct;
    else if (name == "certify") cfg.command = Command::certify;
    else if (name == "extend") cfg.command = Command::extend;
    else if (name == "degree") cfg.command = Command::degree;
    else if (name == "perturb") cfg.command = Command::perturb;
    else if (name == "neil-demo") cfg.command = Command::neil_demo;
    else if (name == "kernel-gram") cfg.command = Command::kernel_gram;
    else cfg.command = Command::replay;

    auto given = [&](const char* flag) { return sub->get_option_no_throw(flag) && sub->count(flag) > 0; };
    if (given("--tol-rank")) cfg.tol_rank = tol_rank;
    if (given("--tol-extend")) cfg.tol_extend = tol_extend;
    if (given("--epsilon")) cfg.epsilon = epsilon;
    if (given("--radius")) cfg.radius = radius;
    if (given("--degree")) cfg.degree = degree;
    if (given("--quad")) cfg.quad = quad;
    if (given("--nodes")) cfg.nodes = nodes;

    return npick::cli::run(cfg);
}
