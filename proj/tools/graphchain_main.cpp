// Command-line front end: harmonic multi-particle systems on metric graphs.
//
//   graphchain equilibrium --variant fixed-right --n 2 --L 2 --a 1 \
//       --omega0 1 --omega1 1 --f 1
//   graphchain limits --omega1 1 --omega 3 --c 1 --format json
//
// Exit status: 0 success, 2 validation error, 3 numerical-domain error
// (resonance, integrand pole, no admissible equilibrium); the machine
// readable error class is printed on stderr.

#include <CLI11.hpp>

#include "graphchain/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"harmonic chains on metric graphs"};
    app.require_subcommand(1);

    graphchain::RunConfig cfg;
    std::string config_file;
    std::vector<std::string> provided;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file; flags override its values");
        sub->add_option("--output", cfg.output, "output file (GRAPHCHAIN_OUT_DIR resolves relative paths)");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--variant", cfg.variant, "circle | fixed-right | spring-both | two-edge");
        sub->add_option("--forcing", cfg.forcing, "none | point | opposed | uniform | drive");
        sub->add_option("--n", cfg.n);
        sub->add_option("--n1", cfg.n1);
        sub->add_option("--n2", cfg.n2);
        sub->add_option("--L", cfg.L);
        sub->add_option("--L1", cfg.L1);
        sub->add_option("--L2", cfg.L2);
        sub->add_option("--a", cfg.a);
        sub->add_option("--a0", cfg.a0);
        sub->add_option("--a1", cfg.a1);
        sub->add_option("--a2", cfg.a2);
        sub->add_option("--omega0", cfg.omega0);
        sub->add_option("--omega1", cfg.omega1);
        sub->add_option("--omega2", cfg.omega2);
        sub->add_option("--omega", cfg.omega, "drive frequency (circle: stiffness shortcut)");
        sub->add_option("--M", cfg.M);
        sub->add_option("--f", cfg.f);
        sub->add_option("--c", cfg.c);
        sub->add_option("--f1", cfg.f1);
        sub->add_option("--w1", cfg.w1);
        sub->add_option("--alpha", cfg.alpha);
        sub->add_option("--t-end", cfg.t_end);
        sub->add_option("--dt", cfg.dt);
        sub->add_option("--stride", cfg.stride);
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--init", cfg.init, "equilibrium | lattice | random");
        sub->add_option("--window", cfg.window, "empirical averaging window");
        sub->add_option("--param", cfg.param, "sweep axis (f, a, L, omega0, omega1, c)");
        sub->add_option("--from", cfg.from);
        sub->add_option("--to", cfg.to);
        sub->add_option("--steps", cfg.steps);
    };

    for (const char* name : {"equilibrium", "spectrum", "energy", "limits", "dynamics", "flow",
                             "continuum", "sweep"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    for (const auto* opt : sub->get_options())
        if (opt->count() > 0 && opt->get_lnames().size() > 0)
            provided.push_back(opt->get_lnames().front());
    // "a" given on the command line pins the natural spacing; otherwise L/n.
    for (const auto& name : provided)
        if (name == "a") cfg.a_set = true;

    if (!config_file.empty()) {
        try {
            graphchain::merge_config_file(cfg, config_file, provided);
        } catch (const graphchain::Error& e) {
            std::cerr << "error: " << e.error_class() << ": " << e.what() << "\n";
            return 2;
        }
        cfg.command = sub->get_name(); // the subcommand on the command line wins
    }

    return graphchain::run(cfg);
}
