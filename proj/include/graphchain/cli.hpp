#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "graphchain/dynamics.hpp"
#include "graphchain/emit.hpp"
#include "graphchain/energy_stats.hpp"
#include "graphchain/equilibria.hpp"
#include "graphchain/spectral.hpp"

namespace graphchain {

/// One fully resolved invocation: command, scenario parameters, output sink.
/// Values may come from flags or from a JSON config file; flags win.
struct RunConfig {
    std::string command;
    std::string variant = "fixed-right";
    std::string forcing; // none|point|opposed|uniform|periodic|drive ("" = variant default)

    int n = 0, n1 = 0, n2 = 0;
    double L = 0, L1 = 0, L2 = 0;
    double a = 0;
    bool a_set = false;
    double a0 = 0, a1 = 0, a2 = 0;
    double omega0 = 0, omega1 = 0, omega2 = 0;
    double omega = 0; // drive frequency (or circle stiffness shortcut)
    double M = 1;
    double f = 0, c = 0;

    double f1 = 1, w1 = 1; // continuum scaling

    double alpha = 1.0;
    double t_end = 100.0, dt = 0.01;
    int stride = 16;
    long seed = 12345;
    std::string init = "equilibrium"; // dynamics start: equilibrium|lattice|random

    double window = 0.0; // empirical averaging window

    std::string param = "f"; // sweep axis
    double from = 0, to = 0;
    int steps = 0;

    std::string output;
    std::string format = "csv";
};

namespace cli_detail {

inline std::string resolve_output(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    std::string name = cfg.output;
    if (name.empty()) name = cfg.command + (cfg.format == "json" ? ".json" : ".csv");
    fs::path p(name);
    if (p.is_absolute()) return p.string();
    const char* base = std::getenv("GRAPHCHAIN_OUT_DIR");
    fs::path dir = (base && *base) ? fs::path(base) : fs::path(".");
    return (dir / p).string();
}

inline double circle_stiffness(const RunConfig& cfg) {
    return cfg.omega1 > 0 ? cfg.omega1 : cfg.omega;
}

inline std::string default_forcing(const std::string& variant) {
    if (variant == "circle") return "drive";
    if (variant == "two-edge") return "none";
    return "point";
}

struct Solved {
    ScenarioSpec spec;
    EquilibriumResult result;
};

inline Solved solve_equilibrium(const RunConfig& cfg) {
    const std::string forcing = cfg.forcing.empty() ? default_forcing(cfg.variant) : cfg.forcing;
    const double a = cfg.a_set ? cfg.a : (cfg.n > 0 ? cfg.L / cfg.n : 0.0);
    if (cfg.variant == "circle") {
        const double w = circle_stiffness(cfg);
        Solved s{ScenarioSpec::circle(cfg.n, cfg.L, w, Forcing::circle_drive(cfg.f, cfg.f / cfg.n)),
                 circle_equilibrium(cfg.n, cfg.L, w, cfg.f)};
        return s;
    }
    if (cfg.variant == "fixed-right") {
        if (forcing == "uniform")
            return {ScenarioSpec::fixed_right_end(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1,
                                                  Forcing::uniform(cfg.f)),
                    uniform_force_fixed_end(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1, cfg.f)};
        if (forcing == "point" || forcing == "none")
            return {ScenarioSpec::fixed_right_end(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1,
                                                  Forcing::point_on_first(cfg.f)),
                    fixed_end_equilibrium(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1, cfg.f)};
        throw invalid_scenario("forcing '" + forcing + "' not valid for fixed-right");
    }
    if (cfg.variant == "spring-both") {
        if (forcing == "point" || forcing == "none")
            return {ScenarioSpec::spring_both_ends(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1,
                                                   Forcing::point_on_first(cfg.f)),
                    spring_ends_equilibrium(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1, cfg.f)};
        if (forcing == "opposed")
            return {ScenarioSpec::spring_both_ends(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1,
                                                   Forcing::opposed_ends(cfg.f)),
                    opposed_forces_equilibrium(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1, cfg.f)};
        if (forcing == "uniform")
            return {ScenarioSpec::spring_both_ends(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1,
                                                   Forcing::uniform(cfg.f)),
                    uniform_force_spring_ends(cfg.n, cfg.L, a, cfg.omega0, cfg.omega1, cfg.f)};
        throw invalid_scenario("forcing '" + forcing + "' not valid for spring-both");
    }
    if (cfg.variant == "two-edge") {
        ScenarioSpec spec = ScenarioSpec::two_edge(cfg.n1, cfg.n2, cfg.L1, cfg.L2, cfg.a0, cfg.a1,
                                                   cfg.a2, cfg.omega0, cfg.omega1, cfg.omega2,
                                                   cfg.M);
        return {spec, two_edge_equilibrium(spec)};
    }
    throw invalid_scenario("unknown variant '" + cfg.variant + "'");
}

inline JsonValue interval_json(const Interval& w) {
    JsonValue j;
    j.set("lo", w.lo).set("hi", w.hi).set("lo_closed", w.lo_closed).set("hi_closed", w.hi_closed);
    return j;
}

inline JsonValue metadata_json(const std::map<std::string, double>& meta) {
    JsonValue j;
    for (const auto& [k, v] : meta) j.set(k, v);
    return j;
}

inline void emit_configuration_csv(CsvTable& csv, const ScenarioSpec& spec,
                                   const Configuration& config, const std::string& regime) {
    auto add = [&](int edge, int index, double coord) {
        csv.row({std::to_string(edge), std::to_string(index), format_double(coord), regime});
    };
    switch (spec.variant) {
    case Variant::Circle: {
        auto xs = config.circle_coords();
        for (std::size_t i = 0; i < xs.size(); ++i) add(0, int(i), xs[i]);
        break;
    }
    case Variant::FixedRightEnd:
    case Variant::SpringBothEnds:
        for (std::size_t i = 0; i < config.coords.size(); ++i) add(0, int(i), config.coords[i]);
        break;
    case Variant::TwoEdge:
        for (std::size_t i = 0; i < config.edge1.size(); ++i) add(0, int(i + 1), config.edge1[i]);
        for (std::size_t i = 0; i < config.edge2.size(); ++i) add(1, int(i + 1), config.edge2[i]);
        break;
    }
}

inline JsonValue configuration_json(const ScenarioSpec& spec, const Configuration& config) {
    JsonValue j;
    switch (spec.variant) {
    case Variant::Circle:
        j.set("gaps", JsonValue::numbers(config.gaps));
        j.set("coordinates", JsonValue::numbers(config.circle_coords()));
        break;
    case Variant::FixedRightEnd:
    case Variant::SpringBothEnds:
        j.set("coordinates", JsonValue::numbers(config.coords));
        break;
    case Variant::TwoEdge:
        j.set("edge1", JsonValue::numbers(config.edge1));
        j.set("edge2", JsonValue::numbers(config.edge2));
        break;
    }
    return j;
}

inline int fail(const Error& e) {
    std::cerr << "error: " << e.error_class() << ": " << e.what() << "\n";
    const std::string& c = e.error_class();
    const bool usage = c == "invalid-scenario" || c == "dimension-mismatch" ||
                       c == "bad-step-size" || c == "bad-config" || c == "io-error";
    return usage ? 2 : 3;
}

inline int cmd_equilibrium(const RunConfig& cfg) {
    Solved s = solve_equilibrium(cfg);
    if (s.result.regime == Regime::NoEquilibrium)
        throw Error("no-equilibrium", "no admissible equilibrium for these parameters");
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue j;
        j.set("schema_version", 1).set("command", "equilibrium");
        j.set("regime", regime_name(s.result.regime));
        j.set("ordering_window", interval_json(s.result.ordering_window));
        j.set("metadata", metadata_json(s.result.metadata));
        j.set("configuration", configuration_json(s.spec, s.result.config));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"edge", "index", "coordinate", "regime"});
        emit_configuration_csv(csv, s.spec, s.result.config, regime_name(s.result.regime));
        write_file(out, csv.str());
    }
    std::cout << "equilibrium: regime=" << regime_name(s.result.regime) << " -> " << out << "\n";
    return 0;
}

inline int cmd_spectrum(const RunConfig& cfg) {
    SpectralModel m = eigen_closed_form(cfg.n, cfg.omega1);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue j;
        j.set("schema_version", 1).set("command", "spectrum").set("n", cfg.n);
        j.set("omega1", cfg.omega1);
        j.set("nu", JsonValue::numbers(m.nu));
        j.set("proj_last", JsonValue::numbers(m.proj_last));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"k", "nu", "lambda", "proj_last"});
        for (int k = 1; k <= m.n; ++k)
            csv.row({std::to_string(k), format_double(m.nu[k - 1]),
                     format_double(m.eigenvalue(k)), format_double(m.proj_last[k - 1])});
        write_file(out, csv.str());
    }
    std::cout << "spectrum: n=" << cfg.n << " -> " << out << "\n";
    return 0;
}

inline int cmd_energy(const RunConfig& cfg) {
    ForcedResponse fr(eigen_closed_form(cfg.n, cfg.omega1), cfg.c, cfg.omega);
    EnergyReport rep = energy_report(fr, cfg.window);
    EnergyAverages emp;
    if (cfg.window > 0) emp = time_average_energies(fr, cfg.window);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue j;
        j.set("schema_version", 1).set("command", "energy");
        j.set("mean_kinetic", JsonValue::numbers(rep.mean_kinetic));
        j.set("mean_potential", JsonValue::numbers(rep.mean_potential));
        if (cfg.window > 0) {
            j.set("empirical_kinetic", JsonValue::numbers(emp.kinetic));
            j.set("empirical_potential", JsonValue::numbers(emp.potential));
            j.set("virial_residual", rep.virial_residual);
        }
        if (!rep.limits.empty()) j.set("limits", metadata_json(rep.limits));
        write_file(out, j.dump(2));
    } else {
        std::vector<std::string> head = {"j", "mean_kinetic", "mean_potential"};
        if (cfg.window > 0) {
            head.push_back("empirical_kinetic");
            head.push_back("empirical_potential");
        }
        CsvTable csv(head);
        for (int j = 1; j <= cfg.n; ++j) {
            std::vector<std::string> row = {std::to_string(j),
                                            format_double(rep.mean_kinetic[j - 1]),
                                            format_double(rep.mean_potential[j - 1])};
            if (cfg.window > 0) {
                row.push_back(format_double(emp.kinetic[j - 1]));
                row.push_back(format_double(emp.potential[j - 1]));
            }
            csv.row(row);
        }
        write_file(out, csv.str());
    }
    std::cout << "energy: n=" << cfg.n << " -> " << out << "\n";
    return 0;
}

inline int cmd_limits(const RunConfig& cfg) {
    const double I = limit_integral(cfg.omega1, cfg.omega);
    const double K = limit_kinetic_last(cfg.omega1, cfg.omega, cfg.c);
    const double U = limit_potential_last(cfg.omega1, cfg.omega, cfg.c);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue j;
        j.set("schema_version", 1).set("command", "limits");
        j.set("I", I).set("K", K).set("U_last", U);
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"I", "K", "U_last"});
        csv.row({format_double(I), format_double(K), format_double(U)});
        write_file(out, csv.str());
    }
    std::cout << "limits: I=" << format_double(I) << " K=" << format_double(K)
              << " U_last=" << format_double(U) << " -> " << out << "\n";
    return 0;
}

inline int cmd_dynamics(const RunConfig& cfg) {
    Solved s = solve_equilibrium(cfg);
    const std::size_t nfree = free_coordinate_count(s.spec);
    ChainState init;
    init.p.assign(nfree, 0.0);
    if (cfg.init == "equilibrium" || cfg.init == "random") {
        init.q = free_coordinates(s.spec, s.result.config);
        if (cfg.init == "random") {
            std::mt19937_64 rng(std::uint64_t(cfg.seed));
            std::uniform_real_distribution<double> jitter(-0.1 * s.spec.natural_spacing,
                                                          0.1 * s.spec.natural_spacing);
            for (double& x : init.q) x += jitter(rng);
        }
    } else if (cfg.init == "lattice") {
        std::vector<double> xs(std::size_t(s.spec.n) + 1);
        for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = double(k) * s.spec.natural_spacing;
        init.q = free_coordinates(s.spec, Configuration::chain(xs));
    } else {
        throw invalid_scenario("unknown init '" + cfg.init + "'");
    }

    DissipativeSpec dspec{s.spec, DissipationLaw::linear(cfg.alpha)};
    Trajectory traj = integrate(dspec, init, cfg.t_end, cfg.dt, cfg.stride);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue rows = JsonValue::array();
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            JsonValue r;
            r.set("t", traj.times[i]);
            r.set("q", JsonValue::numbers(traj.states[i].q));
            r.set("p", JsonValue::numbers(traj.states[i].p));
            rows.push(std::move(r));
        }
        JsonValue j;
        j.set("schema_version", 1).set("command", "dynamics");
        j.set("states", std::move(rows));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"t", "index", "q", "p"});
        for (std::size_t i = 0; i < traj.states.size(); ++i)
            for (std::size_t k = 0; k < traj.states[i].q.size(); ++k)
                csv.row({format_double(traj.times[i]), std::to_string(k),
                         format_double(traj.states[i].q[k]), format_double(traj.states[i].p[k])});
        write_file(out, csv.str());
    }
    std::cout << "dynamics: " << traj.states.size() << " states -> " << out << "\n";
    return 0;
}

inline int cmd_flow(const RunConfig& cfg) {
    const double w = circle_stiffness(cfg);
    DissipationLaw law = DissipationLaw::linear(cfg.alpha);
    auto [traj, rep] = simulate_circle_flow(cfg.n, cfg.L, w, cfg.f, law, cfg.t_end, cfg.dt,
                                            cfg.stride);
    const double target = stationary_flow_velocity(cfg.f, cfg.n, law);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue j;
        j.set("schema_version", 1).set("command", "flow");
        j.set("velocity", rep.velocity);
        j.set("target_velocity", target);
        j.set("velocity_spread", rep.velocity_spread);
        j.set("gaps", JsonValue::numbers(rep.gaps));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"index", "gap", "velocity", "target_velocity"});
        for (std::size_t k = 0; k < rep.gaps.size(); ++k)
            csv.row({std::to_string(k + 1), format_double(rep.gaps[k]),
                     format_double(rep.velocity), format_double(target)});
        write_file(out, csv.str());
    }
    std::cout << "flow: velocity=" << format_double(rep.velocity) << " target="
              << format_double(target) << " -> " << out << "\n";
    return 0;
}

inline int cmd_continuum(const RunConfig& cfg) {
    ContinuumParams p{cfg.f1, cfg.w1, cfg.L > 0 ? cfg.L : 1.0};
    ContinuumReport rep = continuum_convergence(p, cfg.n);
    const std::string out = resolve_output(cfg);
    if (cfg.format == "json") {
        JsonValue dens = JsonValue::array();
        for (const auto& d : rep.densities) {
            JsonValue r;
            r.set("x", d.x).set("lattice", d.lattice).set("equilibrium", d.equilibrium);
            r.set("lattice_formula", d.lattice_formula);
            r.set("equilibrium_formula", d.equilibrium_formula);
            dens.push(std::move(r));
        }
        JsonValue j;
        j.set("schema_version", 1).set("command", "continuum").set("n", rep.n);
        j.set("x0", rep.x0).set("x0_limit", rep.x0_limit);
        j.set("u_int", rep.u_int).set("u_ext", rep.u_ext).set("u_total", rep.u_total);
        j.set("u_total_lattice", rep.u_total_lattice).set("target", rep.target);
        j.set("densities", std::move(dens));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"x", "lattice", "equilibrium", "lattice_formula", "equilibrium_formula"});
        for (const auto& d : rep.densities)
            csv.row({format_double(d.x), format_double(d.lattice), format_double(d.equilibrium),
                     format_double(d.lattice_formula), format_double(d.equilibrium_formula)});
        write_file(out, csv.str());
    }
    std::cout << "continuum: u_total=" << format_double(rep.u_total) << " target="
              << format_double(rep.target) << " -> " << out << "\n";
    return 0;
}

inline RunConfig with_param(RunConfig cfg, const std::string& name, double value) {
    if (name == "f") cfg.f = value;
    else if (name == "a") { cfg.a = value; cfg.a_set = true; }
    else if (name == "L") cfg.L = value;
    else if (name == "omega0") cfg.omega0 = value;
    else if (name == "omega1") cfg.omega1 = value;
    else if (name == "c") cfg.c = value;
    else throw invalid_scenario("unknown sweep parameter '" + name + "'");
    return cfg;
}

inline int cmd_sweep(const RunConfig& cfg) {
    struct Row {
        double value = 0.0;
        std::string regime;
        std::map<std::string, double> meta;
    };
    std::vector<double> grid;
    for (int i = 0; i < cfg.steps; ++i)
        grid.push_back(cfg.steps == 1 ? cfg.from
                                      : cfg.from + i * (cfg.to - cfg.from) / (cfg.steps - 1));
    std::vector<Row> rows(grid.size());

    // Work items are independent; results land in their grid slot, so the
    // emitted order never depends on scheduling.
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), unsigned(grid.size())));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
                try {
                    Solved s = solve_equilibrium(with_param(cfg, cfg.param, grid[i]));
                    rows[i] = Row{grid[i], regime_name(s.result.regime), s.result.metadata};
                } catch (const Error& e) {
                    rows[i] = Row{grid[i], "error:" + e.error_class(), {}};
                }
            }
        });
    for (auto& th : pool) th.join();

    const std::string out = resolve_output(cfg);
    auto meta_of = [](const Row& r, const char* key) {
        auto it = r.meta.find(key);
        return it == r.meta.end() ? std::string() : format_double(it->second);
    };
    if (cfg.format == "json") {
        JsonValue arr = JsonValue::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            JsonValue r;
            r.set("grid_index", int(i)).set(cfg.param, rows[i].value);
            r.set("regime", rows[i].regime);
            r.set("metadata", metadata_json(rows[i].meta));
            arr.push(std::move(r));
        }
        JsonValue j;
        j.set("schema_version", 1).set("command", "sweep").set("param", cfg.param);
        j.set("rows", std::move(arr));
        write_file(out, j.dump(2));
    } else {
        CsvTable csv({"grid_index", "param", "value", "regime", "x0", "gap", "energy"});
        for (std::size_t i = 0; i < rows.size(); ++i)
            csv.row({std::to_string(i), cfg.param, format_double(rows[i].value), rows[i].regime,
                     meta_of(rows[i], "x0"), meta_of(rows[i], "gap"), meta_of(rows[i], "energy")});
        write_file(out, csv.str());
    }
    std::cout << "sweep: " << rows.size() << " points -> " << out << "\n";
    return 0;
}

} // namespace cli_detail

/// Executes the resolved configuration. Returns the process exit status:
/// 0 success, 2 validation/usage error, 3 numerical-domain error; the error
/// class is printed on standard error.
inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "equilibrium") return cli_detail::cmd_equilibrium(cfg);
        if (cfg.command == "spectrum") return cli_detail::cmd_spectrum(cfg);
        if (cfg.command == "energy") return cli_detail::cmd_energy(cfg);
        if (cfg.command == "limits") return cli_detail::cmd_limits(cfg);
        if (cfg.command == "dynamics") return cli_detail::cmd_dynamics(cfg);
        if (cfg.command == "flow") return cli_detail::cmd_flow(cfg);
        if (cfg.command == "continuum") return cli_detail::cmd_continuum(cfg);
        if (cfg.command == "sweep") return cli_detail::cmd_sweep(cfg);
        std::cerr << "error: bad-config: unknown command '" << cfg.command << "'\n";
        return 2;
    } catch (const Error& e) {
        return cli_detail::fail(e);
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
}

/// Overlays values from a JSON config file; keys use the long flag names.
/// `provided` lists flags given on the command line, which take precedence.
inline void merge_config_file(RunConfig& cfg, const std::string& path,
                              const std::vector<std::string>& provided) {
    std::ifstream is(path);
    if (!is) throw Error("bad-config", "cannot read config file " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw Error("bad-config", std::string("config parse failure: ") + e.what());
    }
    auto given = [&](const std::string& k) {
        return std::find(provided.begin(), provided.end(), k) != provided.end();
    };
    auto str = [&](const char* k, std::string& slot) {
        if (j.contains(k) && !given(k)) slot = j[k].get<std::string>();
    };
    auto num = [&](const char* k, double& slot) {
        if (j.contains(k) && !given(k)) slot = j[k].get<double>();
    };
    auto integer = [&](const char* k, int& slot) {
        if (j.contains(k) && !given(k)) slot = j[k].get<int>();
    };
    str("command", cfg.command);
    str("variant", cfg.variant);
    str("forcing", cfg.forcing);
    integer("n", cfg.n);
    integer("n1", cfg.n1);
    integer("n2", cfg.n2);
    num("L", cfg.L);
    num("L1", cfg.L1);
    num("L2", cfg.L2);
    if (j.contains("a") && !given("a")) {
        cfg.a = j["a"].get<double>();
        cfg.a_set = true;
    }
    num("a0", cfg.a0);
    num("a1", cfg.a1);
    num("a2", cfg.a2);
    num("omega0", cfg.omega0);
    num("omega1", cfg.omega1);
    num("omega2", cfg.omega2);
    num("omega", cfg.omega);
    num("M", cfg.M);
    num("f", cfg.f);
    num("c", cfg.c);
    num("f1", cfg.f1);
    num("w1", cfg.w1);
    num("alpha", cfg.alpha);
    num("t-end", cfg.t_end);
    num("dt", cfg.dt);
    integer("stride", cfg.stride);
    if (j.contains("seed") && !given("seed")) cfg.seed = j["seed"].get<long>();
    str("init", cfg.init);
    num("window", cfg.window);
    str("param", cfg.param);
    num("from", cfg.from);
    num("to", cfg.to);
    integer("steps", cfg.steps);
    str("output", cfg.output);
    str("format", cfg.format);
}

} // namespace graphchain
