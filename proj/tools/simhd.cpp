// Command line driver: run benchmarks, verify acceptance criteria, and
// compare the semi-implicit scheme against the explicit reference scheme.

#include "simhd/config.hpp"
#include "simhd/snapshot.hpp"
#include "simhd/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace simhd;

namespace {

ProblemConfig load_with_overrides(const std::string& path,
                                  const std::vector<std::string>& overrides) {
    ProblemConfig cfg = load_config(path);
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override must be key=value: " + ov);
        const std::string key = ov.substr(0, eq), value = ov.substr(eq + 1);
        if (key == "problem") throw ConfigError("the problem id cannot be overridden");
        apply_config_key(cfg, key, value);
    }
    if (const char* env = std::getenv("SIMHD_OUTPUT_DIR")) cfg.out_dir = env;
    return cfg;
}

struct SnapshotWriter {
    fs::path dir;
    const ProblemConfig* cfg;
    int counter = 0;

    static std::ofstream open(const fs::path& p) {
        std::ofstream os(p);
        if (!os) throw ConfigError("cannot write " + p.string());
        return os;
    }

    template <class Sim>
    void write(const Sim& sim) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04d", counter++);
        if constexpr (std::is_same_v<Sim, Sim2D>) {
            {
                std::ofstream os = open(dir / (std::string(name) + ".csv"));
                write_snapshot_csv(os, sim, cfg->eos(), cfg->pressure_floor);
            }
            std::ofstream os = open(dir / (std::string(name) + ".vtk"));
            write_snapshot_vtk(os, sim, cfg->eos(), cfg->pressure_floor);
        } else {
            std::ofstream os = open(dir / (std::string(name) + ".csv"));
            write_snapshot_csv(os, sim, cfg->eos());
        }
        std::printf("  wrote %s.csv (t = %g)\n", (dir / name).c_str(), sim.t);
    }
};

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
    ProblemConfig cfg = load_with_overrides(config_path, overrides);
    fs::create_directories(cfg.out_dir);
    SnapshotWriter writer{cfg.out_dir, &cfg};

    std::ofstream reports(fs::path(cfg.out_dir) / "reports.csv");
    write_report_header(reports);
    auto on_report = [&](const StepReport& r) { write_report_row(reports, r); };

    std::printf("running %s (%dx%d, %s, t_final = %g)\n", cfg.problem.c_str(),
                cfg.nx, cfg.dim == 2 ? cfg.ny : 1,
                cfg.semi_implicit ? "semi-implicit" : "explicit-reference",
                cfg.t_final);

    const auto tic = std::chrono::steady_clock::now();
    RunSummary sum;
    ConservationAudit audit;
    int exit_code = 0;
    long long cells = static_cast<long long>(cfg.nx) * (cfg.dim == 2 ? cfg.ny : 1);
    // On a solver failure the step is transactional, so the simulation still
    // holds the last completed state; persist it before reporting the abort.
    auto guarded = [&](auto& sim, auto&& run_fn) {
        try {
            sum = run_fn(sim);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "run aborted at t = %.8g: %s\n", sim.t, e.what());
            try {
                writer.write(sim);
                std::fprintf(stderr, "last good state persisted to %s\n",
                             cfg.out_dir.c_str());
            } catch (const std::exception& we) {
                std::fprintf(stderr, "could not snapshot the aborted state: %s\n",
                             we.what());
            }
            exit_code = 1;
        }
    };
    if (cfg.dim == 1) {
        Sim1D sim = make_sim_1d(cfg);
        guarded(sim, [&](Sim1D& s) {
            return run_1d(s, cfg.solver(), cfg.control(), &audit,
                          [&](const Sim1D& snap) { writer.write(snap); }, on_report);
        });
    } else {
        Sim2D sim = make_sim_2d(cfg);
        guarded(sim, [&](Sim2D& s) {
            return run_2d(s, cfg.solver(), cfg.control(), &audit,
                          [&](const Sim2D& snap) { writer.write(snap); }, on_report);
        });
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();

    {
        std::ofstream os(fs::path(cfg.out_dir) / "manifest.cfg");
        write_manifest(os, cfg, sum, wall, cells);
    }
    if (exit_code == 0) {
        std::printf("finished: %lld steps to t = %g in %.2f s", sum.steps,
                    sum.final_time, wall);
        if (sum.steps > 0)
            std::printf(" (%.2f us per cell-step)",
                        wall * 1e6 / (static_cast<double>(sum.steps) * cells));
        std::printf("\n  max |div B| = %.3e, max conservation drift = %.3e\n",
                    sum.max_div_b, sum.max_drift);
    }
    return exit_code;
}

int cmd_verify(const std::string& config_path,
               const std::vector<std::string>& overrides) {
    ProblemConfig cfg = load_with_overrides(config_path, overrides);
    std::printf("verifying %s\n", cfg.problem.c_str());
    int failures = 0;
    for (const CheckResult& r : verify_problem(cfg)) {
        std::printf("[%s] %s  --  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& overrides) {
    ProblemConfig cfg = load_with_overrides(config_path, overrides);
    if (cfg.dim != 2) {
        std::fprintf(stderr, "compare requires a 2D problem\n");
        return 1;
    }
    struct Leg {
        const char* name;
        bool semi;
        long long steps = 0;
        double dt0 = 0.0, wall = 0.0;
    } legs[2] = {{"semi-implicit", true}, {"explicit-reference", false}};

    for (Leg& leg : legs) {
        ProblemConfig c = cfg;
        c.semi_implicit = leg.semi;
        Sim2D sim = make_sim_2d(c);
        leg.dt0 = compute_dt_2d(sim.q, sim.mesh, c.solver());
        const auto tic = std::chrono::steady_clock::now();
        const RunSummary sum = run_2d(sim, c.solver(), c.control());
        leg.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
                       .count();
        leg.steps = sum.steps;
        std::printf("%-19s: initial dt = %.4e, steps = %lld, wall = %.2f s\n",
                    leg.name, leg.dt0, leg.steps, leg.wall);
    }
    if (legs[0].steps > 0 && legs[1].steps > 0) {
        std::printf("step ratio (explicit / semi-implicit) = %.1f\n",
                    static_cast<double>(legs[1].steps) /
                        static_cast<double>(legs[0].steps));
        std::printf("wall-clock speedup of the semi-implicit scheme = %.1f\n",
                    legs[1].wall / std::max(legs[0].wall, 1e-9));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simhd: semi-implicit divergence-free finite volume MHD solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "integrate a benchmark and write snapshots");
    run->add_option("config", config_path, "config file (key = value)")->required();
    run->add_option("--override", overrides, "key=value overriding the config");

    auto* list = app.add_subcommand("list-problems", "print the registered problem ids");

    auto* verify = app.add_subcommand(
        "verify", "run the acceptance checks mapped to the configured problem");
    verify->add_option("config", config_path, "config file")->required();
    verify->add_option("--override", overrides, "key=value overriding the config");

    auto* compare = app.add_subcommand(
        "compare", "run both schemes and report steps and wall-clock");
    compare->add_option("config", config_path, "config file")->required();
    compare->add_option("--override", overrides, "key=value overriding the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (list->parsed()) {
            for (const std::string& id : problem_ids()) std::printf("%s\n", id.c_str());
            return 0;
        }
        if (run->parsed()) return cmd_run(config_path, overrides);
        if (verify->parsed()) return cmd_verify(config_path, overrides);
        if (compare->parsed()) return cmd_compare(config_path, overrides);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
