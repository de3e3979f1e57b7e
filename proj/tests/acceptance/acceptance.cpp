// Acceptance suite: runs every acceptance criterion at its published desk
// scale and prints one pass/fail line per criterion. Exit code is the
// number of failed criteria. With arguments, runs only the named criteria
// (e.g. `acceptance 3 4`).

#include "simhd/verify.hpp"

#include <cstdio>
#include <cstring>
#include <set>
#include <string>

using namespace simhd;

namespace {

int g_failures = 0;

void report(int criterion, const CheckResult& r) {
    std::printf("[%s] criterion %d: %s  --  %s\n", r.pass ? "PASS" : "FAIL",
                criterion, r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++g_failures;
}

void criterion_1() {
    report(1, check_rp0_contact(default_config("rp0")));
}

void criterion_2() {
    report(2, check_stokes_erf(default_config("shear_layer")));
    report(2, check_stokes_erf(default_config("current_sheet")));
}

ProblemConfig desk_scale(const std::string& id, int nx, int ny, double t_final) {
    ProblemConfig c = default_config(id);
    c.nx = nx;
    c.ny = ny;
    c.t_final = t_final;
    return c;
}

void criterion_3_4() {
    const ProblemConfig cases[] = {
        desk_scale("field_loop", 128, 64, 1.0),
        desk_scale("rotor", 128, 128, 0.25),
        desk_scale("blast", 128, 128, 0.01),
        desk_scale("orszag_tang", 128, 128, 2.0),
        desk_scale("kelvin_helmholtz", 128, 128, 4.0),
    };
    for (const ProblemConfig& c : cases) {
        try {
            BenchmarkChecks bc = check_benchmark_run(c);
            report(3, bc.div_b);
            if (bc.periodic) report(4, bc.conservation);
        } catch (const std::exception& e) {
            report(3, {c.problem + ": benchmark run", false,
                       std::string("failed: ") + e.what()});
        }
    }
}

void criterion_5() {
    report(5, check_step_ratio(desk_scale("field_loop", 128, 64, 0.1)));
}

void criterion_6() {
    report(6, check_pressure_properties());
}

void criterion_7() {
    report(7, check_splitting_identities());
}

void criterion_8() {
    for (const char* id : {"rp1", "rp2", "rp3", "rp4"})
        report(8, check_riemann_robustness(default_config(id)));
}

void criterion_9() {
    report(9, check_manufactured_solve());
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));
    auto want = [&](int k) { return wanted.empty() || wanted.count(k) > 0; };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3) || want(4)) criterion_3_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();

    if (g_failures > 0) std::printf("%d criterion check(s) FAILED\n", g_failures);
    return g_failures;
}
