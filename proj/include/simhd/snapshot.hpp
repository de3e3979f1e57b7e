#ifndef SIMHD_SNAPSHOT_HPP
#define SIMHD_SNAPSHOT_HPP

#include "simhd/config.hpp"
#include "simhd/driver.hpp"
#include "simhd/problems.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace simhd {

namespace detail {
// Full round-trip precision for doubles.
inline std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
} // namespace detail

inline constexpr const char* snapshot_csv_header =
    "x,y,rho,u,v,w,p,Bx,By,Bz,divB";

// CSV snapshot: a self-describing comment line, the fixed header row, then
// one row per cell at full printed precision. Gaussian units throughout.
inline void write_snapshot_csv(std::ostream& os, const Sim1D& sim, const Eos& eos) {
    os << "# t=" << detail::fmt17(sim.t) << " nx=" << sim.mesh.nx()
       << " ny=1 units=Gaussian";
    const Totals tot = conservation_totals(sim.q, sim.mesh);
    os << " totals=";
    for (int k = 0; k < n_comp; ++k) os << (k ? "," : "") << detail::fmt17(tot[k]);
    os << " max_div_b=0\n";
    os << snapshot_csv_header << "\n";
    for (int i = 0; i < sim.mesh.nx(); ++i) {
        const Prim v = cons_to_prim(sim.q(i), eos);
        os << detail::fmt17(sim.mesh.xc(i)) << ",0," << detail::fmt17(v.rho) << ','
           << detail::fmt17(v.u) << ',' << detail::fmt17(v.v) << ','
           << detail::fmt17(v.w) << ',' << detail::fmt17(v.p) << ','
           << detail::fmt17(v.bx) << ',' << detail::fmt17(v.by) << ','
           << detail::fmt17(v.bz) << ",0\n";
    }
}

inline void write_snapshot_csv(std::ostream& os, const Sim2D& sim, const Eos& eos,
                               double p_floor = 0.0) {
    os << "# t=" << detail::fmt17(sim.t) << " nx=" << sim.mesh.nx()
       << " ny=" << sim.mesh.ny() << " units=Gaussian";
    const Totals tot = conservation_totals(sim.q, sim.mesh);
    os << " totals=";
    for (int k = 0; k < n_comp; ++k) os << (k ? "," : "") << detail::fmt17(tot[k]);
    os << " max_div_b=" << detail::fmt17(max_abs_div_b(sim.fb, sim.mesh)) << "\n";
    os << snapshot_csv_header << "\n";
    const Field2D<double> div = discrete_div_b(sim.fb, sim.mesh);
    for (int j = 0; j < sim.mesh.ny(); ++j) {
        for (int i = 0; i < sim.mesh.nx(); ++i) {
            const Prim v = cons_to_prim_floored(sim.q(i, j), eos, p_floor);
            os << detail::fmt17(sim.mesh.xc(i)) << ',' << detail::fmt17(sim.mesh.yc(j))
               << ',' << detail::fmt17(v.rho) << ',' << detail::fmt17(v.u) << ','
               << detail::fmt17(v.v) << ',' << detail::fmt17(v.w) << ','
               << detail::fmt17(v.p) << ',' << detail::fmt17(v.bx) << ','
               << detail::fmt17(v.by) << ',' << detail::fmt17(v.bz) << ','
               << detail::fmt17(div(i, j)) << "\n";
        }
    }
}

// Legacy ASCII VTK structured points with one SCALARS/VECTORS block per
// field, for visualization only.
inline void write_snapshot_vtk(std::ostream& os, const Sim2D& sim, const Eos& eos,
                               double p_floor = 0.0) {
    const int nx = sim.mesh.nx(), ny = sim.mesh.ny();
    os << "# vtk DataFile Version 3.0\n";
    os << "simhd snapshot t=" << detail::fmt17(sim.t) << "\n";
    os << "ASCII\n";
    os << "DATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << nx + 1 << ' ' << ny + 1 << " 1\n";
    os << "ORIGIN " << detail::fmt17(sim.mesh.x_l()) << ' '
       << detail::fmt17(sim.mesh.y_l()) << " 0\n";
    os << "SPACING " << detail::fmt17(sim.mesh.dx()) << ' '
       << detail::fmt17(sim.mesh.dy()) << " 1\n";
    os << "CELL_DATA " << nx * ny << "\n";

    Field2D<Prim> prim(nx, ny, Loc::Cell, 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            prim(i, j) = cons_to_prim_floored(sim.q(i, j), eos, p_floor);

    auto scalars = [&](const char* name, auto value) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) os << detail::fmt17(value(i, j)) << "\n";
    };
    auto vectors = [&](const char* name, auto value) {
        os << "VECTORS " << name << " double\n";
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const auto v = value(i, j);
                os << detail::fmt17(v[0]) << ' ' << detail::fmt17(v[1]) << ' '
                   << detail::fmt17(v[2]) << "\n";
            }
        }
    };

    scalars("rho", [&](int i, int j) { return prim(i, j).rho; });
    scalars("p", [&](int i, int j) { return prim(i, j).p; });
    vectors("velocity", [&](int i, int j) {
        return std::array<double, 3>{prim(i, j).u, prim(i, j).v, prim(i, j).w};
    });
    vectors("B", [&](int i, int j) {
        return std::array<double, 3>{prim(i, j).bx, prim(i, j).by, prim(i, j).bz};
    });
    const Field2D<double> div = discrete_div_b(sim.fb, sim.mesh);
    scalars("divB", [&](int i, int j) { return div(i, j); });
}

inline constexpr const char* code_version = "simhd 1.0.0";

// Run manifest: the resolved configuration in the flat config format
// (re-parseable with load_config) plus version and per-step cost notes as
// comments.
inline void write_manifest(std::ostream& os, const ProblemConfig& c,
                           const RunSummary& sum, double wall_seconds,
                           long long cells) {
    os << "# " << code_version << "\n";
    os << "# steps = " << sum.steps << "\n";
    os << "# wall_seconds = " << detail::fmt17(wall_seconds) << "\n";
    const double denom = static_cast<double>(sum.steps) * static_cast<double>(cells);
    os << "# us_per_cell_step = "
       << detail::fmt17(denom > 0 ? wall_seconds * 1e6 / denom : 0.0) << "\n";
    os << "# max_div_b = " << detail::fmt17(sum.max_div_b) << "\n";
    os << "# max_drift = " << detail::fmt17(sum.max_drift) << "\n";
    os << config_to_text(c);
}

// One row per step: time, step size, conserved totals, divergence and
// solver diagnostics.
inline void write_report_header(std::ostream& os) {
    os << "t,dt,mass,mom_x,mom_y,mom_z,energy,Bx,By,Bz,max_div_b,max_drift,"
          "cg_iterations,newton_residual\n";
}

inline void write_report_row(std::ostream& os, const StepReport& r) {
    os << detail::fmt17(r.t) << ',' << detail::fmt17(r.dt);
    for (double v : r.totals) os << ',' << detail::fmt17(v);
    os << ',' << detail::fmt17(r.max_div_b) << ',' << detail::fmt17(r.max_drift)
       << ',' << r.cg_iterations << ','
       << detail::fmt17(r.picard_residuals.empty() ? 0.0
                                                   : r.picard_residuals.back())
       << "\n";
}

} // namespace simhd

#endif
