#ifndef SIMHD_PROBLEMS_HPP
#define SIMHD_PROBLEMS_HPP

#include "simhd/ct.hpp"
#include "simhd/driver.hpp"
#include "simhd/grid.hpp"
#include "simhd/state.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace simhd {

// Complete description of a benchmark run: domain, mesh, boundary
// conditions, fluid parameters, scheme selection and output control.
struct ProblemConfig {
    std::string problem;
    int dim = 1;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 100, ny = 1;
    Bc bc_x = Bc::Periodic, bc_y = Bc::Periodic;
    double gamma = 1.4;
    double c_v = 1.0;
    double mu = 0.0, lambda_c = 0.0, eta = 0.0;
    double cfl = 0.9;
    double t_final = 1.0;
    int order = 2;
    bool semi_implicit = true;
    int r_max = 2;
    double output_interval = 0.0;
    double pressure_floor = 0.0;
    double dt_fixed = 0.0;
    std::string out_dir = "out";

    Eos eos() const { return Eos(gamma, c_v); }
    FluidParams fluid() const { return FluidParams{mu, lambda_c, eta}; }
    SolverOptions solver() const {
        SolverOptions s{eos(), fluid(), order, semi_implicit, cfl, PressureOptions{}};
        s.pressure.r_max = r_max;
        s.pressure.p_floor = pressure_floor;
        return s;
    }
    RunControl control() const {
        RunControl rc;
        rc.t_final = t_final;
        rc.dt_fixed = dt_fixed;
        rc.output_interval = output_interval;
        return rc;
    }
    Mesh1D mesh1d() const { return Mesh1D(nx, x_min, x_max); }
    Mesh2D mesh2d() const { return Mesh2D(nx, ny, x_min, x_max, y_min, y_max); }
};

// Registered benchmark setups, each addressable by id with its published
// parameters as defaults.
inline const std::vector<std::string>& problem_ids() {
    static const std::vector<std::string> ids = {
        "rp0",         "rp1",   "rp2",
        "rp3",         "rp4",   "field_loop",
        "rotor",       "blast", "orszag_tang",
        "orszag_tang_viscous",  "shear_layer",
        "current_sheet",        "kelvin_helmholtz"};
    return ids;
}

inline ProblemConfig default_config(const std::string& id) {
    ProblemConfig c;
    c.problem = id;
    if (id == "rp0" || id == "rp1" || id == "rp2" || id == "rp3" || id == "rp4") {
        c.dim = 1;
        c.x_min = -0.5;
        c.x_max = 0.5;
        c.nx = 1000;
        c.ny = 1;
        c.bc_x = Bc::Transmissive;
        c.gamma = 5.0 / 3.0;
        c.cfl = 0.9;
        if (id == "rp0") {
            c.nx = 100;
            c.t_final = 10.0;
            c.dt_fixed = 0.1;
        } else if (id == "rp1") {
            c.t_final = 0.1;
        } else if (id == "rp2") {
            c.t_final = 0.2;
        } else if (id == "rp3") {
            c.t_final = 0.15;
        } else {
            c.t_final = 0.16;
        }
    } else if (id == "field_loop") {
        c.dim = 2;
        c.x_min = -1.0;
        c.x_max = 1.0;
        c.y_min = -0.5;
        c.y_max = 0.5;
        c.nx = 500;
        c.ny = 250;
        c.bc_x = c.bc_y = Bc::Periodic;
        c.gamma = 1.4;
        c.cfl = 0.8;
        c.t_final = 1.0;
    } else if (id == "rotor") {
        c.dim = 2;
        c.x_min = c.y_min = -0.5;
        c.x_max = c.y_max = 0.5;
        c.nx = c.ny = 1000;
        c.bc_x = c.bc_y = Bc::Transmissive;
        c.gamma = 1.4;
        c.t_final = 0.25;
    } else if (id == "blast") {
        c.dim = 2;
        c.x_min = c.y_min = -0.5;
        c.x_max = c.y_max = 0.5;
        c.nx = c.ny = 1000;
        c.bc_x = c.bc_y = Bc::Transmissive;
        c.gamma = 1.4;
        c.t_final = 0.01;
        c.pressure_floor = 1e-8;
    } else if (id == "orszag_tang") {
        c.dim = 2;
        c.x_min = c.y_min = 0.0;
        c.x_max = c.y_max = 2.0 * pi;
        c.nx = c.ny = 1000;
        c.bc_x = c.bc_y = Bc::Periodic;
        c.gamma = 5.0 / 3.0;
        c.t_final = 5.0;
    } else if (id == "orszag_tang_viscous") {
        c.dim = 2;
        c.x_min = c.y_min = 0.0;
        c.x_max = c.y_max = 2.0 * pi;
        c.nx = c.ny = 500;
        c.bc_x = c.bc_y = Bc::Periodic;
        c.gamma = 5.0 / 3.0;
        c.mu = 1e-2;
        c.eta = 1e-2;
        c.lambda_c = c.mu * c.gamma * c.c_v; // Pr = 1
        c.t_final = 2.0;
    } else if (id == "shear_layer" || id == "current_sheet") {
        c.dim = 2;
        c.x_min = -1.0;
        c.x_max = 1.0;
        c.y_min = -0.1;
        c.y_max = 0.1;
        c.nx = 100;
        c.ny = 10;
        c.bc_x = Bc::Transmissive;
        c.bc_y = Bc::Periodic;
        c.gamma = 1.4;
        c.mu = 0.1;
        c.eta = 0.1;
        c.lambda_c = c.mu * c.gamma * c.c_v; // Pr = 1
        c.t_final = 0.1;
    } else if (id == "kelvin_helmholtz") {
        c.dim = 2;
        c.x_min = 0.0;
        c.x_max = 2.0;
        c.y_min = -1.0;
        c.y_max = 1.0;
        c.nx = c.ny = 1000;
        c.bc_x = c.bc_y = Bc::Periodic;
        c.gamma = 5.0 / 3.0;
        c.mu = 1e-3;
        c.eta = 1e-3;
        c.lambda_c = 0.0;
        c.t_final = 4.0;
    } else {
        throw ConfigError("unknown problem id: " + id);
    }
    return c;
}

// ---------------------------------------------------------------------------
// 1D Riemann problems
// ---------------------------------------------------------------------------

// Left/right constant states separated by a discontinuity at x_d. Values
// carry the sqrt(4 pi) factors of the Gaussian unit system.
inline Field1D<Cons> init_riemann(const std::string& id, const Mesh1D& mesh,
                                  const Eos& eos) {
    const double s4p = std::sqrt(four_pi);
    Prim l, r;
    double xd = 0.0;
    if (id == "rp0") {
        l = Prim{1.0, 0, 0, 0, 1.0, 0, 0, 0, 0};
        r = Prim{0.125, 0, 0, 0, 1.0, 0, 0, 0, 0};
    } else if (id == "rp1") {
        l = Prim{1.0, 0, 0, 0, 1.0, 0, 0.75 * s4p, s4p, 0};
        r = Prim{0.125, 0, 0, 0, 0.1, 0, 0.75 * s4p, -s4p, 0};
    } else if (id == "rp2") {
        xd = -0.1;
        l = Prim{1.08, 1.2, 0.01, 0.5, 0.95, 0, 2.0, 3.6, 2.0};
        r = Prim{0.9891, -0.0131, 0.0269, 0.010037, 0.97159, 0, 2.0, 4.0244, 2.0026};
    } else if (id == "rp3") {
        xd = -0.1;
        l = Prim{1.7, 0, 0, 0, 1.7, 0, 3.899398, 3.544908, 0};
        r = Prim{0.2, 0, 0, -1.496891, 0.2, 0, 3.899398, 2.785898, 2.192064};
    } else if (id == "rp4") {
        l = Prim{1.0, 0, 0, 0, 1.0, 0, 1.3 * s4p, s4p, 0};
        r = Prim{0.4, 0, 0, 0, 0.4, 0, 1.3 * s4p, -s4p, 0};
    } else {
        throw ConfigError("unknown Riemann problem: " + id);
    }
    l.T = eos.temperature(l.p, l.rho);
    r.T = eos.temperature(r.p, r.rho);

    Field1D<Cons> q(mesh.nx(), Loc::Cell);
    for (int i = 0; i < mesh.nx(); ++i)
        q(i) = prim_to_cons(mesh.xc(i) <= xd ? l : r, eos);
    return q;
}

// ---------------------------------------------------------------------------
// 2D benchmark initializers
// ---------------------------------------------------------------------------

struct State2D {
    Field2D<Cons> q;
    FaceB fb;
};

namespace detail {

// Build cell conserved states from pointwise primitives, with the
// cell-centered magnetic field taken from the staggered representation so
// the discrete total energy decomposition is consistent at t = 0.
template <class PrimFn>
State2D assemble_2d(const Mesh2D& mesh, const Eos& eos, const FaceB& fb,
                    const PrimFn& prim_at) {
    State2D st{Field2D<Cons>(mesh.nx(), mesh.ny(), Loc::Cell), fb};
    for (int j = 0; j < mesh.ny(); ++j) {
        for (int i = 0; i < mesh.nx(); ++i) {
            Prim v = prim_at(mesh.xc(i), mesh.yc(j));
            v.bx = 0.5 * (fb.bx(i, j) + fb.bx(i + 1, j));
            v.by = 0.5 * (fb.by(i, j) + fb.by(i, j + 1));
            v.T = eos.temperature(v.p, v.rho);
            st.q(i, j) = prim_to_cons(v, eos);
        }
    }
    return st;
}

} // namespace detail

// Low Mach number magnetic field loop advection: uniform flow carrying a
// weak field loop set up from the vector potential A = A0 (R - r) inside
// radius R.
inline State2D init_field_loop(const Mesh2D& mesh, const Eos& eos) {
    const double a0 = 1e-3, radius = 0.3;
    FaceB fb = init_from_vector_potential(
        [=](double x, double y) {
            const double r = std::sqrt(x * x + y * y);
            return r <= radius ? a0 * (radius - r) : 0.0;
        },
        mesh);
    return detail::assemble_2d(mesh, eos, fb, [](double, double) {
        return Prim{1.0, 2.0, 1.0, 0.0, 1e5, 0, 0, 0, 0};
    });
}

// MHD rotor: dense rotating disk in a light atmosphere, uniform Bx.
inline State2D init_rotor(const Mesh2D& mesh, const Eos& eos) {
    FaceB fb(mesh.nx(), mesh.ny());
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 2.5;
    return detail::assemble_2d(mesh, eos, fb, [](double x, double y) {
        const double r = std::sqrt(x * x + y * y);
        Prim v{1.0, 0, 0, 0, 1.0, 0, 0, 0, 0};
        if (r <= 0.1) {
            v.rho = 10.0;
            v.u = -10.0 * y; // omega x r with omega = (0,0,10)
            v.v = 10.0 * x;
        }
        return v;
    });
}

// Strongly magnetized blast wave: pressure jump of four orders of
// magnitude inside r < 0.1.
inline State2D init_blast(const Mesh2D& mesh, const Eos& eos) {
    FaceB fb(mesh.nx(), mesh.ny());
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 100.0;
    return detail::assemble_2d(mesh, eos, fb, [](double x, double y) {
        const double r = std::sqrt(x * x + y * y);
        return Prim{1.0, 0, 0, 0, r < 0.1 ? 1000.0 : 0.1, 0, 0, 0, 0};
    });
}

// Orszag-Tang vortex, inviscid (classical) or the viscous/resistive
// variant. The staggered field comes from the vector potential whose curl
// reproduces the published B, so the discrete divergence vanishes exactly.
inline State2D init_orszag_tang(const Mesh2D& mesh, const Eos& eos, bool viscous) {
    const double s4p = std::sqrt(four_pi);
    const double bscale = viscous ? 1.0 : s4p;
    FaceB fb = init_from_vector_potential(
        [=](double x, double y) {
            return bscale * (std::cos(y) + 0.5 * std::cos(2.0 * x));
        },
        mesh);
    const double g = eos.gamma();
    if (viscous) {
        return detail::assemble_2d(mesh, eos, fb, [=](double x, double y) {
            const double p = 15.0 / 4.0 + 0.25 * std::cos(4.0 * x) +
                             0.8 * std::cos(2.0 * x) * std::cos(y) -
                             std::cos(x) * std::cos(y) + 0.25 * std::cos(2.0 * y);
            return Prim{1.0, -s4p * std::sin(y), s4p * std::sin(x), 0.0, p,
                        0,   0,                  0,                 0};
        });
    }
    return detail::assemble_2d(mesh, eos, fb, [=](double x, double y) {
        return Prim{g * g, -std::sin(y), std::sin(x), 0.0, g, 0, 0, 0, 0};
    });
}

enum class StokesKind { Shear, Sheet };

// First problem of Stokes at low Mach number: a velocity (shear) or
// magnetic field (current sheet) sign flip at x = 0 under p = 1e5.
inline State2D init_shear_or_sheet(StokesKind kind, const Mesh2D& mesh,
                                   const Eos& eos) {
    FaceB fb(mesh.nx(), mesh.ny());
    if (kind == StokesKind::Sheet) {
        for (int j = 0; j < fb.by.ny(); ++j)
            for (int i = 0; i < fb.by.nx(); ++i)
                fb.by(i, j) = mesh.xc(i) <= 0.0 ? 1.0 : -1.0;
    }
    return detail::assemble_2d(mesh, eos, fb, [kind](double x, double) {
        Prim v{1.0, 0, 0, 0, 1e5, 0, 0, 0, 0};
        if (kind == StokesKind::Shear) v.v = x <= 0.0 ? 1.0 : -1.0;
        return v;
    });
}

// Exact self-similar solution of the shear layer / current sheet,
// v(x,t) = -erf(x / (2 sqrt(mu t))).
inline double exact_stokes(double x, double t, double mu) {
    return -std::erf(0.5 * x / std::sqrt(mu * t));
}

// Kelvin-Helmholtz instability in a viscous, resistive, magnetized fluid:
// tanh shear profile, sinusoidal v_y perturbation and a three-zone field
// that rotates from x-aligned to z-aligned across |y| = 1/2.
inline State2D init_kelvin_helmholtz(const Mesh2D& mesh, const Eos& eos) {
    const double a = 1.0 / 25.0, u0 = 1.0, dv = 0.01, b0 = 0.07;
    auto bx_of = [=](double y) {
        const double ay = std::abs(y);
        if (ay > 0.5 + a) return b0;
        if (ay > 0.5 - a) {
            const double chi = 0.5 * pi * (y - 0.5 + a) / (2.0 * a);
            return b0 * std::sin(chi);
        }
        return 0.0;
    };
    auto bz_of = [=](double y) {
        const double ay = std::abs(y);
        if (ay > 0.5 + a) return 0.0;
        if (ay > 0.5 - a) {
            const double chi = 0.5 * pi * (y - 0.5 + a) / (2.0 * a);
            return b0 * std::cos(chi);
        }
        return b0;
    };

    FaceB fb(mesh.nx(), mesh.ny());
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = bx_of(mesh.yc(j));

    return detail::assemble_2d(mesh, eos, fb, [=](double x, double y) {
        Prim v{1.0, 0, 0, 0, 0.6, 0, 0, 0, 0};
        v.u = -0.5 * u0 * std::tanh((std::abs(y) - 0.5) / a);
        v.v = dv * std::sin(2.0 * pi * x) * std::sin(pi * std::abs(y));
        v.bz = bz_of(y);
        return v;
    });
}

inline State2D make_state_2d(const ProblemConfig& c, const Mesh2D& mesh,
                             const Eos& eos) {
    if (c.problem == "field_loop") return init_field_loop(mesh, eos);
    if (c.problem == "rotor") return init_rotor(mesh, eos);
    if (c.problem == "blast") return init_blast(mesh, eos);
    if (c.problem == "orszag_tang") return init_orszag_tang(mesh, eos, false);
    if (c.problem == "orszag_tang_viscous") return init_orszag_tang(mesh, eos, true);
    if (c.problem == "shear_layer")
        return init_shear_or_sheet(StokesKind::Shear, mesh, eos);
    if (c.problem == "current_sheet")
        return init_shear_or_sheet(StokesKind::Sheet, mesh, eos);
    if (c.problem == "kelvin_helmholtz") return init_kelvin_helmholtz(mesh, eos);
    throw ConfigError("not a 2D problem: " + c.problem);
}

inline Sim1D make_sim_1d(const ProblemConfig& c) {
    if (c.dim != 1) throw ConfigError("not a 1D problem: " + c.problem);
    Mesh1D mesh = c.mesh1d();
    Sim1D sim{mesh, c.bc_x, init_riemann(c.problem, mesh, c.eos()), 0.0, {}};
    return sim;
}

inline Sim2D make_sim_2d(const ProblemConfig& c) {
    if (c.dim != 2) throw ConfigError("not a 2D problem: " + c.problem);
    Mesh2D mesh = c.mesh2d();
    State2D st = make_state_2d(c, mesh, c.eos());
    return Sim2D{mesh, c.bc_x, c.bc_y, std::move(st.q), std::move(st.fb), 0.0, {}};
}

// ---------------------------------------------------------------------------
// error norms
// ---------------------------------------------------------------------------

struct Norms {
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

// Volume-averaged L1/L2 and pointwise Linf distance between a cell field
// and an exact profile sampled at the cell centers.
template <class ExactFn>
Norms error_norms(const Field2D<double>& f, const ExactFn& exact,
                  const Mesh2D& mesh) {
    Norms n;
    double vol = 0.0;
    for (int j = 0; j < mesh.ny(); ++j) {
        for (int i = 0; i < mesh.nx(); ++i) {
            const double e = f(i, j) - exact(mesh.xc(i), mesh.yc(j));
            n.l1 += std::abs(e) * mesh.cell_area();
            n.l2 += e * e * mesh.cell_area();
            n.linf = std::max(n.linf, std::abs(e));
            vol += mesh.cell_area();
        }
    }
    n.l1 /= vol;
    n.l2 = std::sqrt(n.l2 / vol);
    return n;
}

} // namespace simhd

#endif
