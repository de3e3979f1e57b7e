#ifndef SIMHD_PRESSURE_HPP
#define SIMHD_PRESSURE_HPP

#include "simhd/ct.hpp"
#include "simhd/grid.hpp"
#include "simhd/state.hpp"

#include <cmath>
#include <vector>

namespace simhd {

// Options of the semi-implicit pressure stage.
struct PressureOptions {
    int r_max = 2;           // Picard iterations
    double tol = 1e-10;      // relative tolerance for Newton and inner CG
    int newton_max = 50;     // cap for non-linear (non-ideal) EOS
    double p_floor = 0.0;    // <= 0: admissibility errors instead of flooring
};

// Convergence diagnostics of one pressure stage.
struct PressureStats {
    std::vector<double> newton_residuals; // final Newton residual per Picard pass
    std::vector<double> newton_corrections; // |last Newton correction| per pass
    int cg_iterations_total = 0;
    int cg_iterations_max = 0;
};

namespace detail {

// Matrix-free preconditioned conjugate gradients for an SPD operator.
// apply(x, out) must compute out = A x; the iteration stops when the
// 2-norm of the residual falls below stop_norm (an absolute target, so a
// warm-started Newton step is not over-solved relative to its own small
// right hand side). Throws SolverError with the residual history if the
// iteration cap is hit.
template <class ApplyFn>
int pcg_solve(int n, const ApplyFn& apply, const std::vector<double>& jacobi,
              const std::vector<double>& rhs, std::vector<double>& x,
              double stop_norm, int max_iter) {
    std::vector<double> r(n), z(n), p(n), ap(n);
    apply(x, ap);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
    const double stop2 = stop_norm * stop_norm;

    std::vector<double> history;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[i] = r[i] / jacobi[i];
        p[i] = z[i];
        rz += r[i] * z[i];
    }

    for (int it = 0; it < max_iter; ++it) {
        double rr = 0.0;
        for (int i = 0; i < n; ++i) rr += r[i] * r[i];
        history.push_back(std::sqrt(rr));
        if (rr <= stop2) return it;

        apply(p, ap);
        double pap = 0.0;
        for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
        if (!(pap > 0.0))
            throw SolverError("CG breakdown: operator not positive definite",
                              std::move(history));
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = r[i] / jacobi[i];
            rz_new += r[i] * z[i];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("CG did not converge within the iteration cap",
                      std::move(history));
}

// Newton iteration on the mildly nonlinear system
//   a_i e(p_i, rho_i) + (T p)_i = b_i,
// with the diagonal Jacobian contribution a_i de/dp and matrix-free CG for
// the linear sub-problems. For the ideal gas EOS the system is linear and
// one Newton step is exact (up to the CG tolerance).
template <class ApplyFn>
std::vector<double> solve_mildly_nonlinear(
    int n, const std::vector<double>& a, const std::vector<double>& rho,
    const std::vector<double>& b, const ApplyFn& applyT,
    const std::vector<double>& t_diag, const Eos& eos,
    const std::vector<double>& p_init, const PressureOptions& opt,
    PressureStats* stats) {
    std::vector<double> p = p_init;
    std::vector<double> f(n), tp(n), delta(n), jacobi(n), rhs(n), diag(n);

    double b_norm = 0.0;
    for (int i = 0; i < n; ++i) b_norm += b[i] * b[i];
    b_norm = std::sqrt(b_norm);
    // Newton and the inner CG share one absolute residual target scaled by
    // the right hand side of the full system.
    const double f_stop = opt.tol * std::max(b_norm, 1e-300);

    double last_res = 0.0, last_corr = 0.0;
    for (int newton = 0; newton < opt.newton_max; ++newton) {
        applyT(p, tp);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            f[i] = a[i] * eos.internal_energy(p[i], rho[i]) + tp[i] - b[i];
            res += f[i] * f[i];
        }
        last_res = std::sqrt(res);
        if (last_res <= f_stop) break;
        if (newton == opt.newton_max - 1)
            throw SolverError("Newton iteration stagnated on the pressure system",
                              {last_res});

        for (int i = 0; i < n; ++i) {
            diag[i] = a[i] * eos.de_dp(p[i], rho[i]);
            jacobi[i] = diag[i] + t_diag[i];
            rhs[i] = -f[i];
            delta[i] = 0.0;
        }
        auto apply_newton = [&](const std::vector<double>& x, std::vector<double>& out) {
            applyT(x, out);
            for (int i = 0; i < n; ++i) out[i] += diag[i] * x[i];
        };
        const int iters = pcg_solve(n, apply_newton, jacobi, rhs, delta, f_stop,
                                    10 * std::max(n, 16));
        if (stats) {
            stats->cg_iterations_total += iters;
            stats->cg_iterations_max = std::max(stats->cg_iterations_max, iters);
        }
        double corr = 0.0;
        for (int i = 0; i < n; ++i) {
            p[i] += delta[i];
            corr += delta[i] * delta[i];
        }
        last_corr = std::sqrt(corr);
    }
    if (stats) {
        stats->newton_residuals.push_back(last_res);
        stats->newton_corrections.push_back(last_corr);
    }
    return p;
}

} // namespace detail

// ---------------------------------------------------------------------------
// 1D pressure system
// ---------------------------------------------------------------------------

// Matrix-free representation of  rho e(p) + T p = b  in 1D. w[f] are the
// symmetric stencil weights dt^2 h_f / dx_f on the faces; the diagonal
// nonlinearity is a_i e(p_i, rho_i) with a_i = dx_i rho_i.
struct PressureSystem1D {
    int nx = 0;
    Bc bc = Bc::Periodic;
    std::vector<double> w;   // nx+1 face weights (boundary entries zero for transmissive)
    std::vector<double> a;   // dx_i rho_i
    std::vector<double> rho; // rho_i^{n+1}
    std::vector<double> b;   // right hand side

    void apply(const std::vector<double>& p, std::vector<double>& out) const {
        for (int i = 0; i < nx; ++i) {
            const double pm = p[i == 0 ? (bc == Bc::Periodic ? nx - 1 : 0) : i - 1];
            const double pp = p[i == nx - 1 ? (bc == Bc::Periodic ? 0 : nx - 1) : i + 1];
            out[i] = w[i] * (p[i] - pm) + w[i + 1] * (p[i] - pp);
        }
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(nx);
        for (int i = 0; i < nx; ++i) d[i] = w[i] + w[i + 1];
        return d;
    }
};

inline std::vector<double> apply_operator(const PressureSystem1D& sys,
                                          const std::vector<double>& p) {
    std::vector<double> out(sys.nx);
    sys.apply(p, out);
    return out;
}

// Assemble the 1D system from the starred state. h_faces and rhok_faces are
// the current Picard coefficients, mom_star_dual the dual-averaged starred
// normal momentum, m_cells the (final) magnetic energy density.
inline PressureSystem1D assemble_system_1d(
    const Field1D<Cons>& qstar, const Field1D<double>& mom_star_dual,
    const Field1D<double>& h_faces, const Field1D<double>& rhok_faces,
    const std::vector<double>& m_cells, double dt, const Mesh1D& mesh, Bc bc) {
    const int nx = mesh.nx();
    PressureSystem1D sys;
    sys.nx = nx;
    sys.bc = bc;
    sys.w.resize(nx + 1);
    sys.a.resize(nx);
    sys.rho.resize(nx);
    sys.b.resize(nx);

    for (int f = 0; f <= nx; ++f) {
        if (!(h_faces(f) >= 0.0))
            throw AdmissibilityError("negative interface enthalpy", h_faces(f), f);
        sys.w[f] = dt * dt * h_faces(f) / mesh.dx_dual(f);
    }
    if (bc == Bc::Transmissive) {
        sys.w[0] = 0.0; // zero-flux closure keeps T symmetric
        sys.w[nx] = 0.0;
    } else {
        sys.w[nx] = sys.w[0]; // one physical face at the seam
    }

    for (int i = 0; i < nx; ++i) {
        sys.rho[i] = qstar(i).rho;
        sys.a[i] = mesh.dx(i) * sys.rho[i];
        sys.b[i] = mesh.dx(i) * (qstar(i).rhoE - m_cells[i] -
                                 0.5 * (rhok_faces(i) + rhok_faces(i + 1))) -
                   dt * (h_faces(i + 1) * mom_star_dual(i + 1) -
                         h_faces(i) * mom_star_dual(i));
    }
    return sys;
}

inline std::vector<double> solve_pressure(const PressureSystem1D& sys,
                                          const Eos& eos,
                                          const std::vector<double>& p_init,
                                          const PressureOptions& opt,
                                          PressureStats* stats = nullptr) {
    auto applyT = [&sys](const std::vector<double>& x, std::vector<double>& out) {
        sys.apply(x, out);
    };
    return detail::solve_mildly_nonlinear(sys.nx, sys.a, sys.rho, sys.b, applyT,
                                          sys.diagonal(), eos, p_init, opt, stats);
}

// (rho u)_{i+1/2}^{r+1} = (rho u)*_{i+1/2} - dt/dx_{i+1/2} (p_{i+1} - p_i).
// p must have its halo filled.
inline Field1D<double> picard_update_momentum_1d(const Field1D<double>& mom_star_dual,
                                                 const Field1D<double>& p, double dt,
                                                 const Mesh1D& mesh) {
    Field1D<double> mom(mesh.nx(), Loc::XFace, mom_star_dual.halo());
    for (int f = 0; f <= mesh.nx(); ++f)
        mom(f) = mom_star_dual(f) - dt / mesh.dx_dual(f) * (p(f) - p(f - 1));
    return mom;
}

// (rho E)^{n+1}_i = (rho E)*_i - dt/dx_i (h_{i+1/2} (rho u)_{i+1/2} -
//                                         h_{i-1/2} (rho u)_{i-1/2}).
inline std::vector<double> finalize_energy_1d(const Field1D<Cons>& qstar,
                                              const Field1D<double>& h_faces,
                                              const Field1D<double>& mom_dual,
                                              double dt, const Mesh1D& mesh) {
    std::vector<double> rhoE(mesh.nx());
    for (int i = 0; i < mesh.nx(); ++i)
        rhoE[i] = qstar(i).rhoE - dt / mesh.dx(i) *
                                      (h_faces(i + 1) * mom_dual(i + 1) -
                                       h_faces(i) * mom_dual(i));
    return rhoE;
}

// Effective boundary fluxes of the pressure stage, for the conservation
// audit on open domains: the energy flux h (rho u) at the two boundary
// faces and the boundary pressure acting on the normal momentum.
struct PressureBoundary1D {
    double energy_lo = 0.0, energy_hi = 0.0;
    double mom_lo = 0.0, mom_hi = 0.0;
};

// Coefficient refresh of the Picard iteration: interface enthalpies from
// dual-averaged pressure and density, and the staggered kinetic energy
// from the current momenta.

// Interface enthalpies; an optional floor is applied to the face pressure
// before the EOS call.
inline Field1D<double> face_enthalpies_1d(const Field1D<double>& p_cells,
                                          const Field1D<double>& rho_cells,
                                          const Mesh1D& mesh, const Eos& eos,
                                          double p_floor) {
    Field1D<double> h(mesh.nx(), Loc::XFace, p_cells.halo());
    for (int f = 0; f <= mesh.nx(); ++f) {
        double pf = (0.5 / mesh.dx_dual(f)) *
                    (mesh.dx(f - 1) * p_cells(f - 1) + mesh.dx(f) * p_cells(f));
        const double rf = (0.5 / mesh.dx_dual(f)) *
                          (mesh.dx(f - 1) * rho_cells(f - 1) + mesh.dx(f) * rho_cells(f));
        if (p_floor > 0.0) pf = std::max(pf, p_floor);
        h(f) = eos.enthalpy(pf, rf);
    }
    return h;
}

// (rho k)_{i+1/2} from the staggered normal momentum and dual-averaged
// density and transverse momenta.
inline Field1D<double> face_kinetic_energy_1d(const Field1D<double>& mom_dual,
                                              const Field1D<double>& my_dual,
                                              const Field1D<double>& mz_dual,
                                              const Field1D<double>& rho_dual,
                                              const Mesh1D& mesh) {
    Field1D<double> rhok(mesh.nx(), Loc::XFace, mom_dual.halo());
    for (int f = 0; f <= mesh.nx(); ++f)
        rhok(f) = 0.5 *
                  (mom_dual(f) * mom_dual(f) + my_dual(f) * my_dual(f) +
                   mz_dual(f) * mz_dual(f)) /
                  rho_dual(f);
    return rhok;
}

namespace detail {

template <class T>
Field1D<T> extract_1d(const Field1D<Cons>& q, int comp) {
    Field1D<T> out(q.nx_cells(), Loc::Cell, q.halo());
    for (int i = -q.halo(); i < q.n() + q.halo(); ++i) out(i) = q(i)[comp];
    return out;
}

} // namespace detail

// Full semi-implicit pressure stage in 1D: Picard iteration around the
// mildly nonlinear pressure solve, followed by the conservative energy
// update and the averaging of the momentum back onto the main grid.
// qn supplies the time-n data for the r=0 coefficients; both qn and qstar
// must have their halos filled. Density, transverse momenta and B of the
// output come straight from qstar.
inline Field1D<Cons> run_pressure_stage_1d(
    const Field1D<Cons>& qn, const Field1D<Cons>& qstar, double dt,
    const Mesh1D& mesh, const Eos& eos, Bc bc, const PressureOptions& opt,
    std::vector<double>* p_out = nullptr, PressureStats* stats = nullptr,
    PressureBoundary1D* boundary = nullptr) {
    const int nx = mesh.nx();
    const int halo = qn.halo();

    // Dual-averaged starred quantities (fixed during the Picard loop).
    auto rho_star = detail::extract_1d<double>(qstar, 0);
    auto mx_star = detail::extract_1d<double>(qstar, 1);
    auto my_star = detail::extract_1d<double>(qstar, 2);
    auto mz_star = detail::extract_1d<double>(qstar, 3);
    Field1D<double> mom_star_dual = avg_main_to_dual_1d(mx_star, mesh);
    Field1D<double> my_dual = avg_main_to_dual_1d(my_star, mesh);
    Field1D<double> mz_dual = avg_main_to_dual_1d(mz_star, mesh);
    Field1D<double> rho_dual = avg_main_to_dual_1d(rho_star, mesh);

    std::vector<double> m_cells(nx);
    for (int i = 0; i < nx; ++i) m_cells[i] = qstar(i).magnetic_energy();

    // r = 0 coefficients from the time-n solution.
    Field1D<double> p_cells(nx, Loc::Cell, halo);
    Field1D<double> rho_n = detail::extract_1d<double>(qn, 0);
    for (int i = -halo; i < nx + halo; ++i)
        p_cells(i) = cons_to_prim_floored(qn(i), eos, opt.p_floor).p;
    Field1D<double> h_faces =
        face_enthalpies_1d(p_cells, rho_n, mesh, eos, opt.p_floor);
    Field1D<double> mom_n_dual =
        avg_main_to_dual_1d(detail::extract_1d<double>(qn, 1), mesh);
    Field1D<double> myn_dual =
        avg_main_to_dual_1d(detail::extract_1d<double>(qn, 2), mesh);
    Field1D<double> mzn_dual =
        avg_main_to_dual_1d(detail::extract_1d<double>(qn, 3), mesh);
    Field1D<double> rhon_dual = avg_main_to_dual_1d(rho_n, mesh);
    Field1D<double> rhok_faces = face_kinetic_energy_1d(
        mom_n_dual, myn_dual, mzn_dual, rhon_dual, mesh);

    std::vector<double> p(nx);
    for (int i = 0; i < nx; ++i) p[i] = p_cells(i);

    Field1D<double> mom_dual = mom_star_dual;
    for (int r = 0; r < opt.r_max; ++r) {
        PressureSystem1D sys = assemble_system_1d(qstar, mom_star_dual, h_faces,
                                                  rhok_faces, m_cells, dt, mesh, bc);
        p = solve_pressure(sys, eos, p, opt, stats);

        for (int i = 0; i < nx; ++i) p_cells(i) = p[i];
        apply_bc(p_cells, bc);
        mom_dual = picard_update_momentum_1d(mom_star_dual, p_cells, dt, mesh);

        h_faces = face_enthalpies_1d(p_cells, rho_star, mesh, eos, opt.p_floor);
        rhok_faces = face_kinetic_energy_1d(mom_dual, my_dual, mz_dual,
                                                    rho_dual, mesh);
    }

    std::vector<double> rhoE = finalize_energy_1d(qstar, h_faces, mom_dual, dt, mesh);

    Field1D<Cons> qout(nx, Loc::Cell, halo);
    for (int i = 0; i < nx; ++i) {
        Cons c = qstar(i);
        c.mx = 0.5 * (mom_dual(i) + mom_dual(i + 1));
        c.rhoE = rhoE[i];
        qout(i) = c;
    }

    if (p_out) *p_out = p;
    if (boundary) {
        boundary->energy_lo = h_faces(0) * mom_dual(0);
        boundary->energy_hi = h_faces(nx) * mom_dual(nx);
        boundary->mom_lo = p[0];
        boundary->mom_hi = p[nx - 1];
    }
    return qout;
}

// ---------------------------------------------------------------------------
// 2D pressure system
// ---------------------------------------------------------------------------

// Five-point symmetric stencil on a uniform 2D mesh, written per cell
// exactly as the discrete wave equation: weights dt^2 h / dx^2 on x-faces
// and dt^2 h / dy^2 on y-faces, diagonal nonlinearity rho_{ij} e(p, rho).
struct PressureSystem2D {
    int nx = 0, ny = 0;
    Bc bc_x = Bc::Periodic, bc_y = Bc::Periodic;
    std::vector<double> wx;  // (nx+1) * ny, index f + j*(nx+1)
    std::vector<double> wy;  // nx * (ny+1), index i + f*nx
    std::vector<double> a;   // rho_{ij}
    std::vector<double> rho; // rho_{ij}
    std::vector<double> b;

    int idx(int i, int j) const { return j * nx + i; }
    double wxf(int f, int j) const { return wx[j * (nx + 1) + f]; }
    double wyf(int i, int f) const { return wy[f * nx + i]; }

    void apply(const std::vector<double>& p, std::vector<double>& out) const {
        for (int j = 0; j < ny; ++j) {
            const int jm = (j == 0) ? (bc_y == Bc::Periodic ? ny - 1 : 0) : j - 1;
            const int jp = (j == ny - 1) ? (bc_y == Bc::Periodic ? 0 : ny - 1) : j + 1;
            for (int i = 0; i < nx; ++i) {
                const int im = (i == 0) ? (bc_x == Bc::Periodic ? nx - 1 : 0) : i - 1;
                const int ip = (i == nx - 1) ? (bc_x == Bc::Periodic ? 0 : nx - 1) : i + 1;
                const double pc = p[idx(i, j)];
                out[idx(i, j)] = wxf(i, j) * (pc - p[idx(im, j)]) +
                                 wxf(i + 1, j) * (pc - p[idx(ip, j)]) +
                                 wyf(i, j) * (pc - p[idx(i, jm)]) +
                                 wyf(i, j + 1) * (pc - p[idx(i, jp)]);
            }
        }
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(static_cast<std::size_t>(nx) * ny);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                d[idx(i, j)] = wxf(i, j) + wxf(i + 1, j) + wyf(i, j) + wyf(i, j + 1);
        return d;
    }
};

inline std::vector<double> apply_operator(const PressureSystem2D& sys,
                                          const std::vector<double>& p) {
    std::vector<double> out(static_cast<std::size_t>(sys.nx) * sys.ny);
    sys.apply(p, out);
    return out;
}

// Assemble the 2D system. h faces are the Picard enthalpies; mom_star_*
// the dual-averaged starred momenta; rhok and m the cell-centered kinetic
// and magnetic energy densities at the current Picard level.
inline PressureSystem2D assemble_system_2d(
    const Field2D<Cons>& qstar, const Field2D<double>& mom_star_x,
    const Field2D<double>& mom_star_y, const Field2D<double>& hx,
    const Field2D<double>& hy, const Field2D<double>& rhok,
    const std::vector<double>& m_cells, double dt, const Mesh2D& mesh, Bc bc_x,
    Bc bc_y) {
    const int nx = mesh.nx(), ny = mesh.ny();
    PressureSystem2D sys;
    sys.nx = nx;
    sys.ny = ny;
    sys.bc_x = bc_x;
    sys.bc_y = bc_y;
    sys.wx.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
    sys.wy.assign(static_cast<std::size_t>(nx) * (ny + 1), 0.0);
    sys.a.resize(static_cast<std::size_t>(nx) * ny);
    sys.rho.resize(sys.a.size());
    sys.b.resize(sys.a.size());

    const double cx = dt * dt / (mesh.dx() * mesh.dx());
    const double cy = dt * dt / (mesh.dy() * mesh.dy());
    for (int j = 0; j < ny; ++j) {
        for (int f = 0; f <= nx; ++f) {
            if (!(hx(f, j) >= 0.0))
                throw AdmissibilityError("negative interface enthalpy", hx(f, j), f, j);
            sys.wx[j * (nx + 1) + f] = cx * hx(f, j);
        }
        if (bc_x == Bc::Transmissive) {
            sys.wx[j * (nx + 1) + 0] = 0.0;
            sys.wx[j * (nx + 1) + nx] = 0.0;
        } else {
            sys.wx[j * (nx + 1) + nx] = sys.wx[j * (nx + 1) + 0];
        }
    }
    for (int f = 0; f <= ny; ++f) {
        for (int i = 0; i < nx; ++i) {
            if (!(hy(i, f) >= 0.0))
                throw AdmissibilityError("negative interface enthalpy", hy(i, f), i, f);
            sys.wy[f * nx + i] = cy * hy(i, f);
        }
    }
    if (bc_y == Bc::Transmissive) {
        for (int i = 0; i < nx; ++i) {
            sys.wy[0 * nx + i] = 0.0;
            sys.wy[ny * nx + i] = 0.0;
        }
    } else {
        for (int i = 0; i < nx; ++i) sys.wy[ny * nx + i] = sys.wy[0 * nx + i];
    }

    const double rdx = dt / mesh.dx(), rdy = dt / mesh.dy();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = sys.idx(i, j);
            sys.rho[k] = qstar(i, j).rho;
            sys.a[k] = sys.rho[k];
            sys.b[k] = qstar(i, j).rhoE - m_cells[k] - rhok(i, j) -
                       rdx * (hx(i + 1, j) * mom_star_x(i + 1, j) -
                              hx(i, j) * mom_star_x(i, j)) -
                       rdy * (hy(i, j + 1) * mom_star_y(i, j + 1) -
                              hy(i, j) * mom_star_y(i, j));
        }
    }
    return sys;
}

inline std::vector<double> solve_pressure(const PressureSystem2D& sys,
                                          const Eos& eos,
                                          const std::vector<double>& p_init,
                                          const PressureOptions& opt,
                                          PressureStats* stats = nullptr) {
    auto applyT = [&sys](const std::vector<double>& x, std::vector<double>& out) {
        sys.apply(x, out);
    };
    return detail::solve_mildly_nonlinear(sys.nx * sys.ny, sys.a, sys.rho, sys.b,
                                          applyT, sys.diagonal(), eos, p_init,
                                          opt, stats);
}

struct PressureBoundary2D {
    double energy_x_lo = 0.0, energy_x_hi = 0.0;
    double energy_y_lo = 0.0, energy_y_hi = 0.0;
    double momx_lo = 0.0, momx_hi = 0.0; // sums of boundary pressures
    double momy_lo = 0.0, momy_hi = 0.0;
};

inline Field2D<double> face_enthalpies_2d(const Field2D<double>& p,
                                          const Field2D<double>& rho, Axis dir,
                                          const Eos& eos, double p_floor) {
    Field2D<double> pf = avg_main_to_dual_2d(p, dir);
    Field2D<double> rf = avg_main_to_dual_2d(rho, dir);
    Field2D<double> h(p.nx_cells(), p.ny_cells(),
                      dir == Axis::X ? Loc::XFace : Loc::YFace, p.halo());
    for (int j = 0; j < h.ny(); ++j) {
        for (int i = 0; i < h.nx(); ++i) {
            double pv = pf(i, j);
            if (p_floor > 0.0) pv = std::max(pv, p_floor);
            h(i, j) = eos.enthalpy(pv, rf(i, j));
        }
    }
    return h;
}

// Cell-centered kinetic energy from direction-averaged staggered momenta
// plus the cell-centered transverse momentum.
inline Field2D<double> center_kinetic_energy_2d(const Field2D<double>& mom_x,
                                                const Field2D<double>& mom_y,
                                                const Field2D<Cons>& q_for_mz_rho) {
    const Field2D<Cons>& q = q_for_mz_rho;
    Field2D<double> rhok(q.nx_cells(), q.ny_cells(), Loc::Cell, q.halo());
    for (int j = 0; j < rhok.ny(); ++j) {
        for (int i = 0; i < rhok.nx(); ++i) {
            const double mx = 0.5 * (mom_x(i, j) + mom_x(i + 1, j));
            const double my = 0.5 * (mom_y(i, j) + mom_y(i, j + 1));
            const double mz = q(i, j).mz;
            rhok(i, j) = 0.5 * (mx * mx + my * my + mz * mz) / q(i, j).rho;
        }
    }
    return rhok;
}

namespace detail {

template <class T>
Field2D<T> extract_2d(const Field2D<Cons>& q, int comp) {
    Field2D<T> out(q.nx_cells(), q.ny_cells(), Loc::Cell, q.halo());
    for (int j = -q.halo(); j < q.ny() + q.halo(); ++j)
        for (int i = -q.halo(); i < q.nx() + q.halo(); ++i) out(i, j) = q(i, j)[comp];
    return out;
}

} // namespace detail

// Full semi-implicit pressure stage in 2D. qstar must already carry the
// final magnetic field (CT-updated staggered components averaged onto the
// cells); qn supplies the time-n data for the r = 0 coefficients. Halos of
// both fields must be filled.
inline Field2D<Cons> run_pressure_stage_2d(
    const Field2D<Cons>& qn, const Field2D<Cons>& qstar, double dt,
    const Mesh2D& mesh, const Eos& eos, Bc bc_x, Bc bc_y,
    const PressureOptions& opt, std::vector<double>* p_out = nullptr,
    PressureStats* stats = nullptr, PressureBoundary2D* boundary = nullptr) {
    const int nx = mesh.nx(), ny = mesh.ny();
    const int halo = qn.halo();

    auto mx_star = detail::extract_2d<double>(qstar, 1);
    auto my_star = detail::extract_2d<double>(qstar, 2);
    Field2D<double> mom_star_x = avg_main_to_dual_2d(mx_star, Axis::X);
    Field2D<double> mom_star_y = avg_main_to_dual_2d(my_star, Axis::Y);

    std::vector<double> m_cells(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m_cells[j * nx + i] = qstar(i, j).magnetic_energy();

    // r = 0 coefficients from time-n data.
    Field2D<double> p_cells(nx, ny, Loc::Cell, halo);
    for (int j = -halo; j < ny + halo; ++j)
        for (int i = -halo; i < nx + halo; ++i)
            p_cells(i, j) = cons_to_prim_floored(qn(i, j), eos, opt.p_floor).p;
    Field2D<double> rho_n = detail::extract_2d<double>(qn, 0);
    Field2D<double> rho_star = detail::extract_2d<double>(qstar, 0);
    Field2D<double> hx = face_enthalpies_2d(p_cells, rho_n, Axis::X, eos, opt.p_floor);
    Field2D<double> hy = face_enthalpies_2d(p_cells, rho_n, Axis::Y, eos, opt.p_floor);
    Field2D<double> rhok = center_kinetic_energy_2d(
        avg_main_to_dual_2d(detail::extract_2d<double>(qn, 1), Axis::X),
        avg_main_to_dual_2d(detail::extract_2d<double>(qn, 2), Axis::Y), qn);

    std::vector<double> p(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) p[j * nx + i] = p_cells(i, j);

    Field2D<double> mom_x = mom_star_x;
    Field2D<double> mom_y = mom_star_y;
    for (int r = 0; r < opt.r_max; ++r) {
        PressureSystem2D sys =
            assemble_system_2d(qstar, mom_star_x, mom_star_y, hx, hy, rhok,
                               m_cells, dt, mesh, bc_x, bc_y);
        p = solve_pressure(sys, eos, p, opt, stats);

        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) p_cells(i, j) = p[j * nx + i];
        apply_bc(p_cells, bc_x, bc_y);

        const double rdx = dt / mesh.dx(), rdy = dt / mesh.dy();
        for (int j = 0; j < mom_x.ny(); ++j)
            for (int i = 0; i < mom_x.nx(); ++i)
                mom_x(i, j) = mom_star_x(i, j) - rdx * (p_cells(i, j) - p_cells(i - 1, j));
        for (int j = 0; j < mom_y.ny(); ++j)
            for (int i = 0; i < mom_y.nx(); ++i)
                mom_y(i, j) = mom_star_y(i, j) - rdy * (p_cells(i, j) - p_cells(i, j - 1));

        hx = face_enthalpies_2d(p_cells, rho_star, Axis::X, eos, opt.p_floor);
        hy = face_enthalpies_2d(p_cells, rho_star, Axis::Y, eos, opt.p_floor);
        rhok = center_kinetic_energy_2d(mom_x, mom_y, qstar);
    }

    Field2D<Cons> qout(nx, ny, Loc::Cell, halo);
    const double rdx = dt / mesh.dx(), rdy = dt / mesh.dy();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Cons c = qstar(i, j);
            c.mx = 0.5 * (mom_x(i, j) + mom_x(i + 1, j));
            c.my = 0.5 * (mom_y(i, j) + mom_y(i, j + 1));
            c.rhoE = qstar(i, j).rhoE -
                     rdx * (hx(i + 1, j) * mom_x(i + 1, j) - hx(i, j) * mom_x(i, j)) -
                     rdy * (hy(i, j + 1) * mom_y(i, j + 1) - hy(i, j) * mom_y(i, j));
            qout(i, j) = c;
        }
    }

    if (p_out) *p_out = p;
    if (boundary) {
        *boundary = PressureBoundary2D{};
        for (int j = 0; j < ny; ++j) {
            boundary->energy_x_lo += hx(0, j) * mom_x(0, j);
            boundary->energy_x_hi += hx(nx, j) * mom_x(nx, j);
            boundary->momx_lo += p_cells(0, j);
            boundary->momx_hi += p_cells(nx - 1, j);
        }
        for (int i = 0; i < nx; ++i) {
            boundary->energy_y_lo += hy(i, 0) * mom_y(i, 0);
            boundary->energy_y_hi += hy(i, ny) * mom_y(i, ny);
            boundary->momy_lo += p_cells(i, 0);
            boundary->momy_hi += p_cells(i, ny - 1);
        }
    }
    return qout;
}

} // namespace simhd

#endif
