#ifndef SIMHD_EXPLICIT_UPDATE_HPP
#define SIMHD_EXPLICIT_UPDATE_HPP

#include "simhd/grid.hpp"
#include "simhd/state.hpp"

namespace simhd {

// Which flux the explicit stage differences: the pressure-free convective
// flux (semi-implicit scheme) or the unsplit flux (density-based explicit
// reference scheme). The Rusanov signal speed follows the same choice.
enum class FluxKind { Convective, Full };

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

inline Cons directional_flux(const Cons& q, const Eos& eos, Axis dir, FluxKind kind) {
    return kind == FluxKind::Convective ? flux_convective(q, dir)
                                        : flux_full(q, eos, dir);
}

inline double signal_speed(const Cons& ql, const Cons& qr, const Eos& eos,
                           Axis dir, FluxKind kind) {
    if (kind == FluxKind::Convective) return max_convective_speed(ql, qr, dir);
    return std::max(max_abs_eigen_full(ql, eos, dir),
                    max_abs_eigen_full(qr, eos, dir));
}

// Rusanov flux between the boundary extrapolated states Q- and Q+ at one
// interface: central flux average minus half the maximum signal speed
// times the state jump. The normal magnetic field row has an identically
// zero flux function, so it receives no dissipation either; in 1D the
// update therefore never modifies Bx.
inline Cons rusanov_flux(const Cons& qm, const Cons& qp, const Eos& eos,
                         Axis dir, FluxKind kind) {
    const double smax = signal_speed(qm, qp, eos, dir, kind);
    Cons f = 0.5 * (directional_flux(qm, eos, dir, kind) +
                    directional_flux(qp, eos, dir, kind)) -
             0.5 * smax * (qp - qm);
    if (dir == Axis::X)
        f.bx = 0.0;
    else
        f.by = 0.0;
    return f;
}

// Limited slope and time derivative of the space-time reconstruction
// w_i(x,t) = Q_i + (dQ_i/dx_i)(x - x_i) + dtQ_i (t - t^n). The slope is
// the total variation of the linear profile across the cell.
struct Recon {
    Cons slope;
    Cons dt_q;
};

inline Recon reconstruct(const Cons& qm1, const Cons& q0, const Cons& qp1,
                         double dx_i, double dxd_minus, double dxd_plus,
                         const Eos& eos, FluxKind kind = FluxKind::Convective) {
    Recon r;
    for (int k = 0; k < n_comp; ++k)
        r.slope[k] = dx_i * minmod((qp1[k] - q0[k]) / dxd_plus,
                                   (q0[k] - qm1[k]) / dxd_minus);
    const Cons f_lo = directional_flux(q0 - 0.5 * r.slope, eos, Axis::X, kind);
    const Cons f_hi = directional_flux(q0 + 0.5 * r.slope, eos, Axis::X, kind);
    r.dt_q = (1.0 / dx_i) * (f_lo - f_hi);
    return r;
}

// Q_i^* = Q_i^n - dt/dx_i (f_{i+1/2} - f_{i-1/2}) with first order or
// MUSCL-Hancock second order boundary extrapolated states. Halos of q must
// be filled. Density, transverse momenta and (in 1D) the magnetic field
// components of the result are already final. Optionally reports the two
// boundary fluxes actually used, for the conservation audit.
inline Field1D<Cons> explicit_update_1d(const Field1D<Cons>& q, double dt,
                                        const Mesh1D& mesh, const Eos& eos,
                                        int order,
                                        FluxKind kind = FluxKind::Convective,
                                        Cons* bflux_lo = nullptr,
                                        Cons* bflux_hi = nullptr) {
    const int nx = mesh.nx();
    Field1D<Cons> qstar(nx, Loc::Cell, q.halo());

    // Left/right extrapolated states at every face 0..nx.
    std::vector<Cons> qm(nx + 1), qp(nx + 1);
    if (order <= 1) {
        for (int f = 0; f <= nx; ++f) {
            qm[f] = q(f - 1);
            qp[f] = q(f);
        }
    } else {
        std::vector<Recon> rec(nx + 2); // cells -1 .. nx
        for (int i = -1; i <= nx; ++i)
            rec[i + 1] = reconstruct(q(i - 1), q(i), q(i + 1), mesh.dx(i),
                                     mesh.dx_dual(i), mesh.dx_dual(i + 1), eos,
                                     kind);
        for (int f = 0; f <= nx; ++f) {
            const Recon& rl = rec[f];     // cell f-1
            const Recon& rr = rec[f + 1]; // cell f
            qm[f] = q(f - 1) + 0.5 * rl.slope + (0.5 * dt) * rl.dt_q;
            qp[f] = q(f) - 0.5 * rr.slope + (0.5 * dt) * rr.dt_q;
        }
    }

    std::vector<Cons> flux(nx + 1);
    for (int f = 0; f <= nx; ++f)
        flux[f] = rusanov_flux(qm[f], qp[f], eos, Axis::X, kind);

    for (int i = 0; i < nx; ++i)
        qstar(i) = q(i) - (dt / mesh.dx(i)) * (flux[i + 1] - flux[i]);

    if (bflux_lo) *bflux_lo = flux[0];
    if (bflux_hi) *bflux_hi = flux[nx];
    return qstar;
}

// Accumulated boundary fluxes of a 2D explicit update (sums over the
// boundary faces of the numerical fluxes actually applied).
struct BoundaryFluxSums {
    Cons x_lo, x_hi, y_lo, y_hi;
};

// Two-dimensional explicit update, Eq.-form
//   Q* = Q^n - dt/dx (f_{i+1/2,j} - f_{i-1/2,j}) - dt/dy (g_{i,j+1/2} - g_{i,j-1/2}),
// with MUSCL-Hancock slopes limited per direction and the viscous flux
// averaged from the two corners adjacent to each face. corner_prim /
// corner_grad may be null when the fluid is ideal (mu = lambda = eta = 0).
inline Field2D<Cons> explicit_update_2d(const Field2D<Cons>& q, double dt,
                                        const Mesh2D& mesh, const Eos& eos,
                                        const FluidParams& par, int order,
                                        const Field2D<Prim>* corner_prim,
                                        const Field2D<PrimGrad>* corner_grad,
                                        FluxKind kind = FluxKind::Convective,
                                        BoundaryFluxSums* bsums = nullptr) {
    const int nx = mesh.nx(), ny = mesh.ny();
    const double dx = mesh.dx(), dy = mesh.dy();
    const bool viscous = par.dissipative();
    if (viscous && (!corner_prim || !corner_grad))
        throw ConfigError("viscous 2D update requires corner primitives/gradients");

    // Per-cell slopes and time derivatives over the owned cells plus one
    // halo ring (faces need the neighbour reconstructions).
    Field2D<Cons> sx(nx, ny, Loc::Cell, q.halo());
    Field2D<Cons> sy(nx, ny, Loc::Cell, q.halo());
    Field2D<Cons> dtq(nx, ny, Loc::Cell, q.halo());
    if (order >= 2) {
        for (int j = -1; j <= ny; ++j) {
            for (int i = -1; i <= nx; ++i) {
                Cons sxi, syi;
                for (int k = 0; k < n_comp; ++k) {
                    sxi[k] = minmod(q(i + 1, j)[k] - q(i, j)[k],
                                    q(i, j)[k] - q(i - 1, j)[k]);
                    syi[k] = minmod(q(i, j + 1)[k] - q(i, j)[k],
                                    q(i, j)[k] - q(i, j - 1)[k]);
                }
                sx(i, j) = sxi;
                sy(i, j) = syi;
                const Cons fx_lo = directional_flux(q(i, j) - 0.5 * sxi, eos, Axis::X, kind);
                const Cons fx_hi = directional_flux(q(i, j) + 0.5 * sxi, eos, Axis::X, kind);
                const Cons gy_lo = directional_flux(q(i, j) - 0.5 * syi, eos, Axis::Y, kind);
                const Cons gy_hi = directional_flux(q(i, j) + 0.5 * syi, eos, Axis::Y, kind);
                dtq(i, j) = (1.0 / dx) * (fx_lo - fx_hi) + (1.0 / dy) * (gy_lo - gy_hi);
            }
        }
    }

    auto extrapolated = [&](int i, int j, Axis dir, double side) {
        // side = +1: value at the high face of cell (i,j); -1: low face.
        if (order <= 1) return q(i, j);
        const Cons& s = (dir == Axis::X) ? sx(i, j) : sy(i, j);
        return q(i, j) + (0.5 * side) * s + (0.5 * dt) * dtq(i, j);
    };

    Field2D<Cons> fx(nx, ny, Loc::XFace, q.halo());
    Field2D<Cons> gy(nx, ny, Loc::YFace, q.halo());

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const Cons qm = extrapolated(i - 1, j, Axis::X, +1.0);
            const Cons qp = extrapolated(i, j, Axis::X, -1.0);
            Cons f = rusanov_flux(qm, qp, eos, Axis::X, kind);
            if (viscous) {
                const Cons fv_lo = flux_viscous((*corner_prim)(i, j),
                                                (*corner_grad)(i, j), par, Axis::X);
                const Cons fv_hi = flux_viscous((*corner_prim)(i, j + 1),
                                                (*corner_grad)(i, j + 1), par, Axis::X);
                f -= 0.5 * (fv_lo + fv_hi);
            }
            fx(i, j) = f;
        }
    }
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Cons qm = extrapolated(i, j - 1, Axis::Y, +1.0);
            const Cons qp = extrapolated(i, j, Axis::Y, -1.0);
            Cons g = rusanov_flux(qm, qp, eos, Axis::Y, kind);
            if (viscous) {
                const Cons gv_lo = flux_viscous((*corner_prim)(i, j),
                                                (*corner_grad)(i, j), par, Axis::Y);
                const Cons gv_hi = flux_viscous((*corner_prim)(i + 1, j),
                                                (*corner_grad)(i + 1, j), par, Axis::Y);
                g -= 0.5 * (gv_lo + gv_hi);
            }
            gy(i, j) = g;
        }
    }

    Field2D<Cons> qstar(nx, ny, Loc::Cell, q.halo());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            qstar(i, j) = q(i, j) - (dt / dx) * (fx(i + 1, j) - fx(i, j)) -
                          (dt / dy) * (gy(i, j + 1) - gy(i, j));

    if (bsums) {
        *bsums = BoundaryFluxSums{};
        for (int j = 0; j < ny; ++j) {
            bsums->x_lo += fx(0, j);
            bsums->x_hi += fx(nx, j);
        }
        for (int i = 0; i < nx; ++i) {
            bsums->y_lo += gy(i, 0);
            bsums->y_hi += gy(i, ny);
        }
    }
    return qstar;
}

} // namespace simhd

#endif
