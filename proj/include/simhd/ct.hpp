#ifndef SIMHD_CT_HPP
#define SIMHD_CT_HPP

#include "simhd/explicit_update.hpp"
#include "simhd/grid.hpp"
#include "simhd/state.hpp"

#include <functional>

namespace simhd {

// Staggered normal magnetic field components: Bx on x-faces (i+1/2, j),
// By on y-faces (i, j+1/2). These are the primary representation of the
// discrete magnetic field in 2D; the cell-centered values are derived.
struct FaceB {
    Field2D<double> bx;
    Field2D<double> by;

    FaceB() = default;
    FaceB(int nx, int ny, int halo = default_halo)
        : bx(nx, ny, Loc::XFace, halo), by(nx, ny, Loc::YFace, halo) {}

    void apply_bc(Bc bc_x, Bc bc_y) {
        simhd::apply_bc(bx, bc_x, bc_y);
        simhd::apply_bc(by, bc_x, bc_y);
    }
};

// Four-cell arithmetic mean onto the corners (i+1/2, j+1/2). Requires one
// halo ring of the cell field.
template <class T>
Field2D<T> corner_values(const Field2D<T>& cells) {
    assert(cells.loc() == Loc::Cell);
    Field2D<T> out(cells.nx_cells(), cells.ny_cells(), Loc::Corner, cells.halo());
    for (int j = 0; j < out.ny(); ++j)
        for (int i = 0; i < out.nx(); ++i)
            out(i, j) = 0.25 * (cells(i - 1, j - 1) + cells(i, j - 1) +
                                cells(i - 1, j) + cells(i, j));
    return out;
}

// Corner gradient of the primitive vector: each derivative is the mean of
// the two one-sided differences across the corner. Exact for linear fields.
inline Field2D<PrimGrad> corner_gradients(const Field2D<Prim>& cells,
                                          const Mesh2D& mesh) {
    assert(cells.loc() == Loc::Cell);
    Field2D<PrimGrad> out(cells.nx_cells(), cells.ny_cells(), Loc::Corner,
                          cells.halo());
    const double rdx = 1.0 / mesh.dx(), rdy = 1.0 / mesh.dy();
    for (int j = 0; j < out.ny(); ++j) {
        for (int i = 0; i < out.nx(); ++i) {
            PrimGrad g;
            g.ddx = (0.5 * rdx) * ((cells(i, j) - cells(i - 1, j)) +
                                   (cells(i, j - 1) - cells(i - 1, j - 1)));
            g.ddy = (0.5 * rdy) * ((cells(i, j) - cells(i, j - 1)) +
                                   (cells(i - 1, j) - cells(i - 1, j - 1)));
            out(i, j) = g;
        }
    }
    return out;
}

// Directional maximum signal speeds at the corners: the maximum of the
// absolute eigenvalues over the four cells sharing each corner, separately
// per direction. The eigenvalue set matches the explicit flux in use.
struct CornerSpeeds {
    Field2D<double> x;
    Field2D<double> y;
};

inline CornerSpeeds corner_speeds(const Field2D<Cons>& q, const Eos& eos,
                                  FluxKind kind) {
    CornerSpeeds s{Field2D<double>(q.nx_cells(), q.ny_cells(), Loc::Corner, q.halo()),
                   Field2D<double>(q.nx_cells(), q.ny_cells(), Loc::Corner, q.halo())};
    auto speed = [&](const Cons& c, Axis dir) {
        return kind == FluxKind::Convective ? max_abs_eigen_convective(c, dir)
                                            : max_abs_eigen_full(c, eos, dir);
    };
    for (int j = 0; j < s.x.ny(); ++j) {
        for (int i = 0; i < s.x.nx(); ++i) {
            double mx = 0.0, my = 0.0;
            for (int dj = -1; dj <= 0; ++dj) {
                for (int di = -1; di <= 0; ++di) {
                    const Cons& c = q(i + di, j + dj);
                    mx = std::max(mx, speed(c, Axis::X));
                    my = std::max(my, speed(c, Axis::Y));
                }
            }
            s.x(i, j) = mx;
            s.y(i, j) = my;
        }
    }
    return s;
}

// z-component of the corner electric field,
//   E_z = v <Bx> - u <By>  (Rusanov-stabilized averages of the staggered
//   normal fields)  + eta (dx By - dy Bx),
// where the resistive curl term uses the corner gradients of the
// cell-centered field. Face fields must be halo-exchanged.
inline Field2D<double> corner_emf(const FaceB& fb, const Field2D<Prim>& cv,
                                  const Field2D<PrimGrad>& cg,
                                  const CornerSpeeds& smax, double eta) {
    Field2D<double> ez(fb.bx.nx_cells(), fb.bx.ny_cells(), Loc::Corner,
                       fb.bx.halo());
    for (int j = 0; j < ez.ny(); ++j) {
        for (int i = 0; i < ez.nx(); ++i) {
            const double bxl = fb.bx(i, j - 1), bxh = fb.bx(i, j);
            const double byl = fb.by(i - 1, j), byh = fb.by(i, j);
            double e = 0.5 * cv(i, j).v * (bxl + bxh) -
                       0.5 * smax.y(i, j) * (bxh - bxl) -
                       0.5 * cv(i, j).u * (byl + byh) +
                       0.5 * smax.x(i, j) * (byh - byl);
            if (eta > 0.0) e += eta * (cg(i, j).ddx.by - cg(i, j).ddy.bx);
            ez(i, j) = e;
        }
    }
    return ez;
}

// Curl-form update of the staggered field. Preserves the discrete
// divergence of every cell exactly (the corner contributions cancel).
inline void update_face_b(FaceB& fb, const Field2D<double>& ez, double dt,
                          const Mesh2D& mesh) {
    const double cy = dt / mesh.dy(), cx = dt / mesh.dx();
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i)
            fb.bx(i, j) -= cy * (ez(i, j + 1) - ez(i, j));
    for (int j = 0; j < fb.by.ny(); ++j)
        for (int i = 0; i < fb.by.nx(); ++i)
            fb.by(i, j) += cx * (ez(i + 1, j) - ez(i, j));
}

// Overwrite the cell-centered Bx, By of a state field with the averages of
// the staggered components. The explicit-update values are auxiliary only.
inline void face_to_center_b(const FaceB& fb, Field2D<Cons>& q) {
    for (int j = 0; j < q.ny(); ++j) {
        for (int i = 0; i < q.nx(); ++i) {
            q(i, j).bx = 0.5 * (fb.bx(i, j) + fb.bx(i + 1, j));
            q(i, j).by = 0.5 * (fb.by(i, j) + fb.by(i, j + 1));
        }
    }
}

// Discrete divergence (Bx_{i+1/2,j} - Bx_{i-1/2,j})/dx + (By_{i,j+1/2} -
// By_{i,j-1/2})/dy per cell.
inline Field2D<double> discrete_div_b(const FaceB& fb, const Mesh2D& mesh) {
    Field2D<double> div(fb.bx.nx_cells(), fb.bx.ny_cells(), Loc::Cell,
                        fb.bx.halo());
    const double rdx = 1.0 / mesh.dx(), rdy = 1.0 / mesh.dy();
    for (int j = 0; j < div.ny(); ++j)
        for (int i = 0; i < div.nx(); ++i)
            div(i, j) = (fb.bx(i + 1, j) - fb.bx(i, j)) * rdx +
                        (fb.by(i, j + 1) - fb.by(i, j)) * rdy;
    return div;
}

inline double max_abs_div_b(const FaceB& fb, const Mesh2D& mesh) {
    Field2D<double> div = discrete_div_b(fb, mesh);
    double m = 0.0;
    for (int j = 0; j < div.ny(); ++j)
        for (int i = 0; i < div.nx(); ++i) m = std::max(m, std::abs(div(i, j)));
    return m;
}

inline double max_abs_face_b(const FaceB& fb) {
    double m = 0.0;
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i) m = std::max(m, std::abs(fb.bx(i, j)));
    for (int j = 0; j < fb.by.ny(); ++j)
        for (int i = 0; i < fb.by.nx(); ++i) m = std::max(m, std::abs(fb.by(i, j)));
    return m;
}

// Face-centered magnetic field from a z-directed vector potential sampled
// at the corner points:
//   Bx_{i+1/2,j} =  (A_{i+1/2,j+1/2} - A_{i+1/2,j-1/2}) / dy,
//   By_{i,j+1/2} = -(A_{i+1/2,j+1/2} - A_{i-1/2,j+1/2}) / dx.
// The result is discretely divergence-free by the telescoping of the
// corner samples.
inline FaceB init_from_vector_potential(
    const std::function<double(double, double)>& A, const Mesh2D& mesh,
    int halo = default_halo) {
    FaceB fb(mesh.nx(), mesh.ny(), halo);
    const double rdy = 1.0 / mesh.dy(), rdx = 1.0 / mesh.dx();
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i)
            fb.bx(i, j) = (A(mesh.xf(i), mesh.yf(j + 1)) - A(mesh.xf(i), mesh.yf(j))) * rdy;
    for (int j = 0; j < fb.by.ny(); ++j)
        for (int i = 0; i < fb.by.nx(); ++i)
            fb.by(i, j) = -(A(mesh.xf(i + 1), mesh.yf(j)) - A(mesh.xf(i), mesh.yf(j))) * rdx;
    return fb;
}

} // namespace simhd

#endif
