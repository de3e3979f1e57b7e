#ifndef SIMHD_GRID_HPP
#define SIMHD_GRID_HPP

#include "simhd/errors.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <vector>

namespace simhd {

enum class Axis { X, Y };
enum class Loc { Cell, XFace, YFace, Corner };
enum class Bc { Periodic, Transmissive };

// Default halo width: one ring for MUSCL slopes plus one for the flux
// stencil.
inline constexpr int default_halo = 2;

// 1D mesh with per-cell widths. Primary control volumes are the cells,
// dual control volumes are centered on the faces with width
// dx_{i+1/2} = (dx_i + dx_{i+1}) / 2. Face index i sits at x_{i-1/2},
// i.e. cell i is bounded by faces i and i+1.
class Mesh1D {
public:
    Mesh1D(int nx, double xl, double xr)
        : xl_(xl), xr_(xr), dx_(nx, (xr - xl) / nx) {
        if (nx <= 0 || !(xr > xl)) throw ConfigError("invalid 1D mesh extents");
        build_faces();
    }

    Mesh1D(std::vector<double> widths, double xl) : xl_(xl), dx_(std::move(widths)) {
        for (double w : dx_)
            if (!(w > 0.0)) throw ConfigError("non-positive cell width");
        xr_ = xl_ + std::accumulate(dx_.begin(), dx_.end(), 0.0);
        build_faces();
    }

    int nx() const { return static_cast<int>(dx_.size()); }
    double x_l() const { return xl_; }
    double x_r() const { return xr_; }

    // Cell width; halo indices take the width of the nearest boundary cell
    // (matching the zero-gradient halo extension).
    double dx(int i) const {
        if (i < 0) i = 0;
        if (i >= nx()) i = nx() - 1;
        return dx_[i];
    }

    // Width of the dual cell centered on face i.
    double dx_dual(int i) const { return 0.5 * (dx(i - 1) + dx(i)); }

    // Face / center coordinates; halo indices extrapolate with the edge width.
    double xf(int i) const {
        if (i < 0) return xf_[0] + i * dx_[0];
        if (i > nx()) return xf_[nx()] + (i - nx()) * dx_[nx() - 1];
        return xf_[i];
    }
    double xc(int i) const { return 0.5 * (xf(i) + xf(i + 1)); }

private:
    void build_faces() {
        xf_.resize(dx_.size() + 1);
        xf_[0] = xl_;
        for (std::size_t i = 0; i < dx_.size(); ++i) xf_[i + 1] = xf_[i] + dx_[i];
    }

    double xl_, xr_;
    std::vector<double> dx_;
    std::vector<double> xf_;
};

// Uniform 2D mesh.
class Mesh2D {
public:
    Mesh2D(int nx, int ny, double xl, double xr, double yl, double yr)
        : nx_(nx), ny_(ny), xl_(xl), xr_(xr), yl_(yl), yr_(yr),
          dx_((xr - xl) / nx), dy_((yr - yl) / ny) {
        if (nx <= 0 || ny <= 0 || !(dx_ > 0.0) || !(dy_ > 0.0))
            throw ConfigError("invalid 2D mesh extents");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double x_l() const { return xl_; }
    double x_r() const { return xr_; }
    double y_l() const { return yl_; }
    double y_r() const { return yr_; }

    double xf(int i) const { return xl_ + i * dx_; }
    double yf(int j) const { return yl_ + j * dy_; }
    double xc(int i) const { return xl_ + (i + 0.5) * dx_; }
    double yc(int j) const { return yl_ + (j + 0.5) * dy_; }

    double cell_area() const { return dx_ * dy_; }

private:
    int nx_, ny_;
    double xl_, xr_, yl_, yr_;
    double dx_, dy_;
};

namespace detail {
// Logical extent of a field along one direction: face-like locations store
// one more entry than there are cells.
inline int extent(int ncells, bool face_like) { return face_like ? ncells + 1 : ncells; }
} // namespace detail

// Dense 1D field at cells or faces, with halo. Index 0..n-1 is owned,
// negative / >= n indices address the halo.
template <class T>
class Field1D {
public:
    Field1D() = default;
    Field1D(int nx_cells, Loc loc, int halo = default_halo)
        : nx_cells_(nx_cells), loc_(loc), halo_(halo),
          n_(detail::extent(nx_cells, loc == Loc::XFace)),
          v_(static_cast<std::size_t>(n_ + 2 * halo)) {
        if (halo > nx_cells) throw ConfigError("halo width exceeds field size");
    }

    Loc loc() const { return loc_; }
    int n() const { return n_; }
    int nx_cells() const { return nx_cells_; }
    int halo() const { return halo_; }

    T& operator()(int i) { return v_[static_cast<std::size_t>(i + halo_)]; }
    const T& operator()(int i) const { return v_[static_cast<std::size_t>(i + halo_)]; }

private:
    int nx_cells_ = 0;
    Loc loc_ = Loc::Cell;
    int halo_ = 0;
    int n_ = 0;
    std::vector<T> v_;
};

// Dense 2D field with halo ring, row-major.
template <class T>
class Field2D {
public:
    Field2D() = default;
    Field2D(int nx_cells, int ny_cells, Loc loc, int halo = default_halo)
        : nx_cells_(nx_cells), ny_cells_(ny_cells), loc_(loc), halo_(halo),
          nx_(detail::extent(nx_cells, loc == Loc::XFace || loc == Loc::Corner)),
          ny_(detail::extent(ny_cells, loc == Loc::YFace || loc == Loc::Corner)),
          stride_(nx_ + 2 * halo),
          v_(static_cast<std::size_t>(stride_) * (ny_ + 2 * halo)) {
        if (halo > nx_cells || halo > ny_cells)
            throw ConfigError("halo width exceeds field size");
    }

    Loc loc() const { return loc_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nx_cells() const { return nx_cells_; }
    int ny_cells() const { return ny_cells_; }
    int halo() const { return halo_; }

    T& operator()(int i, int j) {
        return v_[static_cast<std::size_t>(j + halo_) * stride_ + (i + halo_)];
    }
    const T& operator()(int i, int j) const {
        return v_[static_cast<std::size_t>(j + halo_) * stride_ + (i + halo_)];
    }

private:
    int nx_cells_ = 0, ny_cells_ = 0;
    Loc loc_ = Loc::Cell;
    int halo_ = 0;
    int nx_ = 0, ny_ = 0;
    int stride_ = 0;
    std::vector<T> v_;
};

// Halo fill, 1D. Periodic identification for face fields has period
// nx_cells (face nx is the same physical face as face 0), so the discrete
// div B stencil stays well-defined across the seam.
template <class T>
void apply_bc(Field1D<T>& f, Bc bc) {
    const int n = f.n();
    const int nc = f.nx_cells();
    const bool face = (f.loc() == Loc::XFace);
    for (int k = 1; k <= f.halo(); ++k) {
        if (bc == Bc::Periodic) {
            f(-k) = f(nc - k);
            f(n - 1 + k) = face ? f(k) : f(k - 1);
        } else {
            f(-k) = f(0);
            f(n - 1 + k) = f(n - 1);
        }
    }
    if (bc == Bc::Periodic && face) f(nc) = f(0);
}

namespace detail {
template <class T>
void fill_dir_x(Field2D<T>& f, Bc bc, int jlo, int jhi) {
    const int n = f.nx();
    const int nc = f.nx_cells();
    const bool face = (f.loc() == Loc::XFace || f.loc() == Loc::Corner);
    for (int j = jlo; j <= jhi; ++j) {
        if (bc == Bc::Periodic && face) f(nc, j) = f(0, j);
        for (int k = 1; k <= f.halo(); ++k) {
            if (bc == Bc::Periodic) {
                f(-k, j) = f(nc - k, j);
                f(n - 1 + k, j) = face ? f(k, j) : f(k - 1, j);
            } else {
                f(-k, j) = f(0, j);
                f(n - 1 + k, j) = f(n - 1, j);
            }
        }
    }
}

template <class T>
void fill_dir_y(Field2D<T>& f, Bc bc, int ilo, int ihi) {
    const int n = f.ny();
    const int nc = f.ny_cells();
    const bool face = (f.loc() == Loc::YFace || f.loc() == Loc::Corner);
    for (int i = ilo; i <= ihi; ++i) {
        if (bc == Bc::Periodic && face) f(i, nc) = f(i, 0);
        for (int k = 1; k <= f.halo(); ++k) {
            if (bc == Bc::Periodic) {
                f(i, -k) = f(i, nc - k);
                f(i, n - 1 + k) = face ? f(i, k) : f(i, k - 1);
            } else {
                f(i, -k) = f(i, 0);
                f(i, n - 1 + k) = f(i, n - 1);
            }
        }
    }
}
} // namespace detail

// Halo fill, 2D: x sweep over owned rows, then y sweep over the full
// extended range so that the halo corners are consistent with both sides.
template <class T>
void apply_bc(Field2D<T>& f, Bc bc_x, Bc bc_y) {
    detail::fill_dir_x(f, bc_x, 0, f.ny() - 1);
    detail::fill_dir_y(f, bc_y, -f.halo(), f.nx() - 1 + f.halo());
}

// Conservative averaging operators between the main grid and the staggered
// dual grids, 1D with width weights and 2D arithmetic means.

template <class T>
Field1D<T> avg_dual_to_main_1d(const Field1D<T>& f) {
    assert(f.loc() == Loc::XFace);
    Field1D<T> out(f.nx_cells(), Loc::Cell, f.halo());
    for (int i = 0; i < out.n(); ++i) out(i) = 0.5 * (f(i) + f(i + 1));
    return out;
}

template <class T>
Field1D<T> avg_main_to_dual_1d(const Field1D<T>& f, const Mesh1D& mesh) {
    assert(f.loc() == Loc::Cell);
    Field1D<T> out(f.nx_cells(), Loc::XFace, f.halo());
    for (int i = 0; i < out.n(); ++i)
        out(i) = (0.5 / mesh.dx_dual(i)) *
                 (mesh.dx(i - 1) * f(i - 1) + mesh.dx(i) * f(i));
    return out;
}

template <class T>
Field2D<T> avg_main_to_dual_2d(const Field2D<T>& f, Axis dir) {
    assert(f.loc() == Loc::Cell);
    const Loc loc = (dir == Axis::X) ? Loc::XFace : Loc::YFace;
    Field2D<T> out(f.nx_cells(), f.ny_cells(), loc, f.halo());
    for (int j = 0; j < out.ny(); ++j)
        for (int i = 0; i < out.nx(); ++i)
            out(i, j) = (dir == Axis::X) ? 0.5 * (f(i - 1, j) + f(i, j))
                                         : 0.5 * (f(i, j - 1) + f(i, j));
    return out;
}

template <class T>
Field2D<T> avg_dual_to_main_2d(const Field2D<T>& f) {
    assert(f.loc() == Loc::XFace || f.loc() == Loc::YFace);
    Field2D<T> out(f.nx_cells(), f.ny_cells(), Loc::Cell, f.halo());
    for (int j = 0; j < out.ny(); ++j)
        for (int i = 0; i < out.nx(); ++i)
            out(i, j) = (f.loc() == Loc::XFace) ? 0.5 * (f(i, j) + f(i + 1, j))
                                                : 0.5 * (f(i, j) + f(i, j + 1));
    return out;
}

} // namespace simhd

#endif
