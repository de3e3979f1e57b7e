#include "simhd/ct.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace simhd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Field2D<Prim> prim_with(int nx, int ny, auto fill) {
    Field2D<Prim> f(nx, ny, Loc::Cell);
    for (int j = -f.halo(); j < ny + f.halo(); ++j)
        for (int i = -f.halo(); i < nx + f.halo(); ++i) f(i, j) = fill(i, j);
    return f;
}

} // namespace

TEST_CASE("corner values") {
    const int n = 8;
    SECTION("constant") {
        auto f = prim_with(n, n, [](int, int) {
            Prim v;
            v.rho = 3.0;
            return v;
        });
        auto c = corner_values(f);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) REQUIRE(c(i, j).rho == 3.0);
    }
    SECTION("bilinear field is exact at the corners") {
        Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 2.0);
        auto f = prim_with(n, n, [&](int i, int j) {
            Prim v;
            v.rho = 1.0 + 2.0 * mesh.xc(i) + 3.0 * mesh.yc(j) +
                    0.5 * mesh.xc(i) * mesh.yc(j);
            return v;
        });
        auto c = corner_values(f);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const double x = mesh.xf(i), y = mesh.yf(j);
                REQUIRE_THAT(c(i, j).rho,
                             WithinRel(1.0 + 2.0 * x + 3.0 * y + 0.5 * x * y, 1e-13));
            }
    }
    SECTION("checkerboard averages to zero") {
        auto f = prim_with(n, n, [](int i, int j) {
            Prim v;
            v.rho = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            return v;
        });
        auto c = corner_values(f);
        REQUIRE(c(3, 3).rho == 0.0);
        REQUIRE(c(4, 2).rho == 0.0);
    }
}

TEST_CASE("corner gradients") {
    const int n = 8;
    Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
    SECTION("constant field") {
        auto f = prim_with(n, n, [](int, int) {
            Prim v;
            v.rho = 2.0;
            return v;
        });
        auto g = corner_gradients(f, mesh);
        REQUIRE(g(2, 5).ddx.rho == 0.0);
        REQUIRE(g(2, 5).ddy.rho == 0.0);
    }
    SECTION("linear fields are exact") {
        const double a = 1.7, b = -0.6;
        auto f = prim_with(n, n, [&](int i, int j) {
            Prim v;
            v.rho = a * mesh.xc(i);
            v.u = b * mesh.yc(j);
            return v;
        });
        auto g = corner_gradients(f, mesh);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                REQUIRE_THAT(g(i, j).ddx.rho, WithinRel(a, 1e-12));
                REQUIRE_THAT(g(i, j).ddy.rho, WithinAbs(0.0, 1e-13));
                REQUIRE_THAT(g(i, j).ddy.u, WithinRel(b, 1e-12));
                REQUIRE_THAT(g(i, j).ddx.u, WithinAbs(0.0, 1e-13));
            }
    }
}

TEST_CASE("corner EMF") {
    const int n = 8;
    Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
    CornerSpeeds zero_speeds{Field2D<double>(n, n, Loc::Corner),
                             Field2D<double>(n, n, Loc::Corner)};
    SECTION("uniform v and B") {
        FaceB fb(n, n);
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 1e-3;
        fb.apply_bc(Bc::Periodic, Bc::Periodic);
        auto cv = prim_with(n, n, [](int, int) {
            Prim v;
            v.u = 2.0;
            v.v = 1.0;
            return v;
        });
        auto cp = corner_values(cv);
        auto cg = corner_gradients(cv, mesh);
        // dissipation terms vanish on uniform fields even with nonzero speeds
        CornerSpeeds s{Field2D<double>(n, n, Loc::Corner),
                       Field2D<double>(n, n, Loc::Corner)};
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                s.x(i, j) = 3.0;
                s.y(i, j) = 2.0;
            }
        auto ez = corner_emf(fb, cp, cg, s, 0.0);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) REQUIRE_THAT(ez(i, j), WithinRel(1e-3, 1e-12));
    }
    SECTION("at rest with uniform B the EMF vanishes") {
        FaceB fb(n, n);
        for (int j = 0; j < fb.by.ny(); ++j)
            for (int i = 0; i < fb.by.nx(); ++i) fb.by(i, j) = 0.7;
        fb.apply_bc(Bc::Periodic, Bc::Periodic);
        auto cv = prim_with(n, n, [](int, int) { return Prim{}; });
        auto ez = corner_emf(fb, corner_values(cv), corner_gradients(cv, mesh),
                             zero_speeds, 0.0);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) REQUIRE(ez(i, j) == 0.0);
    }
    SECTION("resistive term on a linear Bx profile") {
        // v = 0, Bx = g y: E^z = eta (dx By - dy Bx) = -eta g.
        const double g = 0.8, eta = 0.25;
        FaceB fb(n, n);
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = g * mesh.yc(j);
        fb.apply_bc(Bc::Transmissive, Bc::Transmissive);
        auto cells = prim_with(n, n, [&](int, int j) {
            Prim v;
            v.bx = g * mesh.yc(j);
            return v;
        });
        auto ez = corner_emf(fb, corner_values(cells), corner_gradients(cells, mesh),
                             zero_speeds, eta);
        // interior corners see the exact gradient
        for (int j = 1; j < n; ++j)
            for (int i = 1; i < n; ++i)
                REQUIRE_THAT(ez(i, j), WithinRel(-eta * g, 1e-12));
    }
}

TEST_CASE("face B update") {
    const int n = 6;
    Mesh2D mesh(n, n, 0.0, 6.0, 0.0, 6.0); // dx = dy = 1
    SECTION("constant EMF leaves B unchanged") {
        FaceB fb(n, n);
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 2.0;
        Field2D<double> ez(n, n, Loc::Corner);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) ez(i, j) = 5.0;
        update_face_b(fb, ez, 0.3, mesh);
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) REQUIRE(fb.bx(i, j) == 2.0);
        for (int j = 0; j < fb.by.ny(); ++j)
            for (int i = 0; i < fb.by.nx(); ++i) REQUIRE(fb.by(i, j) == 0.0);
    }
    SECTION("a single corner EMF touches exactly four faces") {
        FaceB fb(n, n);
        Field2D<double> ez(n, n, Loc::Corner);
        ez(3, 3) = 1.0;
        update_face_b(fb, ez, 1.0, mesh);
        REQUIRE(fb.bx(3, 3) == 1.0);
        REQUIRE(fb.bx(3, 2) == -1.0);
        REQUIRE(fb.by(3, 3) == -1.0);
        REQUIRE(fb.by(2, 3) == 1.0);
        int nonzero = 0;
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) nonzero += fb.bx(i, j) != 0.0;
        for (int j = 0; j < fb.by.ny(); ++j)
            for (int i = 0; i < fb.by.nx(); ++i) nonzero += fb.by(i, j) != 0.0;
        REQUIRE(nonzero == 4);
        // and the divergence created in the four adjacent cells cancels
        REQUIRE(max_abs_div_b(fb, mesh) == 0.0);
    }
    SECTION("divergence is preserved for arbitrary EMF fields") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        FaceB fb = init_from_vector_potential(
            [&](double x, double y) { return std::sin(x) * std::cos(2.0 * y); },
            Mesh2D(n, n, 0.0, 2.0 * pi, 0.0, 2.0 * pi));
        Mesh2D m2(n, n, 0.0, 2.0 * pi, 0.0, 2.0 * pi);
        const double div0 = max_abs_div_b(fb, m2);
        Field2D<double> ez(n, n, Loc::Corner);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) ez(i, j) = d(rng);
        update_face_b(fb, ez, 0.1, m2);
        REQUIRE(max_abs_div_b(fb, m2) <=
                std::max(div0, 1e-12 * std::max(max_abs_face_b(fb), 1.0)));
    }
    SECTION("face sums are conserved under periodic BCs") {
        Mesh2D m2(n, n, 0.0, 1.0, 0.0, 1.0);
        FaceB fb(n, n);
        std::mt19937 rng(43);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                fb.bx(i, j) = d(rng);
                fb.by(i, j) = d(rng);
            }
        fb.apply_bc(Bc::Periodic, Bc::Periodic);
        Field2D<double> ez(n, n, Loc::Corner);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) ez(i, j) = d(rng);
        apply_bc(ez, Bc::Periodic, Bc::Periodic);
        double sx0 = 0.0, sy0 = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                sx0 += fb.bx(i, j);
                sy0 += fb.by(i, j);
            }
        update_face_b(fb, ez, 0.2, m2);
        double sx1 = 0.0, sy1 = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                sx1 += fb.bx(i, j);
                sy1 += fb.by(i, j);
            }
        REQUIRE_THAT(sx1, WithinAbs(sx0, 1e-13));
        REQUIRE_THAT(sy1, WithinAbs(sy0, 1e-13));
    }
}

TEST_CASE("face to center averaging") {
    const int n = 6;
    Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
    FaceB fb(n, n);
    for (int j = 0; j < fb.bx.ny(); ++j)
        for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 3.0 * mesh.xf(i);
    Field2D<Cons> q(n, n, Loc::Cell);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) q(i, j).bx = 99.0; // auxiliary value, overwritten
    face_to_center_b(fb, q);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            REQUIRE_THAT(q(i, j).bx, WithinRel(3.0 * mesh.xc(i), 1e-13));
            REQUIRE(q(i, j).by == 0.0);
        }
}

TEST_CASE("discrete divergence") {
    const int n = 8;
    Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
    SECTION("uniform field") {
        FaceB fb(n, n);
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) fb.bx(i, j) = 4.0;
        REQUIRE(max_abs_div_b(fb, mesh) == 0.0);
    }
    SECTION("a single bumped face is a dipole of monopoles") {
        FaceB fb(n, n);
        fb.bx(3, 4) = 1.0;
        Field2D<double> div = discrete_div_b(fb, mesh);
        REQUIRE_THAT(div(2, 4), WithinRel(1.0 / mesh.dx(), 1e-14));
        REQUIRE_THAT(div(3, 4), WithinRel(-1.0 / mesh.dx(), 1e-14));
        REQUIRE(div(4, 4) == 0.0);
    }
}

TEST_CASE("vector potential initialization") {
    const int n = 16;
    SECTION("constant potential gives zero field") {
        Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
        FaceB fb = init_from_vector_potential([](double, double) { return 5.0; }, mesh);
        REQUIRE(max_abs_face_b(fb) == 0.0);
    }
    SECTION("linear potential A = B0 x gives uniform By = -B0") {
        Mesh2D mesh(n, n, 0.0, 1.0, 0.0, 1.0);
        FaceB fb = init_from_vector_potential([](double x, double) { return 2.5 * x; },
                                              mesh);
        for (int j = 0; j < fb.by.ny(); ++j)
            for (int i = 0; i < fb.by.nx(); ++i)
                REQUIRE_THAT(fb.by(i, j), WithinRel(-2.5, 1e-13));
        for (int j = 0; j < fb.bx.ny(); ++j)
            for (int i = 0; i < fb.bx.nx(); ++i) REQUIRE(fb.bx(i, j) == 0.0);
    }
    SECTION("the field loop potential is discretely divergence-free") {
        Mesh2D mesh(2 * n, n, -1.0, 1.0, -0.5, 0.5);
        const double a0 = 1e-3, radius = 0.3;
        FaceB fb = init_from_vector_potential(
            [&](double x, double y) {
                const double r = std::sqrt(x * x + y * y);
                return r <= radius ? a0 * (radius - r) : 0.0;
            },
            mesh);
        const double maxb = max_abs_face_b(fb);
        REQUIRE(max_abs_div_b(fb, mesh) <= 1e-14 * maxb / mesh.dx());
    }
}

TEST_CASE("resistive decay of a current sheet is monotone") {
    // v = 0, eta > 0: the staggered update is a pure discrete diffusion of
    // By(x); the total magnetic energy must not increase.
    const int nx = 32, ny = 4;
    Mesh2D mesh(nx, ny, -1.0, 1.0, -0.1, 0.1);
    const double eta = 0.1;
    FaceB fb(nx, ny);
    for (int j = 0; j < fb.by.ny(); ++j)
        for (int i = 0; i < fb.by.nx(); ++i)
            fb.by(i, j) = mesh.xc(i) <= 0.0 ? 1.0 : -1.0;

    auto magnetic_energy = [&]() {
        double e = 0.0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double bx = 0.5 * (fb.bx(i, j) + fb.bx(i + 1, j));
                const double by = 0.5 * (fb.by(i, j) + fb.by(i, j + 1));
                e += (bx * bx + by * by) / eight_pi * mesh.cell_area();
            }
        return e;
    };

    CornerSpeeds zero{Field2D<double>(nx, ny, Loc::Corner),
                      Field2D<double>(nx, ny, Loc::Corner)};
    double prev = magnetic_energy();
    const double dt = 0.2 * mesh.dx() * mesh.dx() / eta;
    for (int step = 0; step < 40; ++step) {
        fb.apply_bc(Bc::Transmissive, Bc::Periodic);
        Field2D<Prim> cells(nx, ny, Loc::Cell);
        for (int j = -2; j < ny + 2; ++j)
            for (int i = -2; i < nx + 2; ++i) {
                Prim v;
                v.bx = 0.5 * (fb.bx(i, j) + fb.bx(i + 1, j));
                v.by = 0.5 * (fb.by(i, j) + fb.by(i, j + 1));
                cells(i, j) = v;
            }
        Field2D<double> ez = corner_emf(fb, corner_values(cells),
                                        corner_gradients(cells, mesh), zero, eta);
        update_face_b(fb, ez, dt, mesh);
        const double e = magnetic_energy();
        REQUIRE(e <= prev * (1.0 + 1e-12));
        prev = e;
    }
    REQUIRE(max_abs_div_b(fb, mesh) <= 1e-12);
}
