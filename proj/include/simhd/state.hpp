#ifndef SIMHD_STATE_HPP
#define SIMHD_STATE_HPP

#include "simhd/eos.hpp"
#include "simhd/errors.hpp"
#include "simhd/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace simhd {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double four_pi = 4.0 * pi;
inline constexpr double eight_pi = 8.0 * pi;

// Conserved state (rho, rho v, rho E, B) in Gaussian units: magnetic
// energy density is B^2/(8 pi) and all induction terms carry explicit
// 4 pi factors. Also used as a plain 8-vector for fluxes and updates.
struct Cons {
    double rho = 0.0;
    double mx = 0.0, my = 0.0, mz = 0.0;
    double rhoE = 0.0;
    double bx = 0.0, by = 0.0, bz = 0.0;

    double& operator[](int k) {
        return (&rho)[k];
    }
    double operator[](int k) const {
        return (&rho)[k];
    }

    Cons& operator+=(const Cons& o) {
        for (int k = 0; k < 8; ++k) (*this)[k] += o[k];
        return *this;
    }
    Cons& operator-=(const Cons& o) {
        for (int k = 0; k < 8; ++k) (*this)[k] -= o[k];
        return *this;
    }
    Cons& operator*=(double s) {
        for (int k = 0; k < 8; ++k) (*this)[k] *= s;
        return *this;
    }

    friend Cons operator+(Cons a, const Cons& b) { return a += b; }
    friend Cons operator-(Cons a, const Cons& b) { return a -= b; }
    friend Cons operator*(double s, Cons a) { return a *= s; }
    friend Cons operator*(Cons a, double s) { return a *= s; }

    double momentum_sq() const { return mx * mx + my * my + mz * mz; }
    double b_sq() const { return bx * bx + by * by + bz * bz; }
    // Magnetic energy density m = B^2 / (8 pi).
    double magnetic_energy() const { return b_sq() / eight_pi; }
    // Kinetic energy density rho k = m^2 / (2 rho).
    double kinetic_energy() const { return 0.5 * momentum_sq() / rho; }
};

inline constexpr int n_comp = 8;

// Primitive state (rho, v, p, T, B).
struct Prim {
    double rho = 0.0;
    double u = 0.0, v = 0.0, w = 0.0;
    double p = 0.0;
    double T = 0.0;
    double bx = 0.0, by = 0.0, bz = 0.0;

    double& operator[](int k) { return (&rho)[k]; }
    double operator[](int k) const { return (&rho)[k]; }

    double b_sq() const { return bx * bx + by * by + bz * bz; }
    double v_dot_b() const { return u * bx + v * by + w * bz; }

    Prim& operator+=(const Prim& o) {
        for (int k = 0; k < 9; ++k) (*this)[k] += o[k];
        return *this;
    }
    Prim& operator-=(const Prim& o) {
        for (int k = 0; k < 9; ++k) (*this)[k] -= o[k];
        return *this;
    }
    Prim& operator*=(double s) {
        for (int k = 0; k < 9; ++k) (*this)[k] *= s;
        return *this;
    }
    friend Prim operator+(Prim a, const Prim& b) { return a += b; }
    friend Prim operator-(Prim a, const Prim& b) { return a -= b; }
    friend Prim operator*(double s, Prim a) { return a *= s; }
};

inline constexpr int n_prim = 9;

// Transport coefficients of the viscous/resistive system.
struct FluidParams {
    double mu = 0.0;       // dynamic viscosity
    double lambda_c = 0.0; // thermal conductivity
    double eta = 0.0;      // electric resistivity

    bool dissipative() const { return mu > 0.0 || lambda_c > 0.0 || eta > 0.0; }
    double prandtl(const Eos& eos) const {
        return lambda_c > 0.0 ? mu * eos.gamma() * eos.c_v() / lambda_c : 0.0;
    }
};

inline Prim cons_to_prim(const Cons& q, const Eos& eos) {
    if (!(q.rho > 0.0))
        throw AdmissibilityError("non-positive density in cons_to_prim", q.rho);
    Prim v;
    v.rho = q.rho;
    v.u = q.mx / q.rho;
    v.v = q.my / q.rho;
    v.w = q.mz / q.rho;
    v.bx = q.bx;
    v.by = q.by;
    v.bz = q.bz;
    double e = (q.rhoE - q.kinetic_energy() - q.magnetic_energy()) / q.rho;
    if (e < 0.0)
        throw AdmissibilityError("negative internal energy in cons_to_prim", e);
    v.p = eos.pressure_from_energy(e, q.rho);
    v.T = eos.temperature(v.p, q.rho);
    return v;
}

// cons_to_prim with an optional pressure floor: instead of failing on a
// slightly negative internal energy, the recovered pressure is raised to
// the floor. Only used for flux/eigenvalue evaluation; the conserved
// variables are never modified, so flux-form conservation is unaffected.
inline Prim cons_to_prim_floored(const Cons& q, const Eos& eos, double p_floor) {
    if (p_floor <= 0.0) return cons_to_prim(q, eos);
    if (!(q.rho > 0.0))
        throw AdmissibilityError("non-positive density in cons_to_prim", q.rho);
    Prim v;
    v.rho = q.rho;
    v.u = q.mx / q.rho;
    v.v = q.my / q.rho;
    v.w = q.mz / q.rho;
    v.bx = q.bx;
    v.by = q.by;
    v.bz = q.bz;
    double e = (q.rhoE - q.kinetic_energy() - q.magnetic_energy()) / q.rho;
    v.p = std::max(eos.pressure_from_energy(std::max(e, 0.0), q.rho), p_floor);
    v.T = eos.temperature(v.p, q.rho);
    return v;
}

inline Cons prim_to_cons(const Prim& v, const Eos& eos) {
    if (!(v.rho > 0.0))
        throw AdmissibilityError("non-positive density in prim_to_cons", v.rho);
    Cons q;
    q.rho = v.rho;
    q.mx = v.rho * v.u;
    q.my = v.rho * v.v;
    q.mz = v.rho * v.w;
    q.bx = v.bx;
    q.by = v.by;
    q.bz = v.bz;
    q.rhoE = v.rho * eos.internal_energy(v.p, v.rho) + q.kinetic_energy() +
             q.magnetic_energy();
    return q;
}

// Convective-type flux f^c: the pressure-free part of the MHD flux.
// Momentum rows carry m I - B (x) B / (4 pi), the energy row its work,
// and the induction rows are B (x) v - v (x) B. The normal induction
// row is identically zero.
inline Cons flux_convective(const Cons& q, Axis dir) {
    const double rho = q.rho;
    const double u = q.mx / rho, v = q.my / rho, w = q.mz / rho;
    const double m = q.magnetic_energy();
    const double rhok = q.kinetic_energy();
    const double vdb = u * q.bx + v * q.by + w * q.bz;

    Cons f;
    if (dir == Axis::X) {
        f.rho = q.mx;
        f.mx = q.mx * u + m - q.bx * q.bx / four_pi;
        f.my = q.my * u - q.bx * q.by / four_pi;
        f.mz = q.mz * u - q.bx * q.bz / four_pi;
        f.rhoE = u * (rhok + 2.0 * m) - q.bx * vdb / four_pi;
        f.bx = 0.0;
        f.by = u * q.by - v * q.bx;
        f.bz = u * q.bz - w * q.bx;
    } else {
        f.rho = q.my;
        f.mx = q.mx * v - q.by * q.bx / four_pi;
        f.my = q.my * v + m - q.by * q.by / four_pi;
        f.mz = q.mz * v - q.by * q.bz / four_pi;
        f.rhoE = v * (rhok + 2.0 * m) - q.by * vdb / four_pi;
        f.bx = v * q.bx - u * q.by;
        f.by = 0.0;
        f.bz = v * q.bz - w * q.by;
    }
    return f;
}

// Pure pressure flux f^p: only the normal momentum row (p) and the energy
// row (h rho u_n). No magnetic contribution at all.
inline Cons flux_pressure(const Cons& q, double p, const Eos& eos, Axis dir) {
    const double h = eos.enthalpy(p, q.rho);
    Cons f;
    if (dir == Axis::X) {
        f.mx = p;
        f.rhoE = h * q.mx;
    } else {
        f.my = p;
        f.rhoE = h * q.my;
    }
    return f;
}

// Unsplit MHD flux. Used by the explicit density-based reference scheme and
// by the splitting consistency checks.
inline Cons flux_full(const Cons& q, const Eos& eos, Axis dir) {
    const Prim v = cons_to_prim(q, eos);
    const double m = q.magnetic_energy();
    const double vdb = v.v_dot_b();
    const double ptot = v.p + m;

    Cons f;
    if (dir == Axis::X) {
        f.rho = q.mx;
        f.mx = q.mx * v.u + ptot - q.bx * q.bx / four_pi;
        f.my = q.my * v.u - q.bx * q.by / four_pi;
        f.mz = q.mz * v.u - q.bx * q.bz / four_pi;
        f.rhoE = v.u * (q.rhoE + ptot) - q.bx * vdb / four_pi;
        f.bx = 0.0;
        f.by = v.u * q.by - v.v * q.bx;
        f.bz = v.u * q.bz - v.w * q.bx;
    } else {
        f.rho = q.my;
        f.mx = q.mx * v.v - q.by * q.bx / four_pi;
        f.my = q.my * v.v + ptot - q.by * q.by / four_pi;
        f.mz = q.mz * v.v - q.by * q.bz / four_pi;
        f.rhoE = v.v * (q.rhoE + ptot) - q.by * vdb / four_pi;
        f.bx = v.v * q.bx - v.u * q.by;
        f.by = 0.0;
        f.bz = v.v * q.bz - v.w * q.by;
    }
    return f;
}

// Gradient of the primitive vector, one Prim per derivative direction.
struct PrimGrad {
    Prim ddx;
    Prim ddy;
};

// Viscous flux tensor column in direction `dir`, evaluated from primitives
// and their gradients. Rows:
//   momentum:  sigma = mu (grad v + grad v^T - 2/3 (div v) I)
//   energy:    v^T sigma + lambda grad T + (eta / 4 pi) B^T (grad B - grad B^T)
//   induction: eta (grad B - grad B^T)
// with (grad B)_{kl} = dB_k/dx_l, so that div of the induction block equals
// -eta curl curl B (the double curl form the CT update discretizes).
inline Cons flux_viscous(const Prim& v, const PrimGrad& g,
                         const FluidParams& par, Axis dir) {
    const double div_v = g.ddx.u + g.ddy.v;
    const double sxx = par.mu * (2.0 * g.ddx.u - (2.0 / 3.0) * div_v);
    const double sxy = par.mu * (g.ddy.u + g.ddx.v);
    const double sxz = par.mu * g.ddx.w;
    const double syy = par.mu * (2.0 * g.ddy.v - (2.0 / 3.0) * div_v);
    const double syz = par.mu * g.ddy.w;

    // Antisymmetric part of grad B; only the (x,y) entry and the z-row
    // survive in 2D.
    const double axy = g.ddy.bx - g.ddx.by; // dBx/dy - dBy/dx
    const double eta4p = par.eta / four_pi;

    Cons f;
    if (dir == Axis::X) {
        f.mx = sxx;
        f.my = sxy;
        f.mz = sxz;
        f.rhoE = v.u * sxx + v.v * sxy + v.w * sxz + par.lambda_c * g.ddx.T +
                 eta4p * (-v.by * axy + v.bz * g.ddx.bz);
        f.bx = 0.0;
        f.by = par.eta * (-axy);
        f.bz = par.eta * g.ddx.bz;
    } else {
        f.mx = sxy;
        f.my = syy;
        f.mz = syz;
        f.rhoE = v.u * sxy + v.v * syy + v.w * syz + par.lambda_c * g.ddy.T +
                 eta4p * (v.bx * axy + v.bz * g.ddy.bz);
        f.bx = par.eta * axy;
        f.by = 0.0;
        f.bz = par.eta * g.ddy.bz;
    }
    return f;
}

// The eight eigenvalues of the full MHD system: u -/+ c_f, u -/+ c_a,
// u -/+ c_s, u, 0, with the magnetosonic speeds from the standard
// dispersion relation
//   c_{s,f}^2 = 1/2 ((b^2 + c^2) -/+ sqrt((b^2 + c^2)^2 - 4 b_n^2 c^2)),
// b^2 = B^2/(4 pi rho), b_n = B_n/sqrt(4 pi rho), c^2 from the EOS.
inline std::array<double, 8> eigen_full(const Cons& q, const Eos& eos,
                                        Axis dir) {
    const Prim v = cons_to_prim(q, eos);
    const double un = (dir == Axis::X) ? v.u : v.v;
    const double bn = (dir == Axis::X) ? q.bx : q.by;
    const double b2 = q.b_sq() / (four_pi * q.rho);
    const double bn2 = bn * bn / (four_pi * q.rho);
    const double c2 = eos.sound_speed_sq(v.p, q.rho);

    const double s = b2 + c2;
    const double disc = std::sqrt(std::max(s * s - 4.0 * bn2 * c2, 0.0));
    const double cf = std::sqrt(0.5 * (s + disc));
    const double cs = std::sqrt(std::max(0.5 * (s - disc), 0.0));
    const double ca = std::sqrt(bn2);

    return {un - cf, un + cf, un - ca, un + ca, un - cs, un + cs, un, 0.0};
}

// Eigenvalues of the pressure-free convective subsystem:
// u -/+ sqrt(B^2/(4 pi rho)), u -/+ B_n/sqrt(4 pi rho), 0, 0, u, u.
inline std::array<double, 8> eigen_convective(const Cons& q, Axis dir) {
    const double un = (dir == Axis::X) ? q.mx / q.rho : q.my / q.rho;
    const double bn = (dir == Axis::X) ? q.bx : q.by;
    const double b = std::sqrt(q.b_sq() / (four_pi * q.rho));
    const double ca = bn / std::sqrt(four_pi * q.rho);
    return {un - b, un + b, un - ca, un + ca, 0.0, 0.0, un, un};
}

// Extreme eigenvalues of the pressure subsystem,
// lambda^p_{1,8} = 1/2 (u -/+ sqrt(u^2 + 4 c^2)). Always subsonic:
// the pair straddles zero whenever c > 0.
inline std::array<double, 2> eigen_pressure(double u, double c2) {
    const double r = std::sqrt(u * u + 4.0 * c2);
    return {0.5 * (u - r), 0.5 * (u + r)};
}

inline double max_abs_eigen_convective(const Cons& q, Axis dir) {
    double s = 0.0;
    for (double lam : eigen_convective(q, dir)) s = std::max(s, std::abs(lam));
    return s;
}

inline double max_abs_eigen_full(const Cons& q, const Eos& eos, Axis dir) {
    double s = 0.0;
    for (double lam : eigen_full(q, eos, dir)) s = std::max(s, std::abs(lam));
    return s;
}

// Maximum signal speed of the convective subsystem at an interface,
// s_max = max(|lambda^c(Q-)|, |lambda^c(Q+)|).
inline double max_convective_speed(const Cons& ql, const Cons& qr, Axis dir) {
    return std::max(max_abs_eigen_convective(ql, dir),
                    max_abs_eigen_convective(qr, dir));
}

} // namespace simhd

#endif
