#ifndef SIMHD_DRIVER_HPP
#define SIMHD_DRIVER_HPP

#include "simhd/ct.hpp"
#include "simhd/explicit_update.hpp"
#include "simhd/grid.hpp"
#include "simhd/pressure.hpp"
#include "simhd/state.hpp"

#include <array>
#include <functional>
#include <limits>

namespace simhd {

// Scheme-level options shared by the 1D and 2D drivers.
struct SolverOptions {
    Eos eos;
    FluidParams params;
    int order = 2;
    bool semi_implicit = true; // false: explicit density-based reference scheme
    double cfl = 0.9;
    PressureOptions pressure;

    FluxKind flux_kind() const {
        return semi_implicit ? FluxKind::Convective : FluxKind::Full;
    }
};

using Totals = std::array<double, 8>;

// Kahan-compensated accumulation; the audit sums must not drown the
// conservation drift they are supposed to measure.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

inline Totals conservation_totals(const Field1D<Cons>& q, const Mesh1D& mesh) {
    std::array<KahanSum, 8> acc;
    for (int i = 0; i < mesh.nx(); ++i)
        for (int k = 0; k < n_comp; ++k) acc[k].add(mesh.dx(i) * q(i)[k]);
    Totals t;
    for (int k = 0; k < n_comp; ++k) t[k] = acc[k].value();
    return t;
}

inline Totals conservation_totals(const Field2D<Cons>& q, const Mesh2D& mesh) {
    std::array<KahanSum, 8> acc;
    const double da = mesh.cell_area();
    for (int j = 0; j < mesh.ny(); ++j)
        for (int i = 0; i < mesh.nx(); ++i)
            for (int k = 0; k < n_comp; ++k) acc[k].add(da * q(i, j)[k]);
    Totals t;
    for (int k = 0; k < n_comp; ++k) t[k] = acc[k].value();
    return t;
}

// Tracks conserved totals against the initial state, crediting the
// boundary outflux accumulated by the steps. Drift is normalized per
// component by max(initial volume-weighted L1 norm, 1).
struct ConservationAudit {
    Totals initial{};
    Totals scale{};
    std::array<KahanSum, 8> outflux{};
    bool started = false;

    template <class Field, class Mesh>
    void start(const Field& q, const Mesh& mesh) {
        initial = conservation_totals(q, mesh);
        Totals l1 = l1_norms(q, mesh);
        for (int k = 0; k < n_comp; ++k) scale[k] = std::max(l1[k], 1.0);
        started = true;
    }

    Totals drift(const Totals& current) const {
        Totals d{};
        for (int k = 0; k < n_comp; ++k)
            d[k] = std::abs(current[k] + outflux[k].value() - initial[k]) / scale[k];
        return d;
    }

    double max_drift(const Totals& current) const {
        const Totals d = drift(current);
        double m = 0.0;
        for (double v : d) m = std::max(m, v);
        return m;
    }

private:
    static Totals l1_norms(const Field1D<Cons>& q, const Mesh1D& mesh) {
        Totals t{};
        for (int i = 0; i < mesh.nx(); ++i)
            for (int k = 0; k < n_comp; ++k) t[k] += mesh.dx(i) * std::abs(q(i)[k]);
        return t;
    }
    static Totals l1_norms(const Field2D<Cons>& q, const Mesh2D& mesh) {
        Totals t{};
        for (int j = 0; j < mesh.ny(); ++j)
            for (int i = 0; i < mesh.nx(); ++i)
                for (int k = 0; k < n_comp; ++k)
                    t[k] += mesh.cell_area() * std::abs(q(i, j)[k]);
        return t;
    }
};

// Per-step diagnostics.
struct StepReport {
    double t = 0.0;
    double dt = 0.0;
    Totals totals{};
    double max_div_b = 0.0;
    double max_abs_b = 0.0;
    std::vector<double> picard_residuals;
    int cg_iterations = 0;     // total over the pressure stage
    int cg_iterations_max = 0; // largest single CG solve
    double max_drift = 0.0;
};

// dt = CFL / ( max|lam_x|/dx + max|lam_y|/dy
//              + 2 (4 mu/(3 rho) + lambda/(c_v rho) + eta) (1/dx^2 + 1/dy^2) ),
// with the eigenvalues of the convective subsystem for the semi-implicit
// scheme and of the full system for the explicit reference scheme, and the
// global maximum of the dissipative factor. Returns +inf for a fully
// degenerate (zero-speed, inviscid) state; callers clamp to the remaining
// simulation time.
inline double compute_dt_1d(const Field1D<Cons>& q, const Mesh1D& mesh,
                            const SolverOptions& opt) {
    double denom = 0.0;
    double visc_fac = 0.0;
    for (int i = 0; i < mesh.nx(); ++i) {
        const double lam = opt.semi_implicit
                               ? max_abs_eigen_convective(q(i), Axis::X)
                               : max_abs_eigen_full(q(i), opt.eos, Axis::X);
        if (!std::isfinite(lam))
            throw AdmissibilityError("non-finite signal speed", lam, i);
        denom = std::max(denom, lam / mesh.dx(i));
        visc_fac = std::max(visc_fac,
                            4.0 / 3.0 * opt.params.mu / q(i).rho +
                                opt.params.lambda_c / (opt.eos.c_v() * q(i).rho) +
                                opt.params.eta);
    }
    double dsum = denom;
    if (visc_fac > 0.0) {
        double rdx2_max = 0.0;
        for (int i = 0; i < mesh.nx(); ++i)
            rdx2_max = std::max(rdx2_max, 1.0 / (mesh.dx(i) * mesh.dx(i)));
        dsum += 2.0 * visc_fac * rdx2_max;
    }
    if (dsum <= 0.0) return std::numeric_limits<double>::infinity();
    return opt.cfl / dsum;
}

inline double compute_dt_2d(const Field2D<Cons>& q, const Mesh2D& mesh,
                            const SolverOptions& opt) {
    double lx = 0.0, ly = 0.0, visc_fac = 0.0;
    for (int j = 0; j < mesh.ny(); ++j) {
        for (int i = 0; i < mesh.nx(); ++i) {
            const Cons& c = q(i, j);
            const double lamx = opt.semi_implicit
                                    ? max_abs_eigen_convective(c, Axis::X)
                                    : max_abs_eigen_full(c, opt.eos, Axis::X);
            const double lamy = opt.semi_implicit
                                    ? max_abs_eigen_convective(c, Axis::Y)
                                    : max_abs_eigen_full(c, opt.eos, Axis::Y);
            if (!std::isfinite(lamx) || !std::isfinite(lamy))
                throw AdmissibilityError("non-finite signal speed", lamx, i, j);
            lx = std::max(lx, lamx);
            ly = std::max(ly, lamy);
            visc_fac = std::max(visc_fac,
                                4.0 / 3.0 * opt.params.mu / c.rho +
                                    opt.params.lambda_c / (opt.eos.c_v() * c.rho) +
                                    opt.params.eta);
        }
    }
    const double dsum = lx / mesh.dx() + ly / mesh.dy() +
                        2.0 * visc_fac * (1.0 / (mesh.dx() * mesh.dx()) +
                                          1.0 / (mesh.dy() * mesh.dy()));
    if (dsum <= 0.0) return std::numeric_limits<double>::infinity();
    return opt.cfl / dsum;
}

// ---------------------------------------------------------------------------
// 1D driver
// ---------------------------------------------------------------------------

struct Sim1D {
    Mesh1D mesh;
    Bc bc;
    Field1D<Cons> q;
    double t = 0.0;
    std::vector<double> p; // last solved pressure (diagnostics)
};

// One time step: halo exchange, explicit update of the convective
// subsystem, then (semi-implicit only) the pressure stage. Updates the
// audit with the boundary fluxes actually applied.
inline StepReport advance_1d(Sim1D& sim, double dt, const SolverOptions& opt,
                             ConservationAudit* audit = nullptr) {
    apply_bc(sim.q, sim.bc);

    Cons bflux_lo, bflux_hi;
    Field1D<Cons> qstar = explicit_update_1d(sim.q, dt, sim.mesh, opt.eos,
                                             opt.order, opt.flux_kind(),
                                             &bflux_lo, &bflux_hi);

    StepReport rep;
    rep.dt = dt;
    PressureStats pstats;
    if (opt.semi_implicit) {
        apply_bc(qstar, sim.bc);
        PressureBoundary1D pb;
        Field1D<Cons> qnew =
            run_pressure_stage_1d(sim.q, qstar, dt, sim.mesh, opt.eos, sim.bc,
                                  opt.pressure, &sim.p, &pstats, &pb);
        sim.q = qnew;
        if (audit && sim.bc == Bc::Transmissive) {
            audit->outflux[4].add(dt * (pb.energy_hi - pb.energy_lo));
            audit->outflux[1].add(dt * (pb.mom_hi - pb.mom_lo));
        }
    } else {
        sim.q = qstar;
    }
    sim.t += dt;

    if (audit && sim.bc == Bc::Transmissive)
        for (int k = 0; k < n_comp; ++k)
            audit->outflux[k].add(dt * (bflux_hi[k] - bflux_lo[k]));

    rep.t = sim.t;
    rep.totals = conservation_totals(sim.q, sim.mesh);
    rep.picard_residuals = pstats.newton_residuals;
    rep.cg_iterations = pstats.cg_iterations_total;
    rep.cg_iterations_max = pstats.cg_iterations_max;
    if (audit && audit->started) rep.max_drift = audit->max_drift(rep.totals);
    return rep;
}

// ---------------------------------------------------------------------------
// 2D driver
// ---------------------------------------------------------------------------

struct Sim2D {
    Mesh2D mesh;
    Bc bc_x, bc_y;
    Field2D<Cons> q;
    FaceB fb;
    double t = 0.0;
    std::vector<double> p;
};

// Full 2D step: (1) halo exchange; (2) explicit convective + viscous
// update -> Q*; (3) corner EMF and staggered induction update, cell B
// overwritten by the face averages; (4) pressure stage (semi-implicit
// only); (5) audit.
inline StepReport advance_2d(Sim2D& sim, double dt, const SolverOptions& opt,
                             ConservationAudit* audit = nullptr) {
    const FluxKind kind = opt.flux_kind();
    apply_bc(sim.q, sim.bc_x, sim.bc_y);
    sim.fb.apply_bc(sim.bc_x, sim.bc_y);

    // Corner primitives / gradients at time n feed both the viscous fluxes
    // and the corner EMF.
    Field2D<Prim> prim(sim.mesh.nx(), sim.mesh.ny(), Loc::Cell, sim.q.halo());
    for (int j = -sim.q.halo(); j < sim.mesh.ny() + sim.q.halo(); ++j)
        for (int i = -sim.q.halo(); i < sim.mesh.nx() + sim.q.halo(); ++i)
            prim(i, j) = cons_to_prim_floored(sim.q(i, j), opt.eos,
                                              opt.pressure.p_floor);
    Field2D<Prim> cprim = corner_values(prim);
    Field2D<PrimGrad> cgrad = corner_gradients(prim, sim.mesh);

    BoundaryFluxSums bsums;
    Field2D<Cons> qstar =
        explicit_update_2d(sim.q, dt, sim.mesh, opt.eos, opt.params, opt.order,
                           &cprim, &cgrad, kind, &bsums);

    // Constrained transport: staggered induction update from the corner
    // electric field, then overwrite the auxiliary cell-centered B. The
    // update works on a copy so a failing pressure solve leaves the
    // simulation at the last completed step.
    CornerSpeeds cs = corner_speeds(sim.q, opt.eos, kind);
    Field2D<double> ez = corner_emf(sim.fb, cprim, cgrad, cs, opt.params.eta);
    FaceB fb_new = sim.fb;
    update_face_b(fb_new, ez, dt, sim.mesh);
    fb_new.apply_bc(sim.bc_x, sim.bc_y);
    face_to_center_b(fb_new, qstar);

    StepReport rep;
    rep.dt = dt;
    PressureStats pstats;
    if (opt.semi_implicit) {
        apply_bc(qstar, sim.bc_x, sim.bc_y);
        PressureBoundary2D pb;
        Field2D<Cons> qnew =
            run_pressure_stage_2d(sim.q, qstar, dt, sim.mesh, opt.eos, sim.bc_x,
                                  sim.bc_y, opt.pressure, &sim.p, &pstats, &pb);
        sim.q = qnew;
        sim.fb = std::move(fb_new);
        if (audit) {
            if (sim.bc_x == Bc::Transmissive) {
                audit->outflux[4].add(dt * sim.mesh.dy() *
                                      (pb.energy_x_hi - pb.energy_x_lo));
                audit->outflux[1].add(dt * sim.mesh.dy() * (pb.momx_hi - pb.momx_lo));
            }
            if (sim.bc_y == Bc::Transmissive) {
                audit->outflux[4].add(dt * sim.mesh.dx() *
                                      (pb.energy_y_hi - pb.energy_y_lo));
                audit->outflux[2].add(dt * sim.mesh.dx() * (pb.momy_hi - pb.momy_lo));
            }
        }
    } else {
        sim.q = qstar;
        sim.fb = std::move(fb_new);
    }
    sim.t += dt;

    if (audit) {
        if (sim.bc_x == Bc::Transmissive)
            for (int k = 0; k < n_comp; ++k)
                audit->outflux[k].add(dt * sim.mesh.dy() *
                                      (bsums.x_hi[k] - bsums.x_lo[k]));
        if (sim.bc_y == Bc::Transmissive)
            for (int k = 0; k < n_comp; ++k)
                audit->outflux[k].add(dt * sim.mesh.dx() *
                                      (bsums.y_hi[k] - bsums.y_lo[k]));
    }

    rep.t = sim.t;
    rep.totals = conservation_totals(sim.q, sim.mesh);
    rep.max_div_b = max_abs_div_b(sim.fb, sim.mesh);
    rep.max_abs_b = max_abs_face_b(sim.fb);
    rep.picard_residuals = pstats.newton_residuals;
    rep.cg_iterations = pstats.cg_iterations_total;
    rep.cg_iterations_max = pstats.cg_iterations_max;
    if (audit && audit->started) rep.max_drift = audit->max_drift(rep.totals);
    return rep;
}

// ---------------------------------------------------------------------------
// run loop
// ---------------------------------------------------------------------------

struct RunControl {
    double t_final = 0.0;
    double dt_fixed = 0.0;        // > 0: bypass the CFL formula
    double output_interval = 0.0; // > 0: snapshot cadence (simulation time)
    long long max_steps = 1'000'000'000;
};

struct RunSummary {
    long long steps = 0;
    double final_time = 0.0;
    double max_div_b = 0.0; // maximum over the whole run
    double max_drift = 0.0;
    int cg_iterations_max = 0; // largest single CG solve over the run
};

namespace detail {
// Clamp dt so output times and the final time are hit exactly.
inline double clamp_dt(double dt, double t, const RunControl& rc) {
    double target = rc.t_final;
    if (rc.output_interval > 0.0) {
        const double k = std::floor(t / rc.output_interval + 1e-12) + 1.0;
        target = std::min(target, k * rc.output_interval);
    }
    return std::min(dt, target - t);
}
} // namespace detail

// Integrate to t_final. The callbacks receive the simulation after every
// snapshot point (including t = 0 and t_final) and the report after every
// step; either may be empty.
template <class Sim, class DtFn, class StepFn>
RunSummary run_loop(Sim& sim, const RunControl& rc, const DtFn& next_dt,
                    const StepFn& do_step,
                    const std::function<void(const Sim&)>& on_snapshot,
                    const std::function<void(const StepReport&)>& on_report) {
    RunSummary sum;
    if (on_snapshot) on_snapshot(sim);
    double next_output = rc.output_interval > 0.0
                             ? rc.output_interval
                             : std::numeric_limits<double>::infinity();
    const double t_eps = 1e-12 * std::max(rc.t_final, 1.0);
    double last_snapshot_t = sim.t;
    while (sim.t < rc.t_final - t_eps && sum.steps < rc.max_steps) {
        double dt = rc.dt_fixed > 0.0 ? rc.dt_fixed : next_dt(sim);
        dt = detail::clamp_dt(dt, sim.t, rc);
        if (!(dt > 0.0)) break;
        StepReport rep = do_step(sim, dt);
        ++sum.steps;
        sum.final_time = sim.t;
        sum.max_div_b = std::max(sum.max_div_b, rep.max_div_b);
        sum.max_drift = std::max(sum.max_drift, rep.max_drift);
        sum.cg_iterations_max = std::max(sum.cg_iterations_max, rep.cg_iterations_max);
        if (on_report) on_report(rep);
        if (sim.t >= next_output - t_eps) {
            if (on_snapshot) on_snapshot(sim);
            last_snapshot_t = sim.t;
            next_output += rc.output_interval;
        }
    }
    if (on_snapshot && sim.t > last_snapshot_t + t_eps) on_snapshot(sim);
    sum.final_time = sim.t;
    return sum;
}

inline RunSummary run_1d(Sim1D& sim, const SolverOptions& opt, const RunControl& rc,
                         ConservationAudit* audit = nullptr,
                         const std::function<void(const Sim1D&)>& on_snapshot = {},
                         const std::function<void(const StepReport&)>& on_report = {}) {
    if (audit && !audit->started) audit->start(sim.q, sim.mesh);
    return run_loop(
        sim, rc,
        [&](const Sim1D& s) { return compute_dt_1d(s.q, s.mesh, opt); },
        [&](Sim1D& s, double dt) { return advance_1d(s, dt, opt, audit); },
        on_snapshot, on_report);
}

inline RunSummary run_2d(Sim2D& sim, const SolverOptions& opt, const RunControl& rc,
                         ConservationAudit* audit = nullptr,
                         const std::function<void(const Sim2D&)>& on_snapshot = {},
                         const std::function<void(const StepReport&)>& on_report = {}) {
    if (audit && !audit->started) audit->start(sim.q, sim.mesh);
    return run_loop(
        sim, rc,
        [&](const Sim2D& s) { return compute_dt_2d(s.q, s.mesh, opt); },
        [&](Sim2D& s, double dt) { return advance_2d(s, dt, opt, audit); },
        on_snapshot, on_report);
}

} // namespace simhd

#endif
