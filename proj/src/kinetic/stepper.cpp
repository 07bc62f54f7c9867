#include "vmfp/kinetic/stepper.hpp"

#include <cmath>
#include <string>

#include "vmfp/core/errors.hpp"
#include "vmfp/core/moments.hpp"
#include "vmfp/fieldsolve/fieldsolve.hpp"

namespace vmfp {

namespace {

double l2_distance(const DistributionField& a, const DistributionField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s * a.phase_volume());
}

double l2_norm(const DistributionField& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s * a.phase_volume());
}

}  // namespace

KineticStepper::KineticStepper(PlasmaParams params, DistributionField f, EMState em,
                               KineticOptions options)
    : params_(std::move(params)), f_(std::move(f)), em_(std::move(em)), options_(options) {
    params_.validate();
    options_.validate();
    require_same_grid(params_.grid(), f_.xgrid(), "KineticStepper");
    require_same_grid(params_.grid(), em_.E.grid(), "KineticStepper");
    if (f_.time() != em_.t) throw StateError("KineticStepper: f and EM time stamps differ");
}

void KineticStepper::strang_step(double dt) {
    if (!(dt > 0.0)) throw ParameterError("strang_step: dt must be positive");
    const double h = 0.5 * dt, t0 = f_.time();
    const double q = params_.q;
    report_ = StepReport{};
    report_.dt = dt;
    report_.kinetic_before = kinetic_energy(f_);
    report_.field_before = field_energy(em_, params_);

    const VectorField j0 = current(f_);
    apply_larmor(f_, h, params_, options_);
    apply_free_transport(f_, h, params_.eps, options_);

    EMState mid = maxwell_step(em_, q * current(f_), params_, h, options_.maxwell);
    mid = gauss_project(mid, charge_density(density(f_), params_), params_);

    apply_acceleration(f_, mid, h, params_, options_);
    const double ke = kinetic_energy(f_);
    apply_collision(f_, dt, params_, options_);
    report_.collision_energy = kinetic_energy(f_) - ke;
    apply_acceleration(f_, mid, h, params_, options_);

    apply_free_transport(f_, h, params_.eps, options_);
    apply_larmor(f_, h, params_, options_);

    VectorField J = current(f_);
    J += j0;
    J *= 0.5 * q;
    em_ = maxwell_step(em_, J, params_, dt, options_.maxwell);
    em_ = gauss_project(em_, charge_density(density(f_), params_), params_);

    f_.set_time(t0 + dt);
    em_.t = t0 + dt;
    report_.kinetic_after = kinetic_energy(f_);
    report_.field_after = field_energy(em_, params_);
}

void KineticStepper::picard_cycle(double dt, double delta) {
    if (!(dt > 0.0)) throw ParameterError("picard_cycle: dt must be positive");
    if (!(delta > 0.0)) throw ParameterError("picard_cycle: delta must be positive");
    const double h = 0.5 * dt, t0 = f_.time();
    const double q = params_.q;
    report_ = StepReport{};
    report_.dt = dt;
    report_.kinetic_before = kinetic_energy(f_);
    report_.field_before = field_energy(em_, params_);

    const DistributionField fn = f_;
    const EMState emn = em_;
    double scale = l2_norm(fn) + emn.E.l2_norm() + emn.B.l2_norm();
    if (scale == 0.0) scale = 1.0;

    DistributionField prev = fn;
    EMState em_l = emn;
    for (int it = 1; it <= options_.picard_max_iter; ++it) {
        // frozen mollified fields at the midpoint of the step
        EMState frozen(emn.E.grid(), t0 + h);
        frozen.E = mollify(0.5 * (emn.E + em_l.E), delta);
        frozen.B = mollify(0.5 * (emn.B + em_l.B), delta);

        // the current that the acceleration substeps work against: trapezoidal
        // average of the particle flux across each A substep
        DistributionField fw = fn;
        apply_larmor(fw, h, params_, options_);
        apply_free_transport(fw, h, params_.eps, options_);
        VectorField Jw = current(fw);
        apply_acceleration(fw, frozen, h, params_, options_);
        Jw += current(fw);
        const double ke = kinetic_energy(fw);
        apply_collision(fw, dt, params_, options_);
        report_.collision_energy = kinetic_energy(fw) - ke;
        Jw += current(fw);
        apply_acceleration(fw, frozen, h, params_, options_);
        Jw += current(fw);
        apply_free_transport(fw, h, params_.eps, options_);
        apply_larmor(fw, h, params_, options_);
        Jw *= 0.25 * q;

        EMState next = maxwell_step(emn, mollify(Jw, delta), params_, dt, options_.maxwell);
        if (options_.picard_project)
            next = gauss_project(next, charge_density(density(fw), params_), params_);

        const double r = (l2_distance(fw, prev) + (next.E - em_l.E).l2_norm() +
                          (next.B - em_l.B).l2_norm()) / scale;
        report_.residuals.push_back(r);
        prev = std::move(fw);
        em_l = std::move(next);
        if (r < options_.picard_tol) {
            f_ = std::move(prev);
            em_ = std::move(em_l);
            f_.set_time(t0 + dt);
            em_.t = t0 + dt;
            report_.kinetic_after = kinetic_energy(f_);
            report_.field_after = field_energy(em_, params_);
            return;
        }
    }
    throw IterationError("picard_cycle: no convergence after " +
                             std::to_string(options_.picard_max_iter) + " iterations",
                         report_.residuals);
}

KineticStepper strang_step(KineticStepper stepper, double dt) {
    stepper.strang_step(dt);
    return stepper;
}

KineticStepper picard_cycle(KineticStepper stepper, double dt, double delta) {
    stepper.picard_cycle(dt, delta);
    return stepper;
}

}  // namespace vmfp
