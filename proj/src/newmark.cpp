#include "edpmc/newmark.hpp"

#include "edpmc/parallel.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace edpmc {

namespace {

// Bilinear kinematic-hardening story spring. Trial evaluation leaves the
// committed state untouched; commit() adopts the last trial.
class BilinearSpring {
  public:
    BilinearSpring(double stiffness, double yield_force, double hardening_ratio)
        : k_(stiffness), fy_(yield_force), alpha_(hardening_ratio),
          hardening_(alpha_ > 0.0 ? alpha_ * k_ / (1.0 - alpha_) : 0.0) {}

    // Returns {force, tangent} at drift d given the committed state.
    std::pair<double, double> trial(double d) {
        const double xi = k_ * (d - plastic_) - back_force_;
        if (std::abs(xi) <= fy_ || !std::isfinite(fy_)) {
            trial_plastic_ = plastic_;
            trial_back_ = back_force_;
            return {k_ * (d - plastic_), k_};
        }
        const double sign = xi > 0.0 ? 1.0 : -1.0;
        const double dgamma = (std::abs(xi) - fy_) / (k_ + hardening_);
        trial_plastic_ = plastic_ + dgamma * sign;
        trial_back_ = back_force_ + hardening_ * dgamma * sign;
        return {k_ * (d - trial_plastic_), alpha_ * k_};
    }

    void commit() {
        plastic_ = trial_plastic_;
        back_force_ = trial_back_;
    }

    double elastic_stiffness() const { return k_; }

  private:
    double k_;
    double fy_;
    double alpha_;
    double hardening_;
    double plastic_ = 0.0;
    double back_force_ = 0.0;
    double trial_plastic_ = 0.0;
    double trial_back_ = 0.0;
};

struct RayleighCoefficients {
    double a0;
    double a1;
};

// Anchored to the nominal model's modes 1 and 2 at the sampled damping ratio.
RayleighCoefficients rayleigh_from_nominal(const StructureModel& model, double damping_ratio) {
    const VectorXd periods = modal_periods(model, MaterialSample::nominal(model.stories()));
    const double w1 = 2.0 * M_PI / periods[0];
    const double w2 = 2.0 * M_PI / periods[1];
    return {damping_ratio * 2.0 * w1 * w2 / (w1 + w2), damping_ratio * 2.0 / (w1 + w2)};
}

}  // namespace

EdpPair newmark_nonlinear(const StructureModel& model, const MaterialSample& material,
                          const GroundMotionRecord& record, const NewmarkOptions& options,
                          const StepObserver& observer) {
    const Index n = model.stories();
    const auto props = apply_material(model, material);

    const double t1_nominal = modal_periods(model, MaterialSample::nominal(n))[0];
    if (record.dt() > t1_nominal / 50.0)
        throw SimError("newmark_nonlinear: record dt " + std::to_string(record.dt()) +
                       " s exceeds T1/50 = " + std::to_string(t1_nominal / 50.0) + " s");

    std::vector<BilinearSpring> springs;
    springs.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        springs.emplace_back(props.stiffnesses[i], props.yield_forces[i],
                             material.post_yield_ratio);

    const auto rayleigh = rayleigh_from_nominal(model, material.damping_ratio);

    const double dt = record.dt();
    const double beta = 0.25, gamma = 0.5;
    const double c0 = 1.0 / (beta * dt * dt);
    const double c2 = 1.0 / (beta * dt);
    const double c3 = 1.0 / (2.0 * beta) - 1.0;

    VectorXd u = VectorXd::Zero(n);
    if (options.initial_displacement.size() > 0) {
        if (options.initial_displacement.size() != n)
            throw SimError("newmark_nonlinear: initial displacement size mismatch");
        u = options.initial_displacement;
    }
    VectorXd v = VectorXd::Zero(n);

    // Story drifts, forces and tangents at the current trial displacement.
    VectorXd force(n), tangent(n), drift(n);
    auto evaluate_stories = [&](const VectorXd& disp) {
        for (Index i = 0; i < n; ++i) {
            drift[i] = i == 0 ? disp[0] : disp[i] - disp[i - 1];
            auto [f, kt] = springs[static_cast<std::size_t>(i)].trial(drift[i]);
            force[i] = f;
            tangent[i] = kt;
        }
    };
    auto restoring_vector = [&]() {
        VectorXd r(n);
        for (Index i = 0; i < n; ++i)
            r[i] = force[i] - (i + 1 < n ? force[i + 1] : 0.0);
        return r;
    };
    auto assemble_tridiagonal = [&](const VectorXd& per_story, MatrixXd& out) {
        out.setZero();
        for (Index i = 0; i < n; ++i) {
            out(i, i) += per_story[i];
            if (i + 1 < n) {
                out(i, i) += per_story[i + 1];
                out(i, i + 1) -= per_story[i + 1];
                out(i + 1, i) -= per_story[i + 1];
            }
        }
    };

    MatrixXd k_tan(n, n), damping(n, n), jacobian(n, n);

    // Rayleigh damping follows the tangent stiffness, updated once per load
    // step from the committed state (constant within a step's Newton loop).
    VectorXd damping_tangent(n);
    auto refresh_damping = [&]() {
        assemble_tridiagonal(options.tangent_stiffness_damping ? damping_tangent
                                                               : props.stiffnesses,
                             damping);
        damping *= rayleigh.a1;
        damping += (rayleigh.a0 * props.masses).asDiagonal();
    };

    evaluate_stories(u);
    for (auto& s : springs) s.commit();
    damping_tangent = tangent;
    refresh_damping();
    VectorXd f_s = restoring_vector();

    // Initial acceleration from equilibrium at t = 0.
    VectorXd a = (-(props.masses.array() * record.accel()[0]).matrix() - damping * v - f_s)
                     .cwiseQuotient(props.masses);

    EdpPair result;
    const double collapse_limit = options.collapse_height_factor * model.total_height();
    auto story1_damper = [&](const VectorXd& vel) {
        const double c_el = rayleigh.a1 * (options.tangent_stiffness_damping
                                               ? damping_tangent[0]
                                               : props.stiffnesses[0]);
        return c_el * vel[0];
    };

    {
        const double base_shear0 = force[0] + story1_damper(v);
        result.max_top_disp = std::abs(u[n - 1]);
        result.max_base_shear = std::abs(base_shear0);
        if (observer)
            observer(SimStep{0, 0.0, record.accel()[0], u, v, a, force, base_shear0});
    }

    const double load_scale =
        std::max(props.masses.maxCoeff() * std::max(record.pga(), 1e-12),
                 props.stiffnesses.maxCoeff() * 1e-12);

    VectorXd u_next(n), v_next(n), a_next(n), residual(n);
    for (Index step = 1; step < record.samples(); ++step) {
        const double ag = record.accel()[step];
        const VectorXd p_ext = -(props.masses.array() * ag).matrix();

        u_next = u;  // predictor: constant displacement
        double ref_norm = -1.0;
        bool converged = false;
        for (int iter = 0; iter < options.max_newton_iter; ++iter) {
            evaluate_stories(u_next);
            a_next = c0 * (u_next - u) - c2 * v - c3 * a;
            v_next = v + dt * ((1.0 - gamma) * a + gamma * a_next);

            const VectorXd f_restoring = restoring_vector();
            residual = p_ext - f_restoring - damping * v_next -
                       props.masses.cwiseProduct(a_next);
            const double r_norm = residual.norm();
            // Reference combines the first residual with the acting force
            // scale so near-equilibrium steps are not held to an
            // unattainable absolute level.
            if (ref_norm < 0.0)
                ref_norm = std::max({r_norm, f_restoring.norm(), p_ext.norm(),
                                     load_scale * 1e-10});
            if (r_norm <= options.newton_rel_tol * ref_norm || r_norm < 1e-12 * load_scale) {
                converged = true;
                break;
            }

            // Full Newton on the tangent; after repeated yield-surface
            // chatter fall back to the elastic stiffness (modified Newton,
            // contractive for bilinear stories).
            assemble_tridiagonal(iter < 10 ? tangent : props.stiffnesses, k_tan);
            jacobian = k_tan + (gamma / (beta * dt)) * damping +
                       MatrixXd((c0 * props.masses).asDiagonal());
            u_next += jacobian.ldlt().solve(residual);
        }
        if (!converged)
            throw SimError("newmark_nonlinear: Newton failed to converge at step " +
                           std::to_string(step) + " (t = " +
                           std::to_string(static_cast<double>(step) * dt) + " s)");

        for (auto& s : springs) s.commit();
        u = u_next;
        v = v_next;
        a = a_next;
        damping_tangent = tangent;  // committed tangent drives next step's C
        refresh_damping();

        const double base_shear = force[0] + story1_damper(v);
        result.max_top_disp = std::max(result.max_top_disp, std::abs(u[n - 1]));
        result.max_base_shear = std::max(result.max_base_shear, std::abs(base_shear));

        if (observer)
            observer(SimStep{step, static_cast<double>(step) * dt, ag, u, v, a, force,
                             base_shear});

        if (result.max_top_disp > collapse_limit) {
            // Unstable growth: cap so downstream completion sees finite values.
            result.max_top_disp = collapse_limit;
            result.collapsed = true;
            break;
        }
    }
    return result;
}

std::pair<EdpMatrix, EdpMatrix> build_edp_matrices(
    const std::vector<GroundMotionRecord>& records, const FeatureTable& materials,
    const StructureModel& model, const NewmarkOptions& options, int threads) {
    const Index n = static_cast<Index>(records.size());
    const Index m = materials.rows();
    if (n < 2 || m < 2)
        throw DataError("build_edp_matrices: needs >= 2 records and >= 2 material samples");

    std::vector<MaterialSample> samples;
    samples.reserve(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j)
        samples.push_back(material_from_row(materials, j, model.stories()));

    MatrixXd top_disp(n, m), base_shear(n, m);
    parallel_for(n * m, threads, [&](Index cell) {
        const Index i = cell / m;
        const Index j = cell % m;
        try {
            const EdpPair edp = newmark_nonlinear(model, samples[static_cast<std::size_t>(j)],
                                                  records[static_cast<std::size_t>(i)], options);
            top_disp(i, j) = edp.max_top_disp;
            base_shear(i, j) = edp.max_base_shear;
        } catch (const std::exception& error) {
            throw SimError("simulation cell (record " + std::to_string(i + 1) +
                           ", material " + std::to_string(j + 1) + "): " + error.what());
        }
    });

    std::vector<std::string> row_ids;
    row_ids.reserve(records.size());
    for (const auto& r : records) row_ids.push_back(r.id());
    return {EdpMatrix(EdpKind::TopDisplacement, std::move(top_disp), row_ids,
                      materials.row_ids()),
            EdpMatrix(EdpKind::BaseShear, std::move(base_shear), std::move(row_ids),
                      materials.row_ids())};
}

VectorXd sdof_displacement_history(const Eigen::Ref<const VectorXd>& accel, double dt,
                                   double period, double damping) {
    if (!(period > 0.0)) throw DataError("sdof: period must be positive");
    if (period < 4.0 * dt)
        throw DataError("sdof: period " + std::to_string(period) +
                        " s is shorter than 4*dt, integration would be inaccurate");
    if (damping < 0.0 || damping > 0.5)
        throw DataError("sdof: damping must lie in [0, 0.5]");

    const double wn = 2.0 * M_PI / period;
    const double beta = 0.25, gamma = 0.5;
    const double c0 = 1.0 / (beta * dt * dt);
    const double c2 = 1.0 / (beta * dt);
    const double c3 = 1.0 / (2.0 * beta) - 1.0;
    const double two_zw = 2.0 * damping * wn;
    const double k_eff = wn * wn + (gamma / (beta * dt)) * two_zw + c0;

    const Index n = accel.size();
    VectorXd u_hist(n);
    double u = 0.0, v = 0.0, a = -accel[0];
    u_hist[0] = 0.0;
    for (Index i = 1; i < n; ++i) {
        const double p = -accel[i];
        const double rhs = p + c0 * u + c2 * v + c3 * a +
                           two_zw * ((gamma / (beta * dt)) * u + (gamma / beta - 1.0) * v +
                                     dt * (gamma / (2.0 * beta) - 1.0) * a);
        const double u_next = rhs / k_eff;
        const double a_next = c0 * (u_next - u) - c2 * v - c3 * a;
        v = v + dt * ((1.0 - gamma) * a + gamma * a_next);
        u = u_next;
        a = a_next;
        u_hist[i] = u;
    }
    return u_hist;
}

double sdof_peak_displacement(const Eigen::Ref<const VectorXd>& accel, double dt,
                              double period, double damping) {
    return sdof_displacement_history(accel, dt, period, damping).cwiseAbs().maxCoeff();
}

}  // namespace edpmc
