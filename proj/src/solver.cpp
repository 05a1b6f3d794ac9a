#include "speckletv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

namespace speckletv {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_common(const SolverConfig& cfg, const Image& f) {
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("solve: rho must be positive");
    if (!(cfg.delta0 > 0.0)) throw std::invalid_argument("solve: delta0 must be positive");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");
    if (cfg.newton_iters < 1) throw std::invalid_argument("solve: newton_iters must be >= 1");
    if (!(cfg.tau_min > 0.0) || !(cfg.tau_min < cfg.tau_max))
        throw std::invalid_argument("solve: need 0 < tau_min < tau_max");
    if (!(cfg.tau0 >= cfg.tau_min && cfg.tau0 <= cfg.tau_max))
        throw std::invalid_argument("solve: tau0 outside [tau_min, tau_max]");
    if (cfg.kind == SolverKind::LdpLadm) {
        if (cfg.window < 1 || cfg.window % 2 == 0)
            throw std::invalid_argument("solve: window must be odd and positive");
        if (cfg.window > std::min(f.rows, f.cols))
            throw std::invalid_argument("solve: window exceeds image");
    }
}

double default_lambda(double M) { return M > 5.0 ? 3.0 / M : 2.0 / M; }

bool project_enabled(const SolverConfig& cfg) {
    if (cfg.project == ProjectMode::On) return true;
    if (cfg.project == ProjectMode::Off) return false;
    // default on for both models: the projected update is what keeps the
    // intensity-scale iteration away from the log/ratio singularities
    return true;
}

std::optional<DiscrepancyTarget> make_target(const SolverConfig& cfg) {
    try {
        switch (cfg.cbar_source) {
            case CbarSource::Auto: return DiscrepancyTarget::automatic(cfg.M);
            case CbarSource::Paper: return DiscrepancyTarget::from_series(cfg.M, DiscrepancySeries::Paper);
            case CbarSource::LowM: return DiscrepancyTarget::from_series(cfg.M, DiscrepancySeries::LowM);
            case CbarSource::Digamma:
                return DiscrepancyTarget::from_series(cfg.M, DiscrepancySeries::Digamma);
            case CbarSource::Custom: return DiscrepancyTarget::custom(cfg.cbar_custom);
        }
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

Image exp_image(const Image& u) {
    Image e(u.rows, u.cols);
    for (size_t p = 0; p < u.v.size(); ++p) e.v[p] = std::exp(u.v[p]);
    return e;
}

Image clamp_image(const Image& u, double lo, double hi) {
    Image e(u.rows, u.cols);
    for (size_t p = 0; p < u.v.size(); ++p) e.v[p] = std::clamp(u.v[p], lo, hi);
    return e;
}

void check_iterate(const Image& u, int k, double limit) {
    for (double x : u.v) {
        if (!std::isfinite(x))
            throw SolverError("solve: non-finite iterate at iteration " + std::to_string(k));
        if (x > limit || x < -limit)
            throw SolverError("solve: iterate magnitude out of range at iteration " +
                              std::to_string(k));
    }
}

// mean of (u + f exp(-u) - log f) minus the target, at the state itself
double state_discrepancy(const Image& u, const Image& f, const DiscrepancyTarget& tgt) {
    double s = 0.0;
    for (size_t p = 0; p < u.v.size(); ++p)
        s += u.v[p] + f.v[p] * std::exp(-u.v[p]) - std::log(f.v[p]);
    return s / static_cast<double>(u.v.size()) - tgt.c_bar;
}

// mean residual with the per-pixel weight field, for the trace column
double field_discrepancy(const StepCoefficients& sc, const Image& f, const Image& tau_field,
                         const DiscrepancyTarget& tgt) {
    double s = 0.0;
    for (size_t p = 0; p < f.v.size(); ++p) {
        const double x = sc.a1.v[p] * tau_field.v[p] + sc.a2.v[p];
        s += x + f.v[p] * std::exp(-std::clamp(x, -700.0, 700.0)) - std::log(f.v[p]);
    }
    return s / static_cast<double>(f.v.size()) - tgt.c_bar;
}

struct CoreParams {
    double tau0;
    double rho;
    double delta0;
    bool tau_updates;
    bool field_mode;
    bool variable_step;
    std::string normalization;
};

SolveResult run_core_exp(const Image& f, const SolverConfig& cfg, const CoreParams& par,
                         const Image* reference) {
    const auto t_start = std::chrono::steady_clock::now();
    FidelityModel model(FidelityKind::Exponential, f);
    const FeasibleBox box = default_box(model);
    const double lip = hessian_lipschitz_bound(model, box);
    const bool project = project_enabled(cfg);

    const std::optional<DiscrepancyTarget> target = make_target(cfg);
    const bool has_target = target.has_value();
    if (par.tau_updates && !has_target)
        throw std::invalid_argument("solve: no valid discrepancy level for this M / cbar choice");

    SolveResult res;
    res.iterate = Image(f.rows, f.cols);
    for (size_t p = 0; p < f.v.size(); ++p) res.iterate.v[p] = std::log(f.v[p]);
    Image& u = res.iterate;
    res.z = gradient(u);
    res.b = GradField(f.rows, f.cols);

    double tau = par.tau0;
    Image tau_field;
    if (par.field_mode) tau_field = Image(f.rows, f.cols, par.tau0);

    auto tau_repr_mean = [&] {
        if (!par.field_mode) return tau;
        double s = 0.0;
        for (double x : tau_field.v) s += x;
        return s / static_cast<double>(tau_field.v.size());
    };
    auto strict_cap = [&](double t) { return 1.0 / (t * lip + 8.0 * cfg.rho + cfg.strict_eps0); };
    // the weight and the step come in matching flavors: scalars for the
    // global solver, fields for the local one (the schedule divides by the
    // local weight, which keeps delta*tau level across the image)
    double delta = par.delta0;
    Image delta_field;
    if (par.field_mode) delta_field = Image(f.rows, f.cols, par.delta0);
    if (cfg.strict_step) {
        if (par.field_mode) {
            for (size_t p = 0; p < delta_field.v.size(); ++p)
                delta_field.v[p] = std::min(delta_field.v[p], strict_cap(tau_field.v[p]));
        } else {
            delta = std::min(delta, strict_cap(tau));
        }
    }
    auto delta_repr = [&] {
        if (!par.field_mode) return delta;
        double s = 0.0;
        for (double x : delta_field.v) s += x;
        return s / static_cast<double>(delta_field.v.size());
    };

    RunTrace& trace = res.trace;
    trace.normalization = par.normalization;
    trace.has_psnr = reference != nullptr;

    Image expu_prev = exp_image(u);
    const TauUpdateOptions opts{cfg.newton_iters, cfg.tau_min, cfg.tau_max, 1e-14};

    bool converged = false;
    int iterations = 0;
    for (int k = 0; k < cfg.max_iter; ++k) {
        StepCoefficients sc = par.field_mode
                                  ? step_coefficients(u, f, res.z, res.b, par.rho, delta_field)
                                  : step_coefficients(u, f, res.z, res.b, par.rho, delta);

        bool accepted_root = false;
        bool tau_changed = false;
        double trace_k = kNan;
        if (par.tau_updates && cfg.newton_every > 0 && k % cfg.newton_every == 0) {
            if (!par.field_mode) {
                TauUpdateResult up =
                    newton_update_tau(sc, f, tau, *target, opts, &trace.exp_clamps);
                trace.tau_events.push_back({k, tau, up.tau, up.k_before, up.k_after, up.status});
                tau_changed = up.tau != tau;
                tau = up.tau;
                accepted_root =
                    up.status == TauUpdateStatus::Newton || up.status == TauUpdateStatus::Bisection;
                trace_k = up.k_after;
            } else {
                Image before = tau_field;
                tau_field = local_newton_update(sc, f, std::move(tau_field), *target,
                                               cfg.newton_iters, cfg.window, cfg.tau_min,
                                               cfg.tau_max, cfg.padding, &trace.exp_clamps);
                tau_field = smooth_tau(tau_field, cfg.window, cfg.padding);
                // smoothing an untouched field only jitters the last bit, and
                // that must not count as a weight change (it would retrigger
                // the step rescale below)
                for (size_t p = 0; p < tau_field.v.size(); ++p) {
                    const double d = std::fabs(tau_field.v[p] - before.v[p]);
                    if (d > 1e-12 * std::max(1.0, std::fabs(before.v[p]))) {
                        tau_changed = true;
                        break;
                    }
                }
                accepted_root = tau_changed;
            }
        }
        if (std::isnan(trace_k) && has_target)
            trace_k = par.field_mode ? field_discrepancy(sc, f, tau_field, *target)
                                     : global_discrepancy(sc, f, tau, *target, &trace.exp_clamps);

        // strict mode promises the applied pairing of step and weight obeys
        // the cap, so a weight jump re-caps the step for this very sweep and
        // rebuilds the candidate map with it (the root gets re-polished at
        // the next refresh anyway)
        if (cfg.strict_step && tau_changed) {
            bool recapped = false;
            if (par.field_mode) {
                for (size_t p = 0; p < delta_field.v.size(); ++p) {
                    const double cap = strict_cap(tau_field.v[p]);
                    if (delta_field.v[p] > cap) {
                        delta_field.v[p] = cap;
                        recapped = true;
                    }
                }
            } else {
                const double cap = strict_cap(tau);
                if (delta > cap) {
                    delta = cap;
                    recapped = true;
                }
            }
            if (recapped)
                sc = par.field_mode
                         ? step_coefficients(u, f, res.z, res.b, par.rho, delta_field)
                         : step_coefficients(u, f, res.z, res.b, par.rho, delta);
        }

        Image u_next = par.field_mode ? apply_tau(sc, tau_field) : apply_tau(sc, tau);
        if (project) u_next = project_box(u_next, box);
        // log-scale iterate: anything near 700 would overflow exp()
        check_iterate(u_next, k, 700.0);
        if (project && accepted_root && has_target && !par.field_mode)
            if (state_discrepancy(u_next, f, *target) > 1e-8) ++trace.projection_gate_breaks;

        GradField gu_next = gradient(u_next);
        GradField zarg(f.rows, f.cols);
        const double inv_rho = 1.0 / par.rho;
        for (size_t p = 0; p < zarg.size(); ++p) {
            zarg.h[p] = gu_next.h[p] - res.b.h[p] * inv_rho;
            zarg.v[p] = gu_next.v[p] - res.b.v[p] * inv_rho;
        }
        GradField z_next = shrink(zarg, inv_rho);
        GradField b_next(f.rows, f.cols);
        for (size_t p = 0; p < b_next.size(); ++p) {
            b_next.h[p] = res.b.h[p] + par.rho * (z_next.h[p] - gu_next.h[p]);
            b_next.v[p] = res.b.v[p] + par.rho * (z_next.v[p] - gu_next.v[p]);
        }

        Image expu_next = exp_image(u_next);
        double nprev = norm2(expu_prev);
        if (nprev == 0.0) throw SolverError("solve: zero intensity norm");
        double diff = 0.0;
        for (size_t p = 0; p < expu_next.v.size(); ++p) {
            const double d = expu_next.v[p] - expu_prev.v[p];
            diff += d * d;
        }
        const double rel = std::sqrt(diff) / nprev;

        double row_psnr = kNan;
        if (reference) {
            auto ps = psnr(clamp_image(expu_next, 0.0, 255.0), *reference);
            row_psnr = ps ? *ps : std::numeric_limits<double>::infinity();
        }

        trace.rows.push_back({k, tau_repr_mean(), rel, row_psnr, trace_k, delta_repr()});
        if (par.field_mode) {
            for (size_t p = 0; p < delta_field.v.size(); ++p)
                if (delta_field.v[p] >
                    1.0 / (tau_field.v[p] * lip + 8.0 * cfg.rho) * (1.0 + 1e-12)) {
                    trace.step_within_bound = false;
                    break;
                }
        } else if (delta > 1.0 / (tau * lip + 8.0 * cfg.rho) * (1.0 + 1e-12)) {
            trace.step_within_bound = false;
        }

        u = std::move(u_next);
        res.z = std::move(z_next);
        res.b = std::move(b_next);
        expu_prev = std::move(expu_next);
        iterations = k + 1;

        if (k == 0) {
            trace.kkt_initial = par.field_mode
                                    ? kkt_residuals(u, res.z, res.b, model, tau_field)
                                    : kkt_residuals(u, res.z, res.b, model, tau);
            trace.has_kkt = true;
        }

        if (tau_changed && (par.variable_step || cfg.strict_step)) {
            if (par.field_mode) {
                // per-pixel schedule, capped at the base step: shrinking with
                // the local weight keeps the fidelity part stable where the
                // weight is large, and the cap keeps the divergence part
                // stable where the weight stays small
                for (size_t p = 0; p < delta_field.v.size(); ++p) {
                    double d = par.variable_step
                                   ? std::min(par.delta0, cfg.delta0 / (0.4 * tau_field.v[p]))
                                   : par.delta0;
                    if (cfg.strict_step) d = std::min(d, strict_cap(tau_field.v[p]));
                    delta_field.v[p] = d;
                }
            } else {
                double d = par.variable_step ? cfg.delta0 / (0.4 * tau) : par.delta0;
                if (cfg.strict_step) d = std::min(d, strict_cap(tau));
                delta = d;
            }
        }

        // the first sweep can leave u untouched while z and b move, so the
        // change test only counts from the second iteration on
        if (k > 0 && rel < cfg.tol) {
            converged = true;
            break;
        }
    }

    trace.converged = converged;
    trace.iterations = iterations;
    if (par.field_mode) {
        trace.tau_final_min = minval(tau_field);
        trace.tau_final_max = maxval(tau_field);
        trace.tau_final_mean = tau_repr_mean();
        res.tau_field = std::move(tau_field);
    } else {
        trace.tau_final_min = trace.tau_final_mean = trace.tau_final_max = tau;
        res.tau_field = Image(1, 1, tau);
    }
    trace.kkt_final = par.field_mode ? kkt_residuals(u, res.z, res.b, model, res.tau_field)
                                     : kkt_residuals(u, res.z, res.b, model, tau);

    res.output = clamp_image(expu_prev, 0.0, 255.0);
    if (reference) {
        auto ps = psnr(res.output, *reference);
        trace.final_psnr = ps ? *ps : std::numeric_limits<double>::infinity();
    }
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

SolveResult run_plad_div(const Image& f, const SolverConfig& cfg, const Image* reference) {
    const auto t_start = std::chrono::steady_clock::now();
    FidelityModel model(FidelityKind::IDivergence, f);
    const FeasibleBox box = default_box(model);
    const bool project = project_enabled(cfg);
    const double lambda = cfg.lambda > 0.0 ? cfg.lambda : default_lambda(cfg.M);

    PladState s{f, gradient(f), GradField(f.rows, f.cols)};
    SolveResult res;
    RunTrace& trace = res.trace;
    trace.normalization = "lambda-form";
    trace.has_psnr = reference != nullptr;

    bool converged = false;
    int iterations = 0;
    for (int k = 0; k < cfg.max_iter; ++k) {
        PladState next = plad_iterate(s, model, lambda, cfg.rho, cfg.delta0, project ? &box : nullptr);
        // intensity-scale iterate: generous cap, only there to catch blowups
        check_iterate(next.u, k, 1e9);
        const double rel = relative_error(s.u, next.u, FidelityKind::IDivergence);

        double row_psnr = kNan;
        if (reference) {
            auto ps = psnr(clamp_image(next.u, 0.0, 255.0), *reference);
            row_psnr = ps ? *ps : std::numeric_limits<double>::infinity();
        }
        trace.rows.push_back({k, 1.0 / lambda, rel, row_psnr, kNan, cfg.delta0});

        s = std::move(next);
        iterations = k + 1;
        if (k > 0 && rel < cfg.tol) {
            converged = true;
            break;
        }
    }

    trace.converged = converged;
    trace.iterations = iterations;
    trace.tau_final_min = trace.tau_final_mean = trace.tau_final_max = 1.0 / lambda;
    res.output = clamp_image(s.u, 0.0, 255.0);
    res.iterate = std::move(s.u);
    res.z = std::move(s.z);
    res.b = std::move(s.b);
    res.tau_field = Image(1, 1, 1.0 / lambda);
    if (reference) {
        auto ps = psnr(res.output, *reference);
        trace.final_psnr = ps ? *ps : std::numeric_limits<double>::infinity();
    }
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace

SolverConfig default_config(SolverKind kind, FidelityKind model, double M) {
    SolverConfig cfg;
    cfg.kind = kind;
    cfg.model = model;
    cfg.M = M;
    if (kind == SolverKind::Plad) {
        cfg.variable_step = false;
        if (model == FidelityKind::Exponential) {
            cfg.rho = 0.3;
            cfg.delta0 = 0.4;
        } else {
            cfg.rho = 0.01;
            cfg.delta0 = 8.0;
        }
    }
    return cfg;
}

SolveResult solve(const Image& f, const SolverConfig& cfg, const Image* reference) {
    for (double x : f.v)
        if (!(x > 0.0)) throw std::domain_error("solve: observation must be strictly positive");
    if (reference && !reference->same_shape(f))
        throw std::invalid_argument("solve: reference shape mismatch");
    validate_common(cfg, f);
    if (cfg.model == FidelityKind::IDivergence) {
        if (cfg.kind != SolverKind::Plad)
            throw std::invalid_argument("solve: weight selection requires the exponential model");
        return run_plad_div(f, cfg, reference);
    }
    if (cfg.kind == SolverKind::Plad) {
        const double lambda = cfg.lambda > 0.0 ? cfg.lambda : default_lambda(cfg.M);
        CoreParams par;
        par.tau0 = 1.0 / lambda;
        par.rho = cfg.rho / lambda;
        par.delta0 = cfg.delta0 * lambda;
        par.tau_updates = false;
        par.field_mode = false;
        par.variable_step = false;
        par.normalization = "lambda-form";
        SolverConfig inner = cfg;
        inner.tau_min = std::min(cfg.tau_min, par.tau0);
        inner.tau_max = std::max(cfg.tau_max, par.tau0);
        SolveResult r = run_core_exp(f, inner, par, reference);
        return r;
    }
    CoreParams par;
    par.tau0 = cfg.tau0;
    par.rho = cfg.rho;
    par.delta0 = cfg.delta0;
    par.tau_updates = true;
    par.field_mode = cfg.kind == SolverKind::LdpLadm;
    par.variable_step = cfg.variable_step;
    par.normalization = "tau-form";
    return run_core_exp(f, cfg, par, reference);
}

PladState plad_iterate(const PladState& s, const FidelityModel& model, double lambda, double rho,
                       double delta, const FeasibleBox* box) {
    if (!(lambda > 0.0) || !(rho > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("plad_iterate: lambda, rho, delta must be positive");
    if (!s.u.same_shape(model.f)) throw std::invalid_argument("plad_iterate: shape mismatch");

    Image g = fidelity_gradient(model, s.u);
    GradField gu = gradient(s.u);
    GradField diff(s.u.rows, s.u.cols);
    for (size_t p = 0; p < diff.size(); ++p) {
        diff.h[p] = s.z.h[p] - gu.h[p];
        diff.v[p] = s.z.v[p] - gu.v[p];
    }
    Image dz = divergence(diff);
    Image db = divergence(s.b);

    PladState next;
    next.u = Image(s.u.rows, s.u.cols);
    for (size_t p = 0; p < next.u.v.size(); ++p)
        next.u.v[p] = s.u.v[p] - delta * (g.v[p] + rho * dz.v[p] + db.v[p]);
    if (box) next.u = project_box(next.u, *box);

    GradField gu_next = gradient(next.u);
    GradField zarg(s.u.rows, s.u.cols);
    const double inv_rho = 1.0 / rho;
    for (size_t p = 0; p < zarg.size(); ++p) {
        zarg.h[p] = gu_next.h[p] - s.b.h[p] * inv_rho;
        zarg.v[p] = gu_next.v[p] - s.b.v[p] * inv_rho;
    }
    next.z = shrink(zarg, lambda * inv_rho);
    next.b = GradField(s.u.rows, s.u.cols);
    for (size_t p = 0; p < next.b.size(); ++p) {
        next.b.h[p] = s.b.h[p] + rho * (next.z.h[p] - gu_next.h[p]);
        next.b.v[p] = s.b.v[p] + rho * (next.z.v[p] - gu_next.v[p]);
    }
    return next;
}

double relative_error(const Image& prev, const Image& next, FidelityKind kind) {
    if (!prev.same_shape(next)) throw std::invalid_argument("relative_error: shape mismatch");
    double den = 0.0, num = 0.0;
    if (kind == FidelityKind::Exponential) {
        for (size_t p = 0; p < prev.v.size(); ++p) {
            const double a = std::exp(prev.v[p]);
            const double d = std::exp(next.v[p]) - a;
            den += a * a;
            num += d * d;
        }
    } else {
        for (size_t p = 0; p < prev.v.size(); ++p) {
            const double d = next.v[p] - prev.v[p];
            den += prev.v[p] * prev.v[p];
            num += d * d;
        }
    }
    if (den == 0.0) throw std::domain_error("relative_error: zero reference norm");
    return std::sqrt(num) / std::sqrt(den);
}

double step_bound(const FidelityModel& model, const FeasibleBox& box, double rho, double tau_bar) {
    if (!(rho > 0.0) || !(tau_bar > 0.0))
        throw std::invalid_argument("step_bound: rho and tau_bar must be positive");
    return 1.0 / (tau_bar * hessian_lipschitz_bound(model, box) + 8.0 * rho);
}

namespace {

KktResiduals kkt_impl(const Image& u, const GradField& z, const GradField& b,
                      const FidelityModel& model, const Image* tau_field, double tau_scalar) {
    Image g = fidelity_gradient(model, u);
    Image db = divergence(b);
    double grad_sq = 0.0;
    for (size_t p = 0; p < u.v.size(); ++p) {
        const double t = tau_field ? tau_field->v[p] : tau_scalar;
        const double r = t * g.v[p] + db.v[p];
        grad_sq += r * r;
    }
    GradField gu = gradient(u);
    double primal_sq = 0.0;
    bool dual_ok = true;
    for (size_t p = 0; p < gu.size(); ++p) {
        const double dh = gu.h[p] - z.h[p];
        const double dv = gu.v[p] - z.v[p];
        primal_sq += dh * dh + dv * dv;
        const double bn = std::sqrt(b.h[p] * b.h[p] + b.v[p] * b.v[p]);
        if (bn > 1.0 + 1e-8) dual_ok = false;
        const double zn = std::sqrt(z.h[p] * z.h[p] + z.v[p] * z.v[p]);
        if (zn > 0.0) {
            const double eh = b.h[p] + z.h[p] / zn;
            const double ev = b.v[p] + z.v[p] / zn;
            if (std::sqrt(eh * eh + ev * ev) > 1e-6) dual_ok = false;
        }
    }
    return {std::sqrt(primal_sq), std::sqrt(grad_sq), dual_ok};
}

}  // namespace

KktResiduals kkt_residuals(const Image& u, const GradField& z, const GradField& b,
                           const FidelityModel& model, const Image& tau_field) {
    if (!tau_field.same_shape(u)) throw std::invalid_argument("kkt_residuals: weight shape mismatch");
    return kkt_impl(u, z, b, model, &tau_field, 0.0);
}

KktResiduals kkt_residuals(const Image& u, const GradField& z, const GradField& b,
                           const FidelityModel& model, double tau) {
    return kkt_impl(u, z, b, model, nullptr, tau);
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::FILE* fh = std::fopen(path.c_str(), "w");
    if (!fh) throw std::runtime_error("write_trace_csv: cannot open " + path);
    std::fputs("k,tau,rel_err,psnr,discrepancy,delta\n", fh);
    for (const TraceRow& r : trace.rows) {
        std::fprintf(fh, "%d,%.12g,%.12g,", r.k, r.tau, r.rel_err);
        if (std::isnan(r.psnr)) std::fputs(",", fh);
        else std::fprintf(fh, "%.12g,", r.psnr);
        if (std::isnan(r.discrepancy)) std::fputs(",", fh);
        else std::fprintf(fh, "%.12g,", r.discrepancy);
        std::fprintf(fh, "%.12g\n", r.delta);
    }
    std::fclose(fh);
}

}  // namespace speckletv
