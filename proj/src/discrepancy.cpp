#include "speckletv/discrepancy.hpp"

#include <algorithm>
#include <cmath>

namespace speckletv {

namespace {

// exp(-x) with the exponent clamped to +-700 so the result stays finite
inline double exp_neg(double x, long long* clamps) {
    if (x > 700.0 || x < -700.0) {
        if (clamps) ++*clamps;
        x = std::clamp(x, -700.0, 700.0);
    }
    return std::exp(-x);
}

}  // namespace

StepCoefficients step_coefficients(const Image& u, const Image& f, const GradField& z,
                                   const GradField& b, double rho, double delta) {
    if (!u.same_shape(f)) throw std::invalid_argument("step_coefficients: shape mismatch");
    if (z.rows != u.rows || z.cols != u.cols || b.rows != u.rows || b.cols != u.cols)
        throw std::invalid_argument("step_coefficients: field shape mismatch");

    GradField diff(z.rows, z.cols);
    GradField gu = gradient(u);
    for (size_t p = 0; p < diff.size(); ++p) {
        diff.h[p] = z.h[p] - gu.h[p];
        diff.v[p] = z.v[p] - gu.v[p];
    }
    Image dz = divergence(diff);
    Image db = divergence(b);

    StepCoefficients sc{Image(u.rows, u.cols), Image(u.rows, u.cols)};
    for (size_t p = 0; p < u.v.size(); ++p) {
        sc.a1.v[p] = -delta * (1.0 - f.v[p] * std::exp(-u.v[p]));
        sc.a2.v[p] = u.v[p] - delta * (rho * dz.v[p] + db.v[p]);
    }
    return sc;
}

StepCoefficients step_coefficients(const Image& u, const Image& f, const GradField& z,
                                   const GradField& b, double rho, const Image& delta) {
    if (!u.same_shape(f) || !delta.same_shape(u))
        throw std::invalid_argument("step_coefficients: shape mismatch");
    if (z.rows != u.rows || z.cols != u.cols || b.rows != u.rows || b.cols != u.cols)
        throw std::invalid_argument("step_coefficients: field shape mismatch");

    GradField diff(z.rows, z.cols);
    GradField gu = gradient(u);
    for (size_t p = 0; p < diff.size(); ++p) {
        diff.h[p] = z.h[p] - gu.h[p];
        diff.v[p] = z.v[p] - gu.v[p];
    }
    Image dz = divergence(diff);
    Image db = divergence(b);

    StepCoefficients sc{Image(u.rows, u.cols), Image(u.rows, u.cols)};
    for (size_t p = 0; p < u.v.size(); ++p) {
        sc.a1.v[p] = -delta.v[p] * (1.0 - f.v[p] * std::exp(-u.v[p]));
        sc.a2.v[p] = u.v[p] - delta.v[p] * (rho * dz.v[p] + db.v[p]);
    }
    return sc;
}

Image apply_tau(const StepCoefficients& sc, double tau) {
    Image out(sc.a1.rows, sc.a1.cols);
    for (size_t p = 0; p < out.v.size(); ++p) out.v[p] = sc.a1.v[p] * tau + sc.a2.v[p];
    return out;
}

Image apply_tau(const StepCoefficients& sc, const Image& tau) {
    if (!tau.same_shape(sc.a1)) throw std::invalid_argument("apply_tau: shape mismatch");
    Image out(sc.a1.rows, sc.a1.cols);
    for (size_t p = 0; p < out.v.size(); ++p) out.v[p] = sc.a1.v[p] * tau.v[p] + sc.a2.v[p];
    return out;
}

DiscrepancyTarget::DiscrepancyTarget(double v) : c_bar(v) {
    if (!(v > 1.0)) throw std::domain_error("DiscrepancyTarget: level must exceed 1");
}

DiscrepancyTarget DiscrepancyTarget::from_series(double M, DiscrepancySeries series) {
    return DiscrepancyTarget(expected_discrepancy(M, series));
}

DiscrepancyTarget DiscrepancyTarget::automatic(double M) {
    return from_series(M, auto_series(M));
}

DiscrepancyTarget DiscrepancyTarget::custom(double value) { return DiscrepancyTarget(value); }

double global_discrepancy(const StepCoefficients& sc, const Image& f, double tau,
                          const DiscrepancyTarget& target, long long* clamps) {
    if (!f.same_shape(sc.a1)) throw std::invalid_argument("global_discrepancy: shape mismatch");
    double s = 0.0;
    for (size_t p = 0; p < f.v.size(); ++p) {
        const double x = sc.a1.v[p] * tau + sc.a2.v[p];
        s += x + f.v[p] * exp_neg(x, clamps) - std::log(f.v[p]);
    }
    return s / static_cast<double>(f.v.size()) - target.c_bar;
}

double global_discrepancy_derivative(const StepCoefficients& sc, const Image& f, double tau,
                                     long long* clamps) {
    if (!f.same_shape(sc.a1)) throw std::invalid_argument("global_discrepancy_derivative: shape mismatch");
    double s = 0.0;
    for (size_t p = 0; p < f.v.size(); ++p) {
        const double x = sc.a1.v[p] * tau + sc.a2.v[p];
        s += sc.a1.v[p] * (1.0 - f.v[p] * exp_neg(x, clamps));
    }
    return s / static_cast<double>(f.v.size());
}

namespace {

double bisect_root(const StepCoefficients& sc, const Image& f, const DiscrepancyTarget& target,
                   double lo, double hi, long long* clamps) {
    // K(lo) > 0, K(hi) <= 0 or vice versa; narrow until the interval is tiny
    double klo = global_discrepancy(sc, f, lo, target, clamps);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double kmid = global_discrepancy(sc, f, mid, target, clamps);
        if ((klo > 0.0) == (kmid > 0.0)) {
            lo = mid;
            klo = kmid;
        } else {
            hi = mid;
        }
        if (std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TauUpdateResult newton_update_tau(const StepCoefficients& sc, const Image& f, double tau,
                                  const DiscrepancyTarget& target, const TauUpdateOptions& opts,
                                  long long* clamps) {
    if (opts.max_steps < 1) throw std::invalid_argument("newton_update_tau: max_steps must be >= 1");
    const double k0 = global_discrepancy(sc, f, tau, target, clamps);
    if (k0 <= 0.0) return {tau, TauUpdateStatus::Unchanged, k0, k0};

    double t = tau;
    double kv = k0;
    TauUpdateStatus status = TauUpdateStatus::Newton;
    for (int q = 0; q < opts.max_steps; ++q) {
        if (q > 0) {
            kv = global_discrepancy(sc, f, t, target, clamps);
            if (kv <= 0.0) break;
        }
        const double d = global_discrepancy_derivative(sc, f, t, clamps);
        if (std::abs(d) < opts.deriv_eps) {
            // Expand geometrically from t in both directions looking for a
            // sign change of K inside [tau_min, tau_max]
            double probe_lo = -1.0, probe_hi = -1.0;
            for (double fac = 2.0; fac < 1e12; fac *= 2.0) {
                const double up = std::min(t * fac, opts.tau_max);
                if (global_discrepancy(sc, f, up, target, clamps) <= 0.0) {
                    probe_lo = t;
                    probe_hi = up;
                    break;
                }
                const double dn = std::max(t / fac, opts.tau_min);
                if (global_discrepancy(sc, f, dn, target, clamps) <= 0.0) {
                    probe_lo = t;
                    probe_hi = dn;
                    break;
                }
                if (up == opts.tau_max && dn == opts.tau_min) break;
            }
            if (probe_lo < 0.0) {
                const double ka = global_discrepancy(sc, f, t, target, clamps);
                return {t, TauUpdateStatus::NoRoot, k0, ka};
            }
            t = bisect_root(sc, f, target, probe_lo, probe_hi, clamps);
            status = TauUpdateStatus::Bisection;
            break;
        }
        const double next = std::clamp(t - kv / d, opts.tau_min, opts.tau_max);
        if (next == t) break;
        t = next;
    }
    const double ka = global_discrepancy(sc, f, t, target, clamps);
    return {t, status, k0, ka};
}

namespace {

// Per-pixel residual x + f exp(-x) - log f and its tau-derivative at
// x = a1 tau + a2
void local_residuals(const StepCoefficients& sc, const Image& f, const Image& tau_field,
                     Image* r_out, Image* dr_out, long long* clamps) {
    for (size_t p = 0; p < f.v.size(); ++p) {
        const double x = sc.a1.v[p] * tau_field.v[p] + sc.a2.v[p];
        const double e = f.v[p] * exp_neg(x, clamps);
        if (r_out) r_out->v[p] = x + e - std::log(f.v[p]);
        if (dr_out) dr_out->v[p] = sc.a1.v[p] * (1.0 - e);
    }
}

}  // namespace

Image local_discrepancy_field(const StepCoefficients& sc, const Image& f, const Image& tau_field,
                              const DiscrepancyTarget& target, int r, Padding pad,
                              long long* clamps) {
    if (!f.same_shape(sc.a1) || !tau_field.same_shape(sc.a1))
        throw std::invalid_argument("local_discrepancy_field: shape mismatch");
    Image res(f.rows, f.cols);
    local_residuals(sc, f, tau_field, &res, nullptr, clamps);
    Image k = box_mean_filter(res, r, pad);
    for (double& x : k.v) x -= target.c_bar;
    return k;
}

Image local_newton_update(const StepCoefficients& sc, const Image& f, Image tau_field,
                          const DiscrepancyTarget& target, int sweeps, int r, double tau_min,
                          double tau_max, Padding pad, long long* clamps, double denom_eps) {
    if (!f.same_shape(sc.a1) || !tau_field.same_shape(sc.a1))
        throw std::invalid_argument("local_newton_update: shape mismatch");
    if (sweeps < 1) throw std::invalid_argument("local_newton_update: sweeps must be >= 1");
    Image res(f.rows, f.cols), dres(f.rows, f.cols);
    for (int q = 0; q < sweeps; ++q) {
        local_residuals(sc, f, tau_field, &res, &dres, clamps);
        Image kf = box_mean_filter(res, r, pad);
        Image df = box_mean_filter(dres, r, pad);
        for (size_t p = 0; p < tau_field.v.size(); ++p) {
            const double k = kf.v[p] - target.c_bar;
            if (k <= 0.0) continue;
            const double d = df.v[p];
            if (std::abs(d) < denom_eps) continue;
            tau_field.v[p] = std::clamp(tau_field.v[p] - k / d, tau_min, tau_max);
        }
    }
    return tau_field;
}

Image smooth_tau(const Image& tau_field, int r, Padding pad) {
    return box_mean_filter(tau_field, r, pad);
}

}  // namespace speckletv
