#pragma once

#include "speckletv/image.hpp"
#include "speckletv/noise.hpp"

namespace speckletv {

/// Coefficients of the linearized update: the candidate next iterate is the
/// affine function u_next(tau) = a1 .* tau + a2 of the fidelity weight, with
///   a1 = -delta * (1 - f .* exp(-u))
///   a2 = u - delta * (rho * div(z - grad u) + div b)
struct StepCoefficients {
    Image a1;
    Image a2;
};

StepCoefficients step_coefficients(const Image& u, const Image& f, const GradField& z,
                                   const GradField& b, double rho, double delta);

/// Same coefficients with a per-pixel step field instead of a scalar step.
StepCoefficients step_coefficients(const Image& u, const Image& f, const GradField& z,
                                   const GradField& b, double rho, const Image& delta);

/// Candidate iterate for a scalar fidelity weight.
Image apply_tau(const StepCoefficients& sc, double tau);
/// Candidate iterate for a per-pixel fidelity weight field.
Image apply_tau(const StepCoefficients& sc, const Image& tau);

/// Reference level the mean log-likelihood residual is matched against.
/// Always greater than 1; constructing a smaller target is rejected.
struct DiscrepancyTarget {
    double c_bar;

    static DiscrepancyTarget from_series(double M, DiscrepancySeries series);
    /// LowM series for M <= 5, Paper series otherwise.
    static DiscrepancyTarget automatic(double M);
    static DiscrepancyTarget custom(double value);

private:
    explicit DiscrepancyTarget(double v);
};

/// Mean of (x + f exp(-x) - log f) over all pixels at x = a1 tau + a2, minus
/// the target level. Exponents are clamped to +-700; when `clamps` is given
/// the number of clamped evaluations is accumulated into it.
double global_discrepancy(const StepCoefficients& sc, const Image& f, double tau,
                          const DiscrepancyTarget& target, long long* clamps = nullptr);

/// Analytic tau-derivative of global_discrepancy:
/// mean of a1 .* (1 - f exp(-(a1 tau + a2))).
double global_discrepancy_derivative(const StepCoefficients& sc, const Image& f, double tau,
                                     long long* clamps = nullptr);

struct TauUpdateOptions {
    int max_steps = 3;
    double tau_min = 1e-4;
    double tau_max = 1e3;
    double deriv_eps = 1e-14;  // below this, Newton falls back to bisection
};

enum class TauUpdateStatus { Unchanged, Newton, Bisection, NoRoot };

struct TauUpdateResult {
    double tau;
    TauUpdateStatus status;
    double k_before;
    double k_after;
};

/// Scalar fidelity-weight update. Keeps tau when the discrepancy is already
/// nonpositive; otherwise runs at most max_steps Newton iterations
/// tau <- clamp(tau - K/K'), stopping early if K turns nonpositive. A
/// derivative below deriv_eps switches to bisection on a bracket found by
/// geometric expansion inside [tau_min, tau_max]; NoRoot reports that no
/// bracket exists there.
TauUpdateResult newton_update_tau(const StepCoefficients& sc, const Image& f, double tau,
                                  const DiscrepancyTarget& target, const TauUpdateOptions& opts,
                                  long long* clamps = nullptr);

/// Windowed discrepancy: r x r mean of (x + f exp(-x) - log f) minus the
/// target, evaluated at x = a1 .* tau_field + a2.
Image local_discrepancy_field(const StepCoefficients& sc, const Image& f, const Image& tau_field,
                              const DiscrepancyTarget& target, int r,
                              Padding pad = Padding::Symmetric, long long* clamps = nullptr);

/// Per-pixel fidelity-weight update: `sweeps` gated Newton passes
/// tau <- clamp(tau - max(K,0) ./ filtered derivative), freezing pixels whose
/// filtered derivative is below denom_eps in magnitude.
Image local_newton_update(const StepCoefficients& sc, const Image& f, Image tau_field,
                          const DiscrepancyTarget& target, int sweeps, int r, double tau_min,
                          double tau_max, Padding pad = Padding::Symmetric,
                          long long* clamps = nullptr, double denom_eps = 1e-12);

/// Windowed mean applied to the weight field after the local update.
Image smooth_tau(const Image& tau_field, int r, Padding pad = Padding::Symmetric);

}  // namespace speckletv
