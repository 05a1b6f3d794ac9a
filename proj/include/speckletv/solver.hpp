#pragma once

#include <string>
#include <vector>

#include "speckletv/discrepancy.hpp"
#include "speckletv/fidelity.hpp"
#include "speckletv/image.hpp"
#include "speckletv/noise.hpp"

namespace speckletv {

enum class SolverKind { Plad, DpLadm, LdpLadm };

enum class CbarSource { Auto, Paper, LowM, Digamma, Custom };

enum class ProjectMode { Auto, On, Off };  // Auto: projection on for both models

struct SolverConfig {
    SolverKind kind = SolverKind::DpLadm;
    FidelityKind model = FidelityKind::Exponential;
    double M = 8.0;

    double rho = 0.75;
    double delta0 = 0.16;
    double tau0 = 0.1;
    double lambda = 0.0;  // fixed-weight (Plad) TV weight; <= 0 picks 2/M (M <= 5) or 3/M
    double tol = 3e-4;
    int max_iter = 500;

    int newton_every = 3;
    int newton_iters = 3;  // Q
    int window = 17;       // r
    CbarSource cbar_source = CbarSource::Auto;
    double cbar_custom = 0.0;

    bool variable_step = true;  // delta = delta0 / (0.4 tau) after tau changes
    ProjectMode project = ProjectMode::Auto;
    bool strict_step = false;  // cap delta at 1/(tau L_D + 8 rho + eps0)
    double strict_eps0 = 1e-3;
    double tau_min = 1e-4;
    double tau_max = 1e3;
    Padding padding = Padding::Symmetric;
};

/// Paper-style defaults for the given solver/model combination.
SolverConfig default_config(SolverKind kind, FidelityKind model, double M);

struct TraceRow {
    int k;           // iteration index, 0-based
    double tau;      // weight used by this iteration's u-update (field: mean)
    double rel_err;
    double psnr;     // NaN when no reference
    double discrepancy;  // NaN when no target applies
    double delta;
};

struct TauEvent {
    int k;
    double tau_before;
    double tau_after;
    double k_before;
    double k_after;
    TauUpdateStatus status;
};

struct KktResiduals {
    double primal;       // ||grad u - z||
    double grad;         // ||tau .* grad D(u) + div b||
    bool dual_feasible;  // |b| <= 1 and b = -z/|z| wherever z != 0
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<TauEvent> tau_events;
    std::string normalization;  // "tau-form" or "lambda-form"
    bool converged = false;
    int iterations = 0;
    double final_psnr = 0.0;
    bool has_psnr = false;
    double tau_final_min = 0.0, tau_final_mean = 0.0, tau_final_max = 0.0;
    long long exp_clamps = 0;
    int projection_gate_breaks = 0;
    bool step_within_bound = true;  // heuristic delta never exceeded the safe bound
    double wall_seconds = 0.0;
    KktResiduals kkt_initial{0, 0, true};
    KktResiduals kkt_final{0, 0, true};
    bool has_kkt = false;
};

struct SolveResult {
    Image output;      // intensity image, clamped to [0, 255]
    Image iterate;     // final solver-domain iterate (log intensity for Exponential)
    Image tau_field;   // final per-pixel weights (LdpLadm), else 1x1 scalar holder
    GradField z;
    GradField b;
    RunTrace trace;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run the configured solver on observation f (> 0). `reference`, when given,
/// enables the per-iteration and final PSNR fields.
SolveResult solve(const Image& f, const SolverConfig& cfg, const Image* reference = nullptr);

/// One sweep of the fixed-weight linearized splitting in its TV-weighted
/// normalization: u-update by a gradient step on D + quadratic coupling,
/// z by shrinkage with threshold lambda/rho, b by the multiplier ascent.
struct PladState {
    Image u;
    GradField z;
    GradField b;
};

PladState plad_iterate(const PladState& s, const FidelityModel& model, double lambda, double rho,
                       double delta, const FeasibleBox* box = nullptr);

/// Relative change between consecutive iterates on the intensity scale:
/// ||exp(next) - exp(prev)|| / ||exp(prev)|| for Exponential, plain norms
/// for IDivergence. Zero denominator is an error.
double relative_error(const Image& prev, const Image& next, FidelityKind kind);

/// Largest provably safe step: 1 / (tau_bar * L_D + 8 rho), where L_D is the
/// fidelity gradient's Lipschitz bound over the box and 8 bounds the
/// Laplacian's spectral norm.
double step_bound(const FidelityModel& model, const FeasibleBox& box, double rho, double tau_bar);

KktResiduals kkt_residuals(const Image& u, const GradField& z, const GradField& b,
                           const FidelityModel& model, const Image& tau_field);
KktResiduals kkt_residuals(const Image& u, const GradField& z, const GradField& b,
                           const FidelityModel& model, double tau);

/// Write the per-iteration trace as CSV (k,tau,rel_err,psnr,discrepancy,delta).
void write_trace_csv(const RunTrace& trace, const std::string& path);

}  // namespace speckletv
