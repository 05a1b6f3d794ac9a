#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "speckletv/bench.hpp"
#include "speckletv/noise.hpp"
#include "speckletv/pgm.hpp"
#include "speckletv/solver.hpp"

namespace stv = speckletv;

namespace {

int g_rc = 0;

void fail(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    g_rc = 1;
}

stv::SolverKind parse_kind(const std::string& s) {
    if (s == "plad") return stv::SolverKind::Plad;
    if (s == "dp-ladm") return stv::SolverKind::DpLadm;
    if (s == "ldp-ladm") return stv::SolverKind::LdpLadm;
    throw CLI::ValidationError("--solver", "must be plad, dp-ladm or ldp-ladm");
}

stv::FidelityKind parse_model(const std::string& s) {
    if (s == "exp") return stv::FidelityKind::Exponential;
    if (s == "div") return stv::FidelityKind::IDivergence;
    throw CLI::ValidationError("--model", "must be exp or div");
}

void print_metrics_line(const std::string& name, const stv::RunTrace& t, bool has_psnr) {
    std::printf("image,psnr_db,iterations,wall_s,tau_min,tau_mean,tau_max,status\n");
    std::printf("%s,", name.c_str());
    if (has_psnr) std::printf("%.2f,", t.final_psnr);
    else std::printf(",");
    std::printf("%d,%.3f,%.6g,%.6g,%.6g,%s\n", t.iterations, t.wall_seconds, t.tau_final_min,
                 t.tau_final_mean, t.tau_final_max, t.converged ? "converged" : "maxiter");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Total-variation speckle removal for grayscale PGM images"};
    app.require_subcommand(1);

    // add-noise
    auto* sub_noise = app.add_subcommand("add-noise", "Corrupt a clean image with Gamma speckle");
    std::string an_in, an_out;
    double an_M = 8.0;
    std::uint64_t an_seed = 1;
    sub_noise->add_option("input", an_in, "clean PGM image")->required();
    sub_noise->add_option("output", an_out, "noisy PGM to write")->required();
    sub_noise->add_option("--M", an_M, "number of averaged looks (noise shape)");
    sub_noise->add_option("--seed", an_seed, "noise seed");
    sub_noise->callback([&] {
        try {
            stv::Image clean = stv::read_pgm(an_in, /*floor_zeros=*/false);
            stv::Image noisy = stv::apply_multiplicative_noise(clean, {an_M, an_seed});
            stv::write_pgm(an_out, noisy);
            stv::Image quant = stv::read_pgm(an_out, /*floor_zeros=*/false);
            auto ps = stv::psnr(quant, clean);
            if (ps) std::printf("psnr_db=%.2f\n", *ps);
            else std::printf("psnr_db=identical\n");
        } catch (const std::exception& e) {
            fail(e.what());
        }
    });

    // denoise
    auto* sub_den = app.add_subcommand("denoise", "Remove Gamma speckle from a noisy image");
    std::string dn_in, dn_out, dn_solver = "dp-ladm", dn_model = "exp", dn_cbar = "auto";
    std::string dn_trace, dn_ref, dn_project = "auto", dn_varstep = "on";
    double dn_M = 8.0, dn_rho = 0, dn_delta0 = 0, dn_tau0 = 0, dn_lambda = 0, dn_tol = 0;
    int dn_maxit = 0, dn_every = 0, dn_iters = 0, dn_window = 0;
    bool dn_strict = false, dn_strict_step = false;
    sub_den->add_option("input", dn_in, "noisy PGM image")->required();
    sub_den->add_option("output", dn_out, "restored PGM to write")->required();
    sub_den->add_option("--solver", dn_solver, "plad | dp-ladm | ldp-ladm");
    sub_den->add_option("--model", dn_model, "exp | div (div only with plad)");
    sub_den->add_option("--M", dn_M, "number of averaged looks");
    auto* o_rho = sub_den->add_option("--rho", dn_rho, "splitting penalty");
    auto* o_delta0 = sub_den->add_option("--delta0", dn_delta0, "base gradient step");
    auto* o_tau0 = sub_den->add_option("--tau0", dn_tau0, "initial fidelity weight");
    auto* o_lambda = sub_den->add_option("--lambda", dn_lambda, "TV weight for plad");
    auto* o_tol = sub_den->add_option("--tol", dn_tol, "relative change stop threshold");
    auto* o_maxit = sub_den->add_option("--max-iter", dn_maxit, "iteration cap");
    auto* o_every = sub_den->add_option("--newton-every", dn_every, "weight update cadence");
    auto* o_iters = sub_den->add_option("--newton-iters", dn_iters, "root steps per update");
    auto* o_window = sub_den->add_option("--window", dn_window, "odd window for local weights");
    sub_den->add_option("--cbar", dn_cbar,
                        "discrepancy level: auto | paper-series | low-m | digamma | <value>");
    sub_den->add_option("--variable-step", dn_varstep, "on | off: rescale step after weight updates");
    sub_den->add_option("--project", dn_project, "auto | on | off: clamp iterates to the data range");
    sub_den->add_flag("--strict", dn_strict, "exit nonzero when the run stops at the iteration cap");
    sub_den->add_flag("--strict-step", dn_strict_step, "cap the step by the convergence bound");
    sub_den->add_option("--trace", dn_trace, "write per-iteration CSV here");
    sub_den->add_option("--reference", dn_ref, "clean image for PSNR reporting");
    sub_den->callback([&] {
        try {
            stv::SolverKind kind = parse_kind(dn_solver);
            stv::FidelityKind model = parse_model(dn_model);
            stv::SolverConfig cfg = stv::default_config(kind, model, dn_M);
            if (o_rho->count()) cfg.rho = dn_rho;
            if (o_delta0->count()) cfg.delta0 = dn_delta0;
            if (o_tau0->count()) cfg.tau0 = dn_tau0;
            if (o_lambda->count()) cfg.lambda = dn_lambda;
            if (o_tol->count()) cfg.tol = dn_tol;
            if (o_maxit->count()) cfg.max_iter = dn_maxit;
            if (o_every->count()) cfg.newton_every = dn_every;
            if (o_iters->count()) cfg.newton_iters = dn_iters;
            if (o_window->count()) cfg.window = dn_window;
            cfg.strict_step = dn_strict_step;
            if (dn_varstep == "on") cfg.variable_step = true;
            else if (dn_varstep == "off") cfg.variable_step = false;
            else throw CLI::ValidationError("--variable-step", "must be on or off");
            if (dn_project == "auto") cfg.project = stv::ProjectMode::Auto;
            else if (dn_project == "on") cfg.project = stv::ProjectMode::On;
            else if (dn_project == "off") cfg.project = stv::ProjectMode::Off;
            else throw CLI::ValidationError("--project", "must be auto, on or off");
            if (dn_cbar == "auto") cfg.cbar_source = stv::CbarSource::Auto;
            else if (dn_cbar == "paper-series") cfg.cbar_source = stv::CbarSource::Paper;
            else if (dn_cbar == "low-m") cfg.cbar_source = stv::CbarSource::LowM;
            else if (dn_cbar == "digamma") cfg.cbar_source = stv::CbarSource::Digamma;
            else {
                cfg.cbar_source = stv::CbarSource::Custom;
                cfg.cbar_custom = std::stod(dn_cbar);
            }

            long long lifted = 0;
            stv::Image noisy = stv::read_pgm(dn_in, /*floor_zeros=*/true, &lifted);
            if (lifted > 0)
                std::fprintf(stderr, "note: %lld zero pixels lifted to 1\n", lifted);
            stv::Image ref;
            const bool has_ref = !dn_ref.empty();
            if (has_ref) ref = stv::read_pgm(dn_ref, /*floor_zeros=*/false);
            stv::SolveResult r = stv::solve(noisy, cfg, has_ref ? &ref : nullptr);
            stv::write_pgm(dn_out, r.output);
            if (!dn_trace.empty()) stv::write_trace_csv(r.trace, dn_trace);
            print_metrics_line(dn_in, r.trace, has_ref);
            if (dn_strict && !r.trace.converged) g_rc = 1;
        } catch (const std::exception& e) {
            fail(e.what());
        }
    });

    // bench
    auto* sub_bench = app.add_subcommand("bench", "Run a case file and write a metrics CSV");
    std::string bc_cases, bc_out, bc_data = "data";
    int bc_jobs = 1;
    double bc_tol = 0.3;
    sub_bench->add_option("cases", bc_cases, "case file")->required();
    sub_bench->add_option("out", bc_out, "metrics CSV to write")->required();
    sub_bench->add_option("--data-dir", bc_data, "directory with clean images");
    sub_bench->add_option("--jobs", bc_jobs, "worker threads");
    sub_bench->add_option("--tol-db", bc_tol, "allowed dB gap against expected values");
    sub_bench->callback([&] {
        try {
            auto cases = stv::parse_case_file(bc_cases);
            auto rows = stv::run_cases(cases, bc_data, bc_jobs, bc_tol);
            stv::write_metrics_csv(rows, bc_out);
            int passed = 0, errors = 0;
            for (const auto& r : rows) {
                if (r.pass) ++passed;
                if (r.status.rfind("error", 0) == 0) ++errors;
            }
            std::printf("%zu cases, %d passed, %d errors\n", rows.size(), passed, errors);
            if (errors > 0) g_rc = 1;
        } catch (const std::exception& e) {
            fail(e.what());
        }
    });

    // psnr
    auto* sub_psnr = app.add_subcommand("psnr", "Peak signal-to-noise ratio between two images");
    std::string ps_a, ps_b;
    sub_psnr->add_option("a", ps_a, "first PGM image")->required();
    sub_psnr->add_option("b", ps_b, "second PGM image")->required();
    sub_psnr->callback([&] {
        try {
            stv::Image a = stv::read_pgm(ps_a, /*floor_zeros=*/false);
            stv::Image b = stv::read_pgm(ps_b, /*floor_zeros=*/false);
            auto ps = stv::psnr(a, b);
            if (ps) std::printf("%.2f\n", *ps);
            else std::printf("identical\n");
        } catch (const std::exception& e) {
            fail(e.what());
        }
    });

    CLI11_PARSE(app, argc, argv);
    return g_rc;
}
