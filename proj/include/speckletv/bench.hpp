#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speckletv/solver.hpp"

namespace speckletv {

/// One benchmark run: a clean image, a noise level and seed, and a solver
/// configuration. Noise is synthesized in memory so the solver sees the
/// unquantized observation.
struct BenchmarkCase {
    std::string id;
    std::string image;     // file name resolved against the data directory
    double M = 8.0;
    std::uint64_t seed = 1;
    double expected_db = 0.0;
    bool has_expected = false;
    SolverConfig cfg;
};

/// Parses the flat key=value case format. A case starts at an `id=` line and
/// collects keys until the next `id=` or end of input. `#` starts a comment;
/// blank lines are ignored. Throws std::runtime_error with a line number on
/// malformed input or unknown keys.
std::vector<BenchmarkCase> parse_cases_text(const std::string& text);
std::vector<BenchmarkCase> parse_case_file(const std::string& path);

struct MetricsRow {
    std::string id;
    double psnr_db = 0.0;   // NaN when the run failed
    int iterations = 0;
    double wall_s = 0.0;
    double tau_min = 0.0;
    double tau_mean = 0.0;
    double tau_max = 0.0;
    std::string status;     // converged | maxiter | error: <what>
    double expected_db = 0.0;
    bool has_expected = false;
    bool pass = false;
};

/// Runs one case: reads the clean image, applies Gamma noise from (M, seed),
/// solves, and scores PSNR against the clean image. A case with an expected
/// value passes when |psnr - expected| <= tol_db.
MetricsRow run_case(const BenchmarkCase& c, const std::string& data_dir, double tol_db = 0.3);

/// Runs all cases on up to `jobs` threads; rows come back sorted by case id.
std::vector<MetricsRow> run_cases(const std::vector<BenchmarkCase>& cases,
                                  const std::string& data_dir, int jobs = 1, double tol_db = 0.3);

/// Header: case,psnr_db,iterations,wall_s,tau_min,tau_mean,tau_max,status,expected_db,pass
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);

}  // namespace speckletv
