#include "speckletv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "speckletv/noise.hpp"
#include "speckletv/pgm.hpp"

namespace speckletv {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_line(int line, const std::string& what) {
    throw std::runtime_error("case file line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) bad_line(line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const std::invalid_argument&) {
        bad_line(line, "not a number: '" + v + "'");
    } catch (const std::out_of_range&) {
        bad_line(line, "number out of range: '" + v + "'");
    }
}

long to_long(const std::string& v, int line) {
    double d = to_double(v, line);
    if (d != std::floor(d)) bad_line(line, "expected an integer, got '" + v + "'");
    return static_cast<long>(d);
}

bool to_switch(const std::string& v, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    bad_line(line, "expected on/off, got '" + v + "'");
}

void apply_key(BenchmarkCase& c, const std::string& key, const std::string& val, int line) {
    SolverConfig& cfg = c.cfg;
    if (key == "image") c.image = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(val, line));
    else if (key == "expect") { c.expected_db = to_double(val, line); c.has_expected = true; }
    else if (key == "lambda") cfg.lambda = to_double(val, line);
    else if (key == "rho") cfg.rho = to_double(val, line);
    else if (key == "delta0") cfg.delta0 = to_double(val, line);
    else if (key == "tau0") cfg.tau0 = to_double(val, line);
    else if (key == "tol") cfg.tol = to_double(val, line);
    else if (key == "max_iter") cfg.max_iter = static_cast<int>(to_long(val, line));
    else if (key == "newton_every") cfg.newton_every = static_cast<int>(to_long(val, line));
    else if (key == "newton_iters") cfg.newton_iters = static_cast<int>(to_long(val, line));
    else if (key == "window") cfg.window = static_cast<int>(to_long(val, line));
    else if (key == "variable_step") cfg.variable_step = to_switch(val, line);
    else if (key == "strict_step") cfg.strict_step = to_switch(val, line);
    else if (key == "project") {
        if (val == "auto") cfg.project = ProjectMode::Auto;
        else if (val == "on") cfg.project = ProjectMode::On;
        else if (val == "off") cfg.project = ProjectMode::Off;
        else bad_line(line, "project must be auto/on/off");
    } else if (key == "cbar") {
        if (val == "auto") cfg.cbar_source = CbarSource::Auto;
        else if (val == "paper-series") cfg.cbar_source = CbarSource::Paper;
        else if (val == "low-m") cfg.cbar_source = CbarSource::LowM;
        else if (val == "digamma") cfg.cbar_source = CbarSource::Digamma;
        else {
            cfg.cbar_source = CbarSource::Custom;
            cfg.cbar_custom = to_double(val, line);
        }
    } else bad_line(line, "unknown key '" + key + "'");
}

struct RawLine {
    std::string key, val;
    int line;
};

struct RawCase {
    std::string id;
    int line = 0;
    std::vector<RawLine> kv;
};

BenchmarkCase build_case(const RawCase& raw) {
    // solver, model, and M pick the defaults; everything else overrides them
    SolverKind kind = SolverKind::DpLadm;
    FidelityKind model = FidelityKind::Exponential;
    double M = 8.0;
    for (const RawLine& l : raw.kv) {
        if (l.key == "solver") {
            if (l.val == "plad") kind = SolverKind::Plad;
            else if (l.val == "dp-ladm") kind = SolverKind::DpLadm;
            else if (l.val == "ldp-ladm") kind = SolverKind::LdpLadm;
            else bad_line(l.line, "unknown solver '" + l.val + "'");
        } else if (l.key == "model") {
            if (l.val == "exp") model = FidelityKind::Exponential;
            else if (l.val == "div") model = FidelityKind::IDivergence;
            else bad_line(l.line, "unknown model '" + l.val + "'");
        } else if (l.key == "M") {
            M = to_double(l.val, l.line);
            if (!(M > 0.0)) bad_line(l.line, "M must be positive");
        }
    }
    BenchmarkCase c;
    c.id = raw.id;
    c.M = M;
    c.cfg = default_config(kind, model, M);
    for (const RawLine& l : raw.kv) {
        if (l.key == "solver" || l.key == "model" || l.key == "M") continue;
        apply_key(c, l.key, l.val, l.line);
    }
    if (c.image.empty()) bad_line(raw.line, "case '" + c.id + "' has no image");
    return c;
}

}  // namespace

std::vector<BenchmarkCase> parse_cases_text(const std::string& text) {
    std::vector<RawCase> raws;
    std::istringstream in(text);
    std::string rawline;
    int line = 0;
    while (std::getline(in, rawline)) {
        ++line;
        std::string s = rawline;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) bad_line(line, "expected key=value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) bad_line(line, "empty key");
        if (val.empty()) bad_line(line, "empty value for '" + key + "'");
        if (key == "id") {
            for (const RawCase& r : raws)
                if (r.id == val) bad_line(line, "duplicate case id '" + val + "'");
            raws.push_back({val, line, {}});
        } else {
            if (raws.empty()) bad_line(line, "'" + key + "' before any id=");
            raws.back().kv.push_back({key, val, line});
        }
    }
    std::vector<BenchmarkCase> out;
    out.reserve(raws.size());
    for (const RawCase& r : raws) out.push_back(build_case(r));
    return out;
}

std::vector<BenchmarkCase> parse_case_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open case file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cases_text(buf.str());
}

MetricsRow run_case(const BenchmarkCase& c, const std::string& data_dir, double tol_db) {
    MetricsRow row;
    row.id = c.id;
    row.expected_db = c.expected_db;
    row.has_expected = c.has_expected;
    try {
        Image clean = read_pgm(data_dir + "/" + c.image, /*floor_zeros=*/false);
        Image noisy = apply_multiplicative_noise(clean, {c.M, c.seed});
        SolveResult r = solve(noisy, c.cfg, &clean);
        row.psnr_db = r.trace.final_psnr;
        row.iterations = r.trace.iterations;
        row.wall_s = r.trace.wall_seconds;
        row.tau_min = r.trace.tau_final_min;
        row.tau_mean = r.trace.tau_final_mean;
        row.tau_max = r.trace.tau_final_max;
        row.status = r.trace.converged ? "converged" : "maxiter";
        row.pass = !c.has_expected || std::fabs(row.psnr_db - c.expected_db) <= tol_db;
    } catch (const std::exception& e) {
        row.psnr_db = std::numeric_limits<double>::quiet_NaN();
        row.status = std::string("error: ") + e.what();
        row.pass = false;
    }
    return row;
}

std::vector<MetricsRow> run_cases(const std::vector<BenchmarkCase>& cases,
                                  const std::string& data_dir, int jobs, double tol_db) {
    std::vector<MetricsRow> rows(cases.size());
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(cases.size()));
    if (jobs <= 1) {
        for (size_t i = 0; i < cases.size(); ++i) rows[i] = run_case(cases[i], data_dir, tol_db);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= cases.size()) return;
                    rows[i] = run_case(cases[i], data_dir, tol_db);
                }
            });
        for (std::thread& th : pool) th.join();
    }
    std::sort(rows.begin(), rows.end(),
              [](const MetricsRow& a, const MetricsRow& b) { return a.id < b.id; });
    return rows;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::FILE* fh = std::fopen(path.c_str(), "w");
    if (!fh) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("case,psnr_db,iterations,wall_s,tau_min,tau_mean,tau_max,status,expected_db,pass\n",
               fh);
    for (const MetricsRow& r : rows) {
        std::fprintf(fh, "%s,", r.id.c_str());
        if (std::isnan(r.psnr_db)) std::fputs(",", fh);
        else std::fprintf(fh, "%.2f,", r.psnr_db);
        std::fprintf(fh, "%d,%.3f,%.6g,%.6g,%.6g,%s,", r.iterations, r.wall_s, r.tau_min,
                     r.tau_mean, r.tau_max, r.status.c_str());
        if (r.has_expected) std::fprintf(fh, "%.2f,", r.expected_db);
        else std::fputs(",", fh);
        std::fprintf(fh, "%d\n", r.pass ? 1 : 0);
    }
    std::fclose(fh);
}

}  // namespace speckletv
