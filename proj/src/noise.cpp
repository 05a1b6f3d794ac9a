#include "speckletv/noise.hpp"

#include <cmath>

namespace speckletv {

double GammaSampler::uniform() {
    // 53 high bits, offset to the open interval (0,1)
    return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GammaSampler::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

double GammaSampler::gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("GammaSampler::gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost to shape+1, then scale back (Marsaglia-Tsang section 6)
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, vcb;
        do {
            x = normal();
            vcb = 1.0 + c * x;
        } while (vcb <= 0.0);
        const double v = vcb * vcb * vcb;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

Image sample_gamma_field(const GammaNoiseSpec& spec, int rows, int cols) {
    if (!(spec.M > 0.0)) throw std::invalid_argument("sample_gamma_field: M must be positive");
    GammaSampler rng(spec.seed);
    Image eta(rows, cols);
    const double scale = 1.0 / spec.M;
    for (double& x : eta.v) x = rng.gamma(spec.M) * scale;
    return eta;
}

Image apply_multiplicative_noise(const Image& u, const GammaNoiseSpec& spec, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("apply_multiplicative_noise: floor must be positive");
    for (double x : u.v)
        if (x < 0.0) throw std::domain_error("apply_multiplicative_noise: negative input pixel");
    Image eta = sample_gamma_field(spec, u.rows, u.cols);
    Image f(u.rows, u.cols);
    for (size_t p = 0; p < u.v.size(); ++p) f.v[p] = u.v[p] > 0.0 ? u.v[p] * eta.v[p] : floor;
    return f;
}

double expected_discrepancy(double M, DiscrepancySeries series) {
    if (!(M > 0.0)) throw std::invalid_argument("expected_discrepancy: M must be positive");
    switch (series) {
        case DiscrepancySeries::Paper:
            return 1.0 + 1.0 / (2.0 * M) + 1.0 / (12.0 * M * M) - 5.0 / (2.0 * M * M * M);
        case DiscrepancySeries::LowM:
            return 1.0 + 1.0 / (2.0 * M) + 1.0 / (12.0 * M * M) - 1.0 / (2.0 * M * M * M);
        case DiscrepancySeries::Digamma:
            return 1.0 - digamma(M) + std::log(M);
    }
    throw std::logic_error("expected_discrepancy: unknown series");
}

DiscrepancySeries auto_series(double M) {
    return M <= 5.0 ? DiscrepancySeries::LowM : DiscrepancySeries::Paper;
}

double empirical_discrepancy_mean(double M, long long n, uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("empirical_discrepancy_mean: n must be positive");
    GammaSampler rng(seed);
    const double scale = 1.0 / M;
    double acc = 0.0;
    for (long long k = 0; k < n; ++k) {
        const double eta = rng.gamma(M) * scale;
        acc += eta - std::log(eta);
    }
    return acc / static_cast<double>(n);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: argument must be positive");
    double acc = 0.0;
    while (x < 16.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series with Bernoulli coefficients through x^-10; shifting
    // the argument past 16 first keeps the truncation below double precision
    const double r = 1.0 / x;
    const double r2 = r * r;
    double s = std::log(x) - 0.5 * r;
    s -= r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 * (1.0 / 252.0 - r2 * (1.0 / 240.0 - r2 / 132.0))));
    return acc + s;
}

std::optional<double> psnr(const Image& u, const Image& ref) {
    if (!u.same_shape(ref)) throw std::invalid_argument("psnr: shape mismatch");
    double sq = 0.0;
    bool identical = true;
    for (size_t p = 0; p < u.v.size(); ++p) {
        const double d = u.v[p] - ref.v[p];
        if (d != 0.0) identical = false;
        sq += d * d;
    }
    if (identical) return std::nullopt;
    const double mn = static_cast<double>(u.v.size());
    return 10.0 * std::log10(255.0 * 255.0 * mn / sq);
}

}  // namespace speckletv
