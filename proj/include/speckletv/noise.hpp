#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "speckletv/image.hpp"

namespace speckletv {

/// Gamma multiplier field: shape M, scale 1/M (unit mean, variance 1/M).
struct GammaNoiseSpec {
    double M = 1.0;
    uint64_t seed = 0;
};

/// Deterministic Gamma sampler with a fully specified pipeline:
/// std::mt19937_64 words -> 53-bit uniforms in (0,1) -> Box-Muller normals ->
/// Marsaglia-Tsang acceptance for Gamma(shape, 1). The same seed always
/// yields the same sequence; no std::*_distribution is involved.
class GammaSampler {
public:
    explicit GammaSampler(uint64_t seed) : eng_(seed) {}
    double uniform();  // open interval (0,1)
    double normal();
    double gamma(double shape);  // scale 1

private:
    std::mt19937_64 eng_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// i.i.d. field of Gamma(M, 1/M) multipliers.
Image sample_gamma_field(const GammaNoiseSpec& spec, int rows, int cols);

/// f = u .* eta; pixels where u == 0 are set to `floor` instead (default 1),
/// keeping the output strictly positive. Negative u is rejected.
Image apply_multiplicative_noise(const Image& u, const GammaNoiseSpec& spec, double floor = 1.0);

enum class DiscrepancySeries { Paper, LowM, Digamma };

/// Expected value of eta - log(eta) for eta ~ Gamma(M, 1/M).
/// Paper: 1 + 1/(2M) + 1/(12M^2) - 5/(2M^3)
/// LowM:  1 + 1/(2M) + 1/(12M^2) - 1/(2M^3)
/// Digamma (exact): 1 - digamma(M) + log(M)
double expected_discrepancy(double M, DiscrepancySeries series);

/// Series the benchmark configuration uses by default: LowM for M <= 5,
/// Paper otherwise.
DiscrepancySeries auto_series(double M);

/// Monte-Carlo mean of eta - log(eta) over n samples.
double empirical_discrepancy_mean(double M, long long n, uint64_t seed);

double digamma(double x);

/// Peak signal-to-noise ratio on the 0..255 scale; nullopt when the images
/// are bitwise identical (the ratio is infinite).
std::optional<double> psnr(const Image& u, const Image& ref);

}  // namespace speckletv
