#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "speckletv/noise.hpp"

using namespace speckletv;

TEST_CASE("same seed gives a bitwise identical multiplier field") {
    GammaNoiseSpec spec{8.0, 42};
    Image a = sample_gamma_field(spec, 16, 16);
    Image b = sample_gamma_field(spec, 16, 16);
    REQUIRE(a.size() == b.size());
    for (size_t p = 0; p < a.size(); ++p) CHECK(a.v[p] == b.v[p]);
    spec.seed = 43;
    Image c = sample_gamma_field(spec, 16, 16);
    int differs = 0;
    for (size_t p = 0; p < a.size(); ++p) differs += a.v[p] != c.v[p];
    CHECK(differs > 200);
}

TEST_CASE("multiplier field has unit mean and variance 1/M") {
    GammaNoiseSpec spec{4.0, 7};
    Image eta = sample_gamma_field(spec, 1000, 1000);
    double mean = 0.0;
    for (double x : eta.v) mean += x;
    mean /= static_cast<double>(eta.size());
    double var = 0.0;
    for (double x : eta.v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(eta.size() - 1);
    CHECK(std::fabs(mean - 1.0) < 0.005);
    CHECK(std::fabs(var - 0.25) < 0.005);
    CHECK(minval(eta) > 0.0);
}

TEST_CASE("M = 1 multipliers are exponential: P(eta > 1) near 1/e") {
    GammaNoiseSpec spec{1.0, 3};
    Image eta = sample_gamma_field(spec, 1000, 1000);
    long long over = 0;
    for (double x : eta.v) over += x > 1.0;
    double p = static_cast<double>(over) / static_cast<double>(eta.size());
    CHECK(std::fabs(p - std::exp(-1.0)) < 0.005);
}

TEST_CASE("expected_discrepancy matches frozen series values") {
    // 1 + 1/16 + 1/768 - 5/1024
    CHECK(expected_discrepancy(8.0, DiscrepancySeries::Paper) ==
          doctest::Approx(1.0589192708333).epsilon(1e-12));
    // 1 + 1/8 + 1/192 - 1/128
    CHECK(expected_discrepancy(4.0, DiscrepancySeries::LowM) ==
          doctest::Approx(1.1223958333).epsilon(1e-10));
    // 1 + 1/20 + 1/1200 - 5/8000
    CHECK(expected_discrepancy(10.0, DiscrepancySeries::Paper) ==
          doctest::Approx(1.0483333333).epsilon(1e-10));
    // exact value 1 - digamma(8) + log 8
    CHECK(expected_discrepancy(8.0, DiscrepancySeries::Digamma) ==
          doctest::Approx(1.0638000637242257).epsilon(1e-13));
}

TEST_CASE("digamma matches reference values and the recurrence") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-13));
    CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-13));
    for (double x : {0.3, 0.9, 1.7, 3.2, 7.5}) {
        CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
    }
}

TEST_CASE("auto_series switches from the low-look branch above M = 5") {
    CHECK(auto_series(1.0) == DiscrepancySeries::LowM);
    CHECK(auto_series(5.0) == DiscrepancySeries::LowM);
    CHECK(auto_series(5.5) == DiscrepancySeries::Paper);
    CHECK(auto_series(16.0) == DiscrepancySeries::Paper);
}

TEST_CASE("empirical discrepancy mean approaches the exact value") {
    double exact = expected_discrepancy(8.0, DiscrepancySeries::Digamma);
    double mc = empirical_discrepancy_mean(8.0, 200000, 17);
    // sd of the estimator is about 2e-4 here; 2e-3 is a ten-sigma band
    CHECK(std::fabs(mc - exact) < 2e-3);
}

namespace {

// regularized lower incomplete gamma P(a, x) by series / continued fraction,
// independent of the library under test
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term, ap = a;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x)
    double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

}  // namespace

TEST_CASE("sampled multipliers pass a KS test against the Gamma law") {
    const double M = 3.0;
    const int n = 2000;
    GammaNoiseSpec spec{M, 911};
    Image eta = sample_gamma_field(spec, 40, 50);
    std::vector<double> x(eta.v);
    std::sort(x.begin(), x.end());
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        // eta ~ Gamma(M, 1/M) so M * eta ~ Gamma(M, 1)
        double cdf = gamma_p(M, M * x[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        dmax = std::max(dmax, std::max(std::fabs(cdf - lo), std::fabs(cdf - hi)));
    }
    // 1% critical value for the one-sample statistic
    CHECK(dmax < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("psnr of identical images is undefined and shifts follow the formula") {
    Image u(4, 4, 100.0);
    CHECK(!psnr(u, u).has_value());
    Image shifted = u;
    for (double& t : shifted.v) t += 5.0;
    auto p = psnr(shifted, u);
    REQUIRE(p.has_value());
    CHECK(*p == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 25.0)).epsilon(1e-12));
    CHECK_THROWS_AS(psnr(u, Image(3, 3, 1.0)), std::invalid_argument);
}

TEST_CASE("apply_multiplicative_noise floors zero pixels and rejects negatives") {
    Image u(2, 2);
    u(0, 0) = 100.0; u(0, 1) = 0.0;
    u(1, 0) = 50.0;  u(1, 1) = 200.0;
    GammaNoiseSpec spec{8.0, 5};
    Image f = apply_multiplicative_noise(u, spec, 1.0);
    Image eta = sample_gamma_field(spec, 2, 2);
    CHECK(f(0, 0) == 100.0 * eta(0, 0));
    CHECK(f(0, 1) == 1.0);  // zero pixel replaced by the floor, no multiplier
    CHECK(f(1, 0) == 50.0 * eta(1, 0));
    CHECK(minval(f) > 0.0);

    Image bad(1, 1);
    bad(0, 0) = -3.0;
    CHECK_THROWS_AS(apply_multiplicative_noise(bad, spec), std::domain_error);
}
