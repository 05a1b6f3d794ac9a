#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "speckletv/fidelity.hpp"

using namespace speckletv;

namespace {

Image positive_image(std::mt19937_64& eng, int rows, int cols, double lo = 0.5, double hi = 3.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Image u(rows, cols);
    for (double& x : u.v) x = d(eng);
    return u;
}

}  // namespace

TEST_CASE("log-domain fit attains sum(log f + 1) at its pixelwise minimum u = log f") {
    std::mt19937_64 eng(3);
    Image f = positive_image(eng, 5, 4);
    FidelityModel m(FidelityKind::Exponential, f);
    Image u(5, 4);
    double want = 0.0;
    for (size_t p = 0; p < f.size(); ++p) {
        u.v[p] = std::log(f.v[p]);
        want += std::log(f.v[p]) + 1.0;
    }
    CHECK(fidelity_value(m, u) == doctest::Approx(want).epsilon(1e-13));
    // any perturbation increases the value (separable strict convexity)
    Image up = u;
    for (double& x : up.v) x += 0.05;
    CHECK(fidelity_value(m, up) > fidelity_value(m, u));
    Image dn = u;
    for (double& x : dn.v) x -= 0.05;
    CHECK(fidelity_value(m, dn) > fidelity_value(m, u));
}

TEST_CASE("intensity-domain fit attains sum(f - f log f) at u = f") {
    std::mt19937_64 eng(9);
    Image f = positive_image(eng, 4, 6);
    FidelityModel m(FidelityKind::IDivergence, f);
    double want = 0.0;
    for (double x : f.v) want += x - x * std::log(x);
    CHECK(fidelity_value(m, f) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("gradients match central differences in both models") {
    std::mt19937_64 eng(21);
    Image f = positive_image(eng, 5, 5);
    const double h = 1e-6;
    for (FidelityKind kind : {FidelityKind::Exponential, FidelityKind::IDivergence}) {
        FidelityModel m(kind, f);
        Image u = positive_image(eng, 5, 5, 0.8, 2.5);
        if (kind == FidelityKind::Exponential)
            for (double& x : u.v) x = std::log(x);
        Image g = fidelity_gradient(m, u);
        for (size_t p = 0; p < u.size(); ++p) {
            Image up = u, um = u;
            up.v[p] += h;
            um.v[p] -= h;
            double fd = (fidelity_value(m, up) - fidelity_value(m, um)) / (2.0 * h);
            double scale = std::max(1.0, std::fabs(g.v[p]));
            CHECK(std::fabs(g.v[p] - fd) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("both fits are convex along random segments") {
    std::mt19937_64 eng(77);
    Image f = positive_image(eng, 4, 4);
    for (FidelityKind kind : {FidelityKind::Exponential, FidelityKind::IDivergence}) {
        FidelityModel m(kind, f);
        for (int t = 0; t < 10; ++t) {
            Image a = positive_image(eng, 4, 4, 0.6, 2.0);
            Image b = positive_image(eng, 4, 4, 0.6, 2.0);
            if (kind == FidelityKind::Exponential) {
                for (double& x : a.v) x = std::log(x);
                for (double& x : b.v) x = std::log(x);
            }
            Image mid(4, 4);
            for (size_t p = 0; p < mid.size(); ++p) mid.v[p] = 0.5 * (a.v[p] + b.v[p]);
            CHECK(fidelity_value(m, mid) <=
                  0.5 * fidelity_value(m, a) + 0.5 * fidelity_value(m, b) + 1e-12);
        }
    }
}

TEST_CASE("default_box spans the data range in the model's own domain") {
    Image f(2, 2);
    f(0, 0) = 2.0; f(0, 1) = 8.0; f(1, 0) = 4.0; f(1, 1) = 3.0;
    FidelityModel me(FidelityKind::Exponential, f);
    FeasibleBox be = default_box(me);
    CHECK(be.lo == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(be.hi == doctest::Approx(std::log(8.0)).epsilon(1e-15));
    FidelityModel mi(FidelityKind::IDivergence, f);
    FeasibleBox bi = default_box(mi);
    CHECK(bi.lo == 2.0);
    CHECK(bi.hi == 8.0);
    // constant observation still yields a valid (widened) interval
    FidelityModel mc(FidelityKind::IDivergence, Image(3, 3, 5.0));
    FeasibleBox bc = default_box(mc);
    CHECK(bc.lo < 5.0);
    CHECK(bc.hi > 5.0);
}

TEST_CASE("hessian_lipschitz_bound follows the closed forms") {
    Image f(2, 2);
    f(0, 0) = 2.0; f(0, 1) = 8.0; f(1, 0) = 4.0; f(1, 1) = 3.0;
    FeasibleBox box(0.5, 3.0);
    FidelityModel me(FidelityKind::Exponential, f);
    CHECK(hessian_lipschitz_bound(me, box) ==
          doctest::Approx(8.0 * std::exp(-0.5)).epsilon(1e-15));
    FidelityModel mi(FidelityKind::IDivergence, f);
    CHECK(hessian_lipschitz_bound(mi, box) == doctest::Approx(8.0 / 0.25).epsilon(1e-15));
    // bound dominates the largest observed curvature over the box
    Image u(2, 2, 0.5);
    Image g0 = fidelity_gradient(me, u);
    Image u1 = u;
    for (double& x : u1.v) x += 1e-5;
    Image g1 = fidelity_gradient(me, u1);
    for (size_t p = 0; p < u.size(); ++p)
        CHECK(std::fabs(g1.v[p] - g0.v[p]) / 1e-5 <= hessian_lipschitz_bound(me, box) * (1 + 1e-6));
}

TEST_CASE("project_box clamps into the interval and fixes interior points") {
    FeasibleBox box(-1.0, 2.0);
    Image u(1, 3);
    u(0, 0) = -5.0; u(0, 1) = 0.5; u(0, 2) = 9.0;
    Image p = project_box(u, box);
    CHECK(p(0, 0) == -1.0);
    CHECK(p(0, 1) == 0.5);
    CHECK(p(0, 2) == 2.0);
}

TEST_CASE("constructors reject invalid inputs") {
    Image f(1, 2);
    f(0, 0) = 1.0; f(0, 1) = 0.0;
    CHECK_THROWS_AS(FidelityModel(FidelityKind::Exponential, f), std::domain_error);
    f(0, 1) = -2.0;
    CHECK_THROWS_AS(FidelityModel(FidelityKind::IDivergence, f), std::domain_error);
    CHECK_THROWS_AS(FeasibleBox(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FeasibleBox(2.0, -1.0), std::invalid_argument);

    Image good(1, 1, 4.0);
    FidelityModel mi(FidelityKind::IDivergence, good);
    Image zero(1, 1, 0.0);
    CHECK_THROWS_AS(fidelity_gradient(mi, zero), std::domain_error);
}
