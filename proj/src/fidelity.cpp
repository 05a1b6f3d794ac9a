#include "speckletv/fidelity.hpp"

#include <algorithm>
#include <cmath>

namespace speckletv {

FeasibleBox default_box(const FidelityModel& model) {
    double lo, hi;
    if (model.kind == FidelityKind::Exponential) {
        lo = std::log(minval(model.f));
        hi = std::log(maxval(model.f));
    } else {
        lo = minval(model.f);
        hi = maxval(model.f);
    }
    if (!(lo < hi)) {
        const double eps = 1e-12 * std::max(1.0, std::abs(lo));
        lo -= eps;
        hi += eps;
    }
    return FeasibleBox(lo, hi);
}

double fidelity_value(const FidelityModel& model, const Image& u) {
    if (!u.same_shape(model.f)) throw std::invalid_argument("fidelity_value: shape mismatch");
    double s = 0.0;
    if (model.kind == FidelityKind::Exponential) {
        for (size_t p = 0; p < u.v.size(); ++p) s += u.v[p] + model.f.v[p] * std::exp(-u.v[p]);
    } else {
        for (size_t p = 0; p < u.v.size(); ++p) {
            if (!(u.v[p] > 0.0)) throw std::domain_error("fidelity_value: nonpositive pixel under IDivergence");
            s += u.v[p] - model.f.v[p] * std::log(u.v[p]);
        }
    }
    return s;
}

Image fidelity_gradient(const FidelityModel& model, const Image& u) {
    if (!u.same_shape(model.f)) throw std::invalid_argument("fidelity_gradient: shape mismatch");
    Image g(u.rows, u.cols);
    if (model.kind == FidelityKind::Exponential) {
        for (size_t p = 0; p < u.v.size(); ++p) g.v[p] = 1.0 - model.f.v[p] * std::exp(-u.v[p]);
    } else {
        for (size_t p = 0; p < u.v.size(); ++p) {
            if (!(u.v[p] > 0.0)) throw std::domain_error("fidelity_gradient: nonpositive pixel under IDivergence");
            g.v[p] = 1.0 - model.f.v[p] / u.v[p];
        }
    }
    return g;
}

double hessian_lipschitz_bound(const FidelityModel& model, const FeasibleBox& box) {
    const double fmax = maxval(model.f);
    if (model.kind == FidelityKind::Exponential) return fmax * std::exp(-box.lo);
    if (!(box.lo > 0.0))
        throw std::domain_error("hessian_lipschitz_bound: IDivergence needs a positive lower bound");
    return fmax / (box.lo * box.lo);
}

Image project_box(const Image& u, const FeasibleBox& box) {
    Image out(u.rows, u.cols);
    for (size_t p = 0; p < u.v.size(); ++p) out.v[p] = std::clamp(u.v[p], box.lo, box.hi);
    return out;
}

}  // namespace speckletv
