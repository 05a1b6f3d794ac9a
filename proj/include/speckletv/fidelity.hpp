#pragma once

#include "speckletv/image.hpp"

namespace speckletv {

enum class FidelityKind { Exponential, IDivergence };

/// Data-fit term for multiplicative-noise removal against observation f > 0.
/// Exponential works on u = log(intensity): sum(u + f exp(-u)).
/// IDivergence works on the intensity itself:  sum(u - f log u), u > 0.
struct FidelityModel {
    FidelityKind kind;
    Image f;

    FidelityModel(FidelityKind k, Image obs) : kind(k), f(std::move(obs)) {
        for (double x : f.v)
            if (!(x > 0.0)) throw std::domain_error("FidelityModel: observation must be strictly positive");
    }
};

/// Closed interval the iterates may be projected onto.
struct FeasibleBox {
    double lo;
    double hi;

    FeasibleBox(double l, double h) : lo(l), hi(h) {
        if (!(l < h)) throw std::invalid_argument("FeasibleBox: lo must be less than hi");
    }
};

/// Natural box for the model: log-range of f for Exponential, range of f
/// for IDivergence. Degenerate (constant f) widens by a tiny margin.
FeasibleBox default_box(const FidelityModel& model);

double fidelity_value(const FidelityModel& model, const Image& u);

Image fidelity_gradient(const FidelityModel& model, const Image& u);

/// Lipschitz constant of the fidelity gradient over the box:
/// max(f) * exp(-lo) for Exponential, max(f) / lo^2 for IDivergence (lo > 0).
double hessian_lipschitz_bound(const FidelityModel& model, const FeasibleBox& box);

Image project_box(const Image& u, const FeasibleBox& box);

}  // namespace speckletv
