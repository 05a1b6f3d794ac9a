#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace speckletv {

/// Dense grayscale image, row-major, double precision.
struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Image() = default;
    Image(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {
        if (r <= 0 || c <= 0) throw std::invalid_argument("Image: dimensions must be positive");
    }

    double& operator()(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
    size_t size() const { return v.size(); }
    bool same_shape(const Image& o) const { return rows == o.rows && cols == o.cols; }
};

/// Two-component field holding per-pixel horizontal and vertical differences.
struct GradField {
    int rows = 0;
    int cols = 0;
    std::vector<double> h;
    std::vector<double> v;

    GradField() = default;
    GradField(int r, int c)
        : rows(r), cols(c), h(static_cast<size_t>(r) * c, 0.0), v(static_cast<size_t>(r) * c, 0.0) {
        if (r <= 0 || c <= 0) throw std::invalid_argument("GradField: dimensions must be positive");
    }

    size_t size() const { return h.size(); }
    bool same_shape(const GradField& o) const { return rows == o.rows && cols == o.cols; }
};

enum class Padding { Symmetric, Periodic };

/// Forward differences with homogeneous Neumann boundary (last row/column of
/// each component is zero): h(i,j) = u(i,j+1) - u(i,j), v(i,j) = u(i+1,j) - u(i,j).
GradField gradient(const Image& u);

/// Negative adjoint of gradient(): <gradient(u), z> = -<u, divergence(z)> holds
/// exactly at the discrete level for every u, z.
Image divergence(const GradField& z);

/// Isotropic total variation of a difference field: sum of sqrt(h^2 + v^2).
double tv_norm(const GradField& g);

/// Per-pixel soft shrinkage of the vector (h, v) toward zero by threshold c;
/// a zero-length vector maps to zero.
GradField shrink(const GradField& g, double c);

/// r x r windowed mean, r odd, r <= min(rows, cols). Symmetric padding
/// reflects edge pixels (index -1 maps to 0); periodic padding wraps.
Image box_mean_filter(const Image& x, int r, Padding pad = Padding::Symmetric);

double minval(const Image& u);
double maxval(const Image& u);
/// Frobenius norm.
double norm2(const Image& u);
double norm2(const GradField& g);
bool all_finite(const Image& u);

}  // namespace speckletv
