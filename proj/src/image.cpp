#include "speckletv/image.hpp"

#include <algorithm>
#include <cmath>

namespace speckletv {

GradField gradient(const Image& u) {
    GradField g(u.rows, u.cols);
    const int m = u.rows, n = u.cols;
    for (int i = 0; i < m; ++i) {
        const double* row = &u.v[static_cast<size_t>(i) * n];
        double* gh = &g.h[static_cast<size_t>(i) * n];
        for (int j = 0; j < n - 1; ++j) gh[j] = row[j + 1] - row[j];
        gh[n - 1] = 0.0;
    }
    for (int i = 0; i < m - 1; ++i) {
        const double* row = &u.v[static_cast<size_t>(i) * n];
        const double* next = &u.v[static_cast<size_t>(i + 1) * n];
        double* gv = &g.v[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) gv[j] = next[j] - row[j];
    }
    return g;
}

Image divergence(const GradField& z) {
    const int m = z.rows, n = z.cols;
    Image d(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            if (j < n - 1) s += z.h[static_cast<size_t>(i) * n + j];
            if (j > 0) s -= z.h[static_cast<size_t>(i) * n + j - 1];
            if (i < m - 1) s += z.v[static_cast<size_t>(i) * n + j];
            if (i > 0) s -= z.v[static_cast<size_t>(i - 1) * n + j];
            d(i, j) = s;
        }
    }
    return d;
}

double tv_norm(const GradField& g) {
    double s = 0.0;
    for (size_t p = 0; p < g.size(); ++p) s += std::sqrt(g.h[p] * g.h[p] + g.v[p] * g.v[p]);
    return s;
}

GradField shrink(const GradField& g, double c) {
    if (c < 0.0) throw std::invalid_argument("shrink: threshold must be nonnegative");
    GradField out(g.rows, g.cols);
    for (size_t p = 0; p < g.size(); ++p) {
        const double a = g.h[p], b = g.v[p];
        const double len = std::sqrt(a * a + b * b);
        if (len > c) {
            const double scale = (len - c) / len;
            out.h[p] = scale * a;
            out.v[p] = scale * b;
        }
        // len <= c (including the zero vector) maps to zero
    }
    return out;
}

namespace {

inline int reflect_index(int p, int n) {
    if (p < 0) return -p - 1;
    if (p >= n) return 2 * n - p - 1;
    return p;
}

inline int wrap_index(int p, int n) {
    p %= n;
    return p < 0 ? p + n : p;
}

// 1-D windowed mean along one axis; each output is a direct sum over the
// window so no sliding-accumulator roundoff enters.
void box_pass(const std::vector<double>& in, std::vector<double>& out, int m, int n, int r,
              Padding pad, bool along_cols) {
    const int half = (r - 1) / 2;
    const double inv = 1.0 / r;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            if (along_cols) {
                for (int k = j - half; k <= j + half; ++k) {
                    const int jj = pad == Padding::Symmetric ? reflect_index(k, n) : wrap_index(k, n);
                    s += in[static_cast<size_t>(i) * n + jj];
                }
            } else {
                for (int k = i - half; k <= i + half; ++k) {
                    const int ii = pad == Padding::Symmetric ? reflect_index(k, m) : wrap_index(k, m);
                    s += in[static_cast<size_t>(ii) * n + j];
                }
            }
            out[static_cast<size_t>(i) * n + j] = s * inv;
        }
    }
}

}  // namespace

Image box_mean_filter(const Image& x, int r, Padding pad) {
    if (r < 1 || r % 2 == 0) throw std::invalid_argument("box_mean_filter: window must be odd and positive");
    if (r > std::min(x.rows, x.cols)) throw std::invalid_argument("box_mean_filter: window exceeds image");
    Image tmp(x.rows, x.cols), out(x.rows, x.cols);
    box_pass(x.v, tmp.v, x.rows, x.cols, r, pad, true);
    box_pass(tmp.v, out.v, x.rows, x.cols, r, pad, false);
    return out;
}

double minval(const Image& u) { return *std::min_element(u.v.begin(), u.v.end()); }

double maxval(const Image& u) { return *std::max_element(u.v.begin(), u.v.end()); }

double norm2(const Image& u) {
    double s = 0.0;
    for (double x : u.v) s += x * x;
    return std::sqrt(s);
}

double norm2(const GradField& g) {
    double s = 0.0;
    for (size_t p = 0; p < g.size(); ++p) s += g.h[p] * g.h[p] + g.v[p] * g.v[p];
    return std::sqrt(s);
}

bool all_finite(const Image& u) {
    for (double x : u.v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace speckletv
