#include "omcf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace omcf::kernels {

namespace {

constexpr double kFar = 1e20;

inline void curvature_row(const Grid& g, const double* u, double eps2, int j, double* out) {
    const int nx = g.nx;
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    const double i4hxy = 1.0 / (4.0 * g.hx * g.hy);
    const double* row = u + j * nx;
    for (int i = 1; i < nx - 1; ++i) {
        const double ux = (row[i + 1] - row[i - 1]) * i2hx;
        const double uy = (row[i + nx] - row[i - nx]) * i2hy;
        const double uxx = (row[i + 1] - 2.0 * row[i] + row[i - 1]) * ihx2;
        const double uyy = (row[i + nx] - 2.0 * row[i] + row[i - nx]) * ihy2;
        const double uxy =
            (row[i + nx + 1] - row[i + nx - 1] - row[i - nx + 1] + row[i - nx - 1]) * i4hxy;
        out[j * nx + i] =
            (uxx * uy * uy - 2.0 * ux * uy * uxy + uyy * ux * ux) / (ux * ux + uy * uy + eps2);
    }
}

inline void forcing_row(const Grid& g, const double* u, const double* k, int j, double* out) {
    const int nx = g.nx;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int i = 1; i < nx - 1; ++i) {
        const int c = j * nx + i;
        const double dmx = (u[c] - u[c - 1]) * ihx;
        const double dpx = (u[c + 1] - u[c]) * ihx;
        const double dmy = (u[c] - u[c - nx]) * ihy;
        const double dpy = (u[c + nx] - u[c]) * ihy;
        double g2;
        if (k[c] >= 0.0) {
            const double a = std::max(dmx, 0.0), b = std::min(dpx, 0.0);
            const double c1 = std::max(dmy, 0.0), d = std::min(dpy, 0.0);
            g2 = a * a + b * b + c1 * c1 + d * d;
        } else {
            const double a = std::min(dmx, 0.0), b = std::max(dpx, 0.0);
            const double c1 = std::min(dmy, 0.0), d = std::max(dpy, 0.0);
            g2 = a * a + b * b + c1 * c1 + d * d;
        }
        out[c] = -k[c] * std::sqrt(g2);
    }
}

inline void combine_row(const Grid& g, const double* u, const double* a, const double* b,
                        double dt, const double* lo, const double* up, int j, double* out) {
    const int nx = g.nx;
    for (int i = 0; i < nx; ++i) {
        const int c = j * nx + i;
        double v = u[c] + dt * (a[c] + b[c]);
        if (v < lo[c]) v = lo[c];
        if (v > up[c]) v = up[c];
        out[c] = v;
    }
}

inline void dual_row(const Grid& g, const double* vbar, double sigma, int j, double* px,
                     double* py) {
    const int nx = g.nx;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    const bool last_row = (j == g.ny - 1);
    for (int i = 0; i < nx; ++i) {
        const int c = j * nx + i;
        if (i < nx - 1) px[c] += sigma * (vbar[c + 1] - vbar[c]) * ihx;
        if (!last_row) py[c] += sigma * (vbar[c + nx] - vbar[c]) * ihy;
        const double n = std::sqrt(px[c] * px[c] + py[c] * py[c]);
        if (n > 1.0) {
            px[c] /= n;
            py[c] /= n;
        }
    }
}

inline void primal_row(const Grid& g, const double* px, const double* py, const double* w,
                       const std::uint8_t* mask, double tau, const double* v, int j,
                       double* v_out, double* vbar_out) {
    const int nx = g.nx;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int i = 0; i < nx; ++i) {
        const int c = j * nx + i;
        double div = px[c] * ihx + py[c] * ihy;
        if (i > 0) div -= px[c - 1] * ihx;
        if (j > 0) div -= py[c - nx] * ihy;
        double vn = v[c] + tau * (div - w[c]);
        if (vn < 0.0) vn = 0.0;
        if (vn > 1.0) vn = 1.0;
        if (mask[c]) vn = 1.0;
        v_out[c] = vn;
        vbar_out[c] = 2.0 * vn - v[c];
    }
}

// 1D squared distance transform (lower envelope of parabolas):
// out[q] = min_p ( (h*(q-p))^2 + f[p] ).
void dt1d(const double* f, int n, double h, double* out, int* v, double* z) {
    const double h2 = h * h;
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const int p = v[k];
            s = ((f[q] + h2 * q * q) - (f[p] + h2 * p * p)) / (2.0 * h2 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double d = h * (q - v[k]);
        out[q] = d * d + f[v[k]];
    }
}

inline void edt_row_pass(const Grid& g, const std::uint8_t* source, int j, double* tmp,
                         double* f, int* vbuf, double* zbuf) {
    const int nx = g.nx;
    for (int i = 0; i < nx; ++i) f[i] = source[j * nx + i] ? 0.0 : kFar;
    dt1d(f, nx, g.hx, tmp + j * nx, vbuf, zbuf);
}

inline void edt_col_pass(const Grid& g, const double* tmp, int i, double* dist2, double* f,
                         double* col, int* vbuf, double* zbuf) {
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j) f[j] = tmp[j * nx + i];
    dt1d(f, ny, g.hy, col, vbuf, zbuf);
    for (int j = 0; j < ny; ++j) dist2[j * nx + i] = col[j];
}

}  // namespace

void copy_boundary_from_interior(const Grid& g, double* out) {
    const int nx = g.nx, ny = g.ny;
    auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
    for (int i = 0; i < nx; ++i) {
        const int ic = clampi(i, 1, nx - 2);
        out[i] = out[1 * nx + ic];
        out[(ny - 1) * nx + i] = out[(ny - 2) * nx + ic];
    }
    for (int j = 1; j < ny - 1; ++j) {
        out[j * nx] = out[j * nx + 1];
        out[j * nx + nx - 1] = out[j * nx + nx - 2];
    }
}

void curvature_rhs_serial(const Grid& g, const double* u, double eps, double* out) {
    const double eps2 = eps * eps;
    for (int j = 1; j < g.ny - 1; ++j) curvature_row(g, u, eps2, j, out);
    copy_boundary_from_interior(g, out);
}

void curvature_rhs_omp(const Grid& g, const double* u, double eps, double* out) {
    const double eps2 = eps * eps;
#pragma omp parallel for schedule(static)
    for (int j = 1; j < g.ny - 1; ++j) curvature_row(g, u, eps2, j, out);
    copy_boundary_from_interior(g, out);
}

void forcing_rhs_serial(const Grid& g, const double* u, const double* k, double* out) {
    for (int j = 1; j < g.ny - 1; ++j) forcing_row(g, u, k, j, out);
    copy_boundary_from_interior(g, out);
}

void forcing_rhs_omp(const Grid& g, const double* u, const double* k, double* out) {
#pragma omp parallel for schedule(static)
    for (int j = 1; j < g.ny - 1; ++j) forcing_row(g, u, k, j, out);
    copy_boundary_from_interior(g, out);
}

void step_combine_serial(const Grid& g, const double* u, const double* a, const double* b,
                         double dt, const double* lo, const double* up, double* out) {
    for (int j = 0; j < g.ny; ++j) combine_row(g, u, a, b, dt, lo, up, j, out);
}

void step_combine_omp(const Grid& g, const double* u, const double* a, const double* b,
                      double dt, const double* lo, const double* up, double* out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) combine_row(g, u, a, b, dt, lo, up, j, out);
}

void tv_dual_step_serial(const Grid& g, const double* vbar, double sigma, double* px,
                         double* py) {
    for (int j = 0; j < g.ny; ++j) dual_row(g, vbar, sigma, j, px, py);
}

void tv_dual_step_omp(const Grid& g, const double* vbar, double sigma, double* px, double* py) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) dual_row(g, vbar, sigma, j, px, py);
}

void tv_primal_step_serial(const Grid& g, const double* px, const double* py, const double* w,
                           const std::uint8_t* mask, double tau, const double* v, double* v_out,
                           double* vbar_out) {
    for (int j = 0; j < g.ny; ++j) primal_row(g, px, py, w, mask, tau, v, j, v_out, vbar_out);
}

void tv_primal_step_omp(const Grid& g, const double* px, const double* py, const double* w,
                        const std::uint8_t* mask, double tau, const double* v, double* v_out,
                        double* vbar_out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) primal_row(g, px, py, w, mask, tau, v, j, v_out, vbar_out);
}

void edt_pass_serial(const Grid& g, const std::uint8_t* source, double* dist2) {
    const int n = std::max(g.nx, g.ny);
    std::vector<double> tmp(g.count()), f(n), col(n), z(n + 1);
    std::vector<int> v(n);
    for (int j = 0; j < g.ny; ++j) edt_row_pass(g, source, j, tmp.data(), f.data(), v.data(), z.data());
    for (int i = 0; i < g.nx; ++i)
        edt_col_pass(g, tmp.data(), i, dist2, f.data(), col.data(), v.data(), z.data());
}

void edt_pass_omp(const Grid& g, const std::uint8_t* source, double* dist2) {
    const int n = std::max(g.nx, g.ny);
    std::vector<double> tmp(g.count());
#pragma omp parallel
    {
        std::vector<double> f(n), col(n), z(n + 1);
        std::vector<int> v(n);
#pragma omp for schedule(static)
        for (int j = 0; j < g.ny; ++j)
            edt_row_pass(g, source, j, tmp.data(), f.data(), v.data(), z.data());
#pragma omp for schedule(static)
        for (int i = 0; i < g.nx; ++i)
            edt_col_pass(g, tmp.data(), i, dist2, f.data(), col.data(), v.data(), z.data());
    }
}

}  // namespace omcf::kernels
