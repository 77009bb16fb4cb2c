#pragma once

#include <cstdint>

#include "omcf/grid.hpp"

namespace omcf::kernels {

// Data-parallel node kernels. Every kernel comes in a serial reference
// variant and an OpenMP variant sharing the same per-row body, so the two
// produce bitwise-identical output; tests and the benchmark target compare
// them. High-level code calls the omp variant.

// (u_xx u_y^2 - 2 u_x u_y u_xy + u_yy u_x^2) / (u_x^2 + u_y^2 + eps^2) at
// interior nodes, central differences; boundary nodes copy the nearest
// interior value.
void curvature_rhs_serial(const Grid& g, const double* u, double eps, double* out);
void curvature_rhs_omp(const Grid& g, const double* u, double eps, double* out);

// -k |grad u| with Godunov upwinding, branch chosen by the sign of k per
// node; boundary nodes copy the nearest interior value.
void forcing_rhs_serial(const Grid& g, const double* u, const double* k, double* out);
void forcing_rhs_omp(const Grid& g, const double* u, const double* k, double* out);

// out = clamp(u + dt*(a + b), lo, up), lower clamp first.
void step_combine_serial(const Grid& g, const double* u, const double* a, const double* b,
                         double dt, const double* lo, const double* up, double* out);
void step_combine_omp(const Grid& g, const double* u, const double* a, const double* b,
                      double dt, const double* lo, const double* up, double* out);

// Chambolle-Pock dual ascent: p += sigma * grad(vbar) (forward differences,
// zero row/column at the far boundary), then projection onto |p| <= 1.
void tv_dual_step_serial(const Grid& g, const double* vbar, double sigma, double* px,
                         double* py);
void tv_dual_step_omp(const Grid& g, const double* vbar, double sigma, double* px, double* py);

// Primal descent: v_out = clamp01(v + tau*(div p - w)); mask nodes are set
// to 1.  vbar_out = 2 v_out - v.
void tv_primal_step_serial(const Grid& g, const double* px, const double* py, const double* w,
                           const std::uint8_t* mask, double tau, const double* v, double* v_out,
                           double* vbar_out);
void tv_primal_step_omp(const Grid& g, const double* px, const double* py, const double* w,
                        const std::uint8_t* mask, double tau, const double* v, double* v_out,
                        double* vbar_out);

// Exact squared Euclidean distance transform, separable lower-envelope
// passes.  dist2 holds squared distance to the nearest source node on exit.
// Row pass seeds from the source mask; column pass finishes.
void edt_pass_serial(const Grid& g, const std::uint8_t* source, double* dist2);
void edt_pass_omp(const Grid& g, const std::uint8_t* source, double* dist2);

// Fills boundary nodes of a field whose interior is already computed.
void copy_boundary_from_interior(const Grid& g, double* out);

}  // namespace omcf::kernels
