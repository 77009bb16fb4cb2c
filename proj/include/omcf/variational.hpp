#pragma once

#include <string>
#include <vector>

#include "omcf/grid.hpp"
#include "omcf/viscosity.hpp"

namespace omcf {

struct SchemeConfig {
    double h = 0.005;          // time step of the minimizing-movement scheme
    double gap_tol = 1e-6;     // relative duality-gap stopping tolerance
    int max_iters = 20000;
    double theta_generic = 0.5;
    double theta_max = 1e-3;   // low threshold approximating the maximal minimizer

    void validate() const;
};

struct RelaxedSolution {
    ScalarField v;        // values in [0,1], 1 on every constrained node
    double gap = 0.0;     // achieved relative duality gap
    int iters = 0;
    bool converged = false;
};

// min over v in [0,1], v = 1 on mask, of TV(v) + int w v.  Isotropic TV,
// forward differences, Neumann boundary, Chambolle-Pock iteration; stops on
// the relative duality gap.  warm_start, when nonnull, seeds the primal
// iterate (mask and box constraints are re-imposed).
RelaxedSolution tv_solve(const ScalarField& w, const BinarySet& mask, const SchemeConfig& cfg,
                         const ScalarField* warm_start = nullptr);

// Discrete energy TV(1_F or v) + int w v of an arbitrary field, same
// discretization as tv_solve; used by the coarea-consistency checks.
double tv_energy(const ScalarField& v, const ScalarField& w);

// One minimizing-movement step: minimize Per(F) + (1/h) int_F d_E over
// F containing omega, realized by tv_solve with w = d_E/h followed by
// thresholding.  Thresholds at theta_generic; the larger theta_max superlevel
// is taken instead when its discrete geometric energy ties within
// duality-gap-scale noise, approximating the maximal minimizer on energy
// plateaus without fattening generic steps.
BinarySet th_step(const BinarySet& e, const BinarySet& omega, const SchemeConfig& cfg,
                  const ScalarField* warm_start = nullptr,
                  RelaxedSolution* solution_out = nullptr);

struct FlowRecord {
    double t;
    BinarySet set;
};

// Iterates th_step floor(t_end/h) times, recording every step.
std::vector<FlowRecord> flow(const BinarySet& e0, const BinarySet& omega,
                             const SchemeConfig& cfg, double t_end);

// (R + sqrt(R^2 - 4 n h)) / 2, valid for h <= R^2/(4n).
double ball_step_radius(double R, double h, int n);

// 1D radial oracle: minimizes 2 pi r + (2 pi / h) int_0^r rho (rho - R) drho
// by scanning r; independent route used to adjudicate the ball-step constant.
double ball_step_radius_oracle(double R, double h, double r_max, double dr = 1e-5);

// Level-stack evolution: per-level flows reconstructed into a function-valued
// trajectory with cumulative-union nesting.
Trajectory stack_evolution(const ScalarField& u0, const ScalarField& obstacle_field,
                           const SchemeConfig& cfg, double t_end,
                           const std::vector<double>& levels);

// Nodes in T_{h_coarse}(E) \ T_{h_fine}(E); the scheme predicts none up to
// discretization.
int h_monotonicity_check(const BinarySet& e, const BinarySet& omega, double h_coarse,
                         double h_fine, const SchemeConfig& cfg);

bool subset_of(const BinarySet& a, const BinarySet& b);

// Nodes of a outside b and farther than `band` cells from b's boundary.
int violations_beyond_band(const BinarySet& a, const BinarySet& b, int band_cells = 1);

std::vector<double> uniform_levels(int count, double lo = -1.0, double hi = 1.0);

// One field file per step plus an index of (step, time, filename, count).
void write_flow(const std::vector<FlowRecord>& records, const std::string& dir,
                std::vector<std::string>* written = nullptr);

}  // namespace omcf
