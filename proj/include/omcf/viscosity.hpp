#pragma once

#include <string>
#include <vector>

#include "omcf/grid.hpp"

namespace omcf {

// Lower/upper obstacle pair, optionally keyframed in time.
class ObstacleSet {
public:
    struct Keyframe {
        double t;
        ScalarField lower;
        ScalarField upper;
    };

    explicit ObstacleSet(std::vector<Keyframe> keyframes);
    static ObstacleSet constant(ScalarField lower, ScalarField upper);
    // lower = -width, upper = +width everywhere (effectively unconstrained).
    static ObstacleSet wide(const Grid& g, double width = 1e3);

    const Grid& grid() const { return frames_.front().lower.grid; }
    const std::vector<Keyframe>& keyframes() const { return frames_; }

    // Linear interpolation between bracketing keyframes, clamped outside.
    std::pair<ScalarField, ScalarField> at(double t) const;

private:
    std::vector<Keyframe> frames_;
};

struct SolverConfig {
    double eps = 1e-6;  // gradient regularization
    double cfl = 0.5;   // in (0, 1]
    double t_end = 0.0;
    std::vector<double> record_times;  // within [0, t_end]

    double dt(const Grid& g) const;
    void validate(const Grid& g) const;
};

struct Trajectory {
    struct Snapshot {
        double t;
        ScalarField u;
    };
    std::vector<Snapshot> snapshots;
};

// u_xx u_y^2 - 2 u_x u_y u_xy + u_yy u_x^2 over (|grad u|^2 + eps^2).
ScalarField curvature_rhs(const ScalarField& u, double eps);

// -k |grad u| with Godunov upwinding.
ScalarField forcing_rhs(const ScalarField& u, const ScalarField& k);

// One explicit step followed by obstacle clamping (lower first, then upper).
ScalarField step(const ScalarField& u, const ObstacleSet& obs, const ScalarField& k, double t,
                 double dt, double eps);

Trajectory evolve(const ScalarField& u0, const ObstacleSet& obs, const ScalarField& k,
                  const SolverConfig& cfg);

// Max over sampled times and interior nodes (gradient above eps) of the
// subsolution residual of h(x,t) = -(|x-xi|^2 + 4t) under the discrete
// curvature operator.
double barrier_residual(const Grid& g, double xi_x, double xi_y,
                        const std::vector<double>& times, double eps);

// Max forward-difference quotient over the grid.
double discrete_lipschitz(const ScalarField& u);

// One field file per snapshot, named u_t<time>.dat, plus index.txt.
void write_trajectory(const Trajectory& traj, const std::string& dir,
                      std::vector<std::string>* written = nullptr);

}  // namespace omcf
