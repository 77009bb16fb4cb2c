#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omcf/field_core.hpp"
#include "omcf/grid.hpp"
#include "omcf/variational.hpp"
#include "omcf/viscosity.hpp"

namespace omcf {

struct ComparisonReport {
    double max_violation = 0.0;  // sup over nodes and times of u - v for supposed u <= v
    double worst_time = 0.0;
    int worst_node = -1;
};

struct ConvergenceTable {
    struct Row {
        double h;
        double sup_contour_distance;
    };
    std::vector<Row> rows;
};

// Sampled strictly increasing map applied nodewise by linear interpolation.
struct MonotoneTable {
    std::vector<double> s;    // strictly increasing sample points
    std::vector<double> phi;  // strictly increasing values, phi = 0 where s = 0

    void validate() const;
    double operator()(double x) const;
    ScalarField apply(const ScalarField& f) const;
};

ComparisonReport check_order(const Trajectory& a, const Trajectory& b);

// Evolves u0 and relabel(u0) with relabeled obstacles (k = 0) and returns the
// Hausdorff distance between the zero contours at each record time.
std::vector<double> zero_set_invariance(const ScalarField& u0, const MonotoneTable& relabel,
                                        const ObstacleSet& obs, const SolverConfig& cfg);

struct FattingSample {
    double t;
    double band_area;      // area of {|u| <= band}
    double sublevel_area;  // area of {u <= 0}
};
std::vector<FattingSample> fattening_metrics(const Trajectory& traj, double band);

// For each h runs the stack evolution and the PDE on the same data and
// records the sup over shared record times of the zero-contour Hausdorff
// distance.
ConvergenceTable scheme_consistency(const ScalarField& u0, const ScalarField& obstacle_field,
                                    const std::vector<double>& h_list, const SolverConfig& pde_cfg,
                                    const SchemeConfig& scheme_cfg,
                                    const std::vector<double>& levels);

std::optional<Trajectory::Snapshot> steady_state(const Trajectory& traj, double tol);

struct HullReport {
    bool steady_reached = false;
    double steady_time = 0.0;
    double hausdorff_to_hull = 0.0;
    double convexity_defect = 0.0;
    ContourSet limit_contour;
    ContourSet hull_contour;
};

// Evolves a large sublevel set constrained from inside by the disk union and
// compares the steady zero contour with the geometric convex hull.
HullReport hull_compare(const std::vector<Disk>& omega_disks, const Grid& g,
                        const SolverConfig& cfg, double steady_tol = 1e-4);

// Max over record times of Lip(u(.,t)) / (L0 e^{L t}).
double lipschitz_growth(const Trajectory& traj, double L, double L0);

// Convex hull (monotone chain) of a point cloud, counterclockwise.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts);
double polygon_area(const std::vector<std::array<double, 2>>& poly);
bool point_in_convex_polygon(double x, double y, const std::vector<std::array<double, 2>>& poly,
                             double tol = 0.0);

// Hull of a union of disks as a dense closed polyline (circle sampling).
ContourSet disk_union_hull_contour(const std::vector<Disk>& disks, int samples_per_disk = 1024);

}  // namespace omcf
