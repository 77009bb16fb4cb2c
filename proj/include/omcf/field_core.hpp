#pragma once

#include <vector>

#include "omcf/grid.hpp"

namespace omcf {

struct Disk {
    double cx = 0.0, cy = 0.0;
    double r = 0.0;
};

// Pointwise min over disks of |p - center| - radius; negative inside the
// union, positive outside.
ScalarField signed_distance_disks(const Grid& g, const std::vector<Disk>& disks);

// Signed distance on nodes: +/- distance to the nearest node of the opposite
// phase, negative inside.  Requires at least one node of each phase.
// Brute-force all-pairs below 128x128 nodes, exact separable EDT above; the
// two agree to floating-point rounding.
ScalarField signed_distance_to_set(const BinarySet& e);

// All-pairs reference used as the oracle in tests.
ScalarField signed_distance_brute_force(const BinarySet& e);

// Marching squares with per-cell linear interpolation; saddle cells resolved
// by the sign of the bilinear value at the cell center.
ContourSet extract_contour(const ScalarField& u, double level);

// Symmetric Hausdorff distance, vertices of one side against segments of the
// other.  Both sides must be nonempty.
double hausdorff(const ContourSet& a, const ContourSet& b);

// Cell-counting measure of {u <= level}: hx*hy times the corner fraction.
double sublevel_area(const ScalarField& u, double level);

BinarySet threshold_sublevel(const ScalarField& u, double level);

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by);

}  // namespace omcf
