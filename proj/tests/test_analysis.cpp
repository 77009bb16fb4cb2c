#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "omcf/analysis.hpp"

using namespace omcf;

namespace {

Trajectory constant_trajectory(const Grid& g, double value, std::initializer_list<double> times) {
    Trajectory t;
    for (double tt : times) t.snapshots.push_back({tt, ScalarField(g, value)});
    return t;
}

}  // namespace

TEST_CASE("monotone tables validate and interpolate") {
    MonotoneTable t;
    t.s = {-1.0, 0.0, 1.0};
    t.phi = {-2.0, 0.0, 0.5};
    CHECK_NOTHROW(t.validate());
    CHECK(t(0.0) == 0.0);
    CHECK(t(-0.5) == doctest::Approx(-1.0));
    CHECK(t(0.5) == doctest::Approx(0.25));
    CHECK(t(2.0) == doctest::Approx(1.0));    // end-slope extrapolation
    CHECK(t(-2.0) == doctest::Approx(-4.0));

    MonotoneTable bad = t;
    bad.phi = {-2.0, 0.1, 0.5};  // does not fix zero
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = t;
    bad.phi = {0.5, 0.0, -2.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = t;
    bad.s = {-1.0, 0.5, 1.0};  // no zero sample
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const Grid g = make_grid(5, 5, 0, 1, 0, 1);
    const ScalarField mapped = t.apply(ScalarField(g, 0.5));
    CHECK(mapped.values[0] == doctest::Approx(0.25));
}

TEST_CASE("order checks compare trajectories pointwise") {
    const Grid g = make_grid(9, 9, 0, 1, 0, 1);
    const Trajectory a = constant_trajectory(g, 0.5, {0.0, 0.1});
    CHECK(check_order(a, a).max_violation == 0.0);
    const Trajectory b = constant_trajectory(g, 0.6, {0.0, 0.1});
    CHECK(check_order(a, b).max_violation == doctest::Approx(-0.1));
    CHECK(check_order(b, a).max_violation == doctest::Approx(0.1));

    const Trajectory shorter = constant_trajectory(g, 0.5, {0.0});
    CHECK_THROWS_AS(check_order(a, shorter), std::invalid_argument);
    Trajectory wrong_time = a;
    wrong_time.snapshots[1].t = 0.2;
    CHECK_THROWS_AS(check_order(a, wrong_time), std::invalid_argument);
}

TEST_CASE("identity relabeling leaves the zero set untouched") {
    const Grid g = make_grid(65, 65, -1, 1, -1, 1);
    const ScalarField u0 = signed_distance_disks(g, {Disk{0, 0, 0.4}});
    // Two samples keep the interpolation formula exact: phi(x) = 0 + x * 1.
    MonotoneTable ident;
    ident.s = {0.0, 1.0};
    ident.phi = {0.0, 1.0};
    SolverConfig cfg;
    cfg.t_end = 0.02;
    cfg.record_times = {0.01, 0.02};
    const auto dists = zero_set_invariance(u0, ident, ObstacleSet::wide(g), cfg);
    REQUIRE(dists.size() == 3);
    for (double d : dists) CHECK(d == 0.0);
}

TEST_CASE("fattening metrics on simple fields") {
    const Grid g = make_grid(33, 33, 0, 1, 0, 1);
    const Trajectory ones = constant_trajectory(g, 1.0, {0.0, 0.5});
    const auto rows = fattening_metrics(ones, 0.5);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].band_area == 0.0);
    CHECK(rows[0].sublevel_area == 0.0);

    const Trajectory zeros = constant_trajectory(g, 0.0, {0.0});
    const auto full = fattening_metrics(zeros, 0.5);
    CHECK(full[0].band_area == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(full[0].sublevel_area == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(fattening_metrics(ones, 0.0), std::invalid_argument);
}

TEST_CASE("scheme consistency validates its step list") {
    const Grid g = make_grid(33, 33, -1, 1, -1, 1);
    const ScalarField u0(g, -1.0), obst(g, 1.0);
    SolverConfig pc;
    pc.t_end = 0.01;
    SchemeConfig sc;
    const auto levels = uniform_levels(3);
    CHECK_THROWS_AS(scheme_consistency(u0, obst, {0.01}, pc, sc, levels),
                    std::invalid_argument);
    CHECK_THROWS_AS(scheme_consistency(u0, obst, {0.01, 0.02}, pc, sc, levels),
                    std::invalid_argument);
    // Single-phase data: both flows are constant, distances vanish.
    const auto table = scheme_consistency(u0, obst, {0.01, 0.005}, pc, sc, levels);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].h == 0.01);
    for (const auto& r : table.rows) CHECK(r.sup_contour_distance == 0.0);
}

TEST_CASE("steady-state detection") {
    const Grid g = make_grid(9, 9, 0, 1, 0, 1);
    const Trajectory c = constant_trajectory(g, 0.3, {0.0, 0.1, 0.2});
    auto s = steady_state(c, 1e-6);
    REQUIRE(s.has_value());
    CHECK(s->t == 0.0);

    Trajectory moving = c;
    moving.snapshots[2].u = ScalarField(g, 0.8);
    CHECK(!steady_state(moving, 1e-6).has_value());

    Trajectory settles = c;
    settles.snapshots[1].u = ScalarField(g, 0.7);  // moves once, then rests
    settles.snapshots[2].u = ScalarField(g, 0.7);
    auto s2 = steady_state(settles, 1e-6);
    REQUIRE(s2.has_value());
    CHECK(s2->t == 0.1);

    CHECK_THROWS_AS(steady_state(c, 0.0), std::invalid_argument);
}

TEST_CASE("convex hull of a point cloud") {
    std::vector<std::array<double, 2>> pts = {
        {0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}};
    const auto hull = convex_hull(pts);
    REQUIRE(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(1.0));
    CHECK(point_in_convex_polygon(0.5, 0.5, hull));
    CHECK(point_in_convex_polygon(0.0, 0.0, hull, 1e-12));
    CHECK(!point_in_convex_polygon(1.5, 0.5, hull));
    // Counterclockwise orientation: positive cross products along the boundary.
    double signed_area = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& p = hull[i];
        const auto& q = hull[(i + 1) % hull.size()];
        signed_area += p[0] * q[1] - q[0] * p[1];
    }
    CHECK(signed_area > 0.0);
}

TEST_CASE("hull contour of a disk union") {
    const ContourSet c = disk_union_hull_contour({Disk{-0.5, 0, 0.2}, Disk{0.5, 0, 0.2}});
    REQUIRE(c.loops.size() == 1);
    CHECK(c.loops[0].closed);
    // The stadium hull spans [-0.7, 0.7] x [-0.2, 0.2].
    double xmin = 1e9, xmax = -1e9, ymax = -1e9;
    for (const auto& p : c.loops[0].points) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymax = std::max(ymax, p[1]);
    }
    CHECK(xmin == doctest::Approx(-0.7).epsilon(1e-3));
    CHECK(xmax == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(ymax == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("two-disk hull comparison settles on the stadium") {
    const Grid g = make_grid(129, 129, -1, 1, -1, 1);
    SolverConfig cfg;
    cfg.t_end = 1.2;  // the sup-norm decay goes exponential once the contour pins
    const std::vector<Disk> disks = {Disk{-0.25, 0, 0.18}, Disk{0.25, 0, 0.18}};
    const HullReport rep = hull_compare(disks, g, cfg);
    CHECK(rep.steady_reached);
    CHECK(rep.hausdorff_to_hull <= 2.0 * g.hx);
    CHECK(rep.convexity_defect >= 0.0);
    const double perim = 2.0 * (0.5 + M_PI * 0.18);
    CHECK(rep.convexity_defect <= 4.0 * g.hx * perim);
    CHECK_THROWS_AS(hull_compare({Disk{0, 0, 0.2}}, g, cfg), std::invalid_argument);
}

TEST_CASE("lipschitz growth of a constant trajectory") {
    const Grid g = make_grid(17, 17, 0, 1, 0, 1);
    Trajectory t;
    ScalarField affine(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) affine.at(i, j) = 0.5 * g.x(i);
    t.snapshots.push_back({0.0, affine});
    t.snapshots.push_back({1.0, affine});
    CHECK(lipschitz_growth(t, 0.0, 0.5) == doctest::Approx(1.0));
    CHECK(lipschitz_growth(t, 1.0, 0.5) == doctest::Approx(1.0));  // t = 0 dominates
    CHECK_THROWS_AS(lipschitz_growth(t, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lipschitz_growth(t, 0.0, 0.0), std::invalid_argument);
}
