#include "omcf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace omcf {

void MonotoneTable::validate() const {
    if (s.size() != phi.size() || s.size() < 2)
        throw std::invalid_argument("MonotoneTable: need matching sample lists of size >= 2");
    bool has_zero = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && (!(s[i] > s[i - 1]) || !(phi[i] > phi[i - 1])))
            throw std::invalid_argument("MonotoneTable: samples must be strictly increasing");
        if (s[i] == 0.0) {
            if (phi[i] != 0.0) throw std::invalid_argument("MonotoneTable: must fix 0");
            has_zero = true;
        }
    }
    if (!has_zero) throw std::invalid_argument("MonotoneTable: must contain the sample s = 0");
}

double MonotoneTable::operator()(double x) const {
    const std::size_t n = s.size();
    std::size_t hi;
    if (x <= s.front())
        hi = 1;  // extrapolate with the first slope
    else if (x >= s.back())
        hi = n - 1;  // extrapolate with the last slope
    else
        hi = std::upper_bound(s.begin(), s.end(), x) - s.begin();
    const double t = (x - s[hi - 1]) / (s[hi] - s[hi - 1]);
    return phi[hi - 1] + t * (phi[hi] - phi[hi - 1]);
}

ScalarField MonotoneTable::apply(const ScalarField& f) const {
    ScalarField out(f.grid);
    for (int c = 0; c < f.grid.count(); ++c) out.values[c] = (*this)(f.values[c]);
    return out;
}

ComparisonReport check_order(const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size())
        throw std::invalid_argument("check_order: trajectories differ in length");
    ComparisonReport rep;
    rep.max_violation = -std::numeric_limits<double>::max();
    for (std::size_t t = 0; t < a.snapshots.size(); ++t) {
        const auto& sa = a.snapshots[t];
        const auto& sb = b.snapshots[t];
        if (!(sa.u.grid == sb.u.grid)) throw std::invalid_argument("check_order: grid mismatch");
        if (std::fabs(sa.t - sb.t) > 1e-12)
            throw std::invalid_argument("check_order: record-time mismatch");
        for (int c = 0; c < sa.u.grid.count(); ++c) {
            const double d = sa.u.values[c] - sb.u.values[c];
            if (d > rep.max_violation) {
                rep.max_violation = d;
                rep.worst_time = sa.t;
                rep.worst_node = c;
            }
        }
    }
    return rep;
}

std::vector<double> zero_set_invariance(const ScalarField& u0, const MonotoneTable& relabel,
                                        const ObstacleSet& obs, const SolverConfig& cfg) {
    relabel.validate();
    const ScalarField k(u0.grid, 0.0);
    const Trajectory base = evolve(u0, obs, k, cfg);

    std::vector<ObstacleSet::Keyframe> frames;
    for (const auto& f : obs.keyframes())
        frames.push_back({f.t, relabel.apply(f.lower), relabel.apply(f.upper)});
    const ObstacleSet robs(std::move(frames));
    const Trajectory relab = evolve(relabel.apply(u0), robs, k, cfg);

    std::vector<double> dists;
    for (std::size_t t = 0; t < base.snapshots.size(); ++t) {
        const ContourSet ca = extract_contour(base.snapshots[t].u, 0.0);
        const ContourSet cb = extract_contour(relab.snapshots[t].u, 0.0);
        if (ca.empty() && cb.empty())
            dists.push_back(0.0);
        else if (ca.empty() || cb.empty())
            dists.push_back(std::numeric_limits<double>::infinity());
        else
            dists.push_back(hausdorff(ca, cb));
    }
    return dists;
}

std::vector<FattingSample> fattening_metrics(const Trajectory& traj, double band) {
    if (!(band > 0.0)) throw std::invalid_argument("fattening_metrics: band must be > 0");
    std::vector<FattingSample> out;
    for (const auto& s : traj.snapshots) {
        ScalarField absu = s.u;
        for (double& v : absu.values) v = std::fabs(v);
        out.push_back({s.t, sublevel_area(absu, band), sublevel_area(s.u, 0.0)});
    }
    return out;
}

ConvergenceTable scheme_consistency(const ScalarField& u0, const ScalarField& obstacle_field,
                                    const std::vector<double>& h_list, const SolverConfig& pde_cfg,
                                    const SchemeConfig& scheme_cfg,
                                    const std::vector<double>& levels) {
    if (h_list.size() < 2)
        throw std::invalid_argument("scheme_consistency: need at least 2 step sizes");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw std::invalid_argument("scheme_consistency: h list must be strictly decreasing");

    const Grid& g = u0.grid;
    double lo_val = *std::min_element(u0.values.begin(), u0.values.end());
    lo_val = std::min(lo_val,
                      *std::min_element(obstacle_field.values.begin(), obstacle_field.values.end()));
    const ObstacleSet obs =
        ObstacleSet::constant(ScalarField(g, lo_val - 1.0), obstacle_field);
    const ScalarField k(g, 0.0);

    ConvergenceTable table;
    for (double h : h_list) {
        SchemeConfig sc = scheme_cfg;
        sc.h = h;
        const Trajectory stack = stack_evolution(u0, obstacle_field, sc, pde_cfg.t_end, levels);

        SolverConfig pc = pde_cfg;
        pc.record_times.clear();
        for (const auto& s : stack.snapshots) pc.record_times.push_back(s.t);
        const Trajectory pde = evolve(u0, obs, k, pc);

        // The reconstructed stack field is a staircase: its zero crossing is
        // the jump between the level-0 set and the next level up, so extract
        // at the midpoint value; interpolation then lands halfway between the
        // node layers, the unbiased estimate of the set boundary.  Extracting
        // at 0.0 would pin the contour to the inside nodes, half a cell in.
        double stack_iso = 0.0;
        {
            double l0 = -std::numeric_limits<double>::infinity();
            double l1 = std::numeric_limits<double>::infinity();
            for (double s : levels) {
                if (s <= 0.0) l0 = std::max(l0, s);
                else l1 = std::min(l1, s);
            }
            if (std::isfinite(l0) && std::isfinite(l1)) stack_iso = 0.5 * (l0 + l1);
        }
        double sup = 0.0;
        for (std::size_t t = 0; t < stack.snapshots.size(); ++t) {
            const ContourSet ca = extract_contour(stack.snapshots[t].u, stack_iso);
            const ContourSet cb = extract_contour(pde.snapshots[t].u, 0.0);
            if (ca.empty() && cb.empty()) continue;
            if (ca.empty() || cb.empty()) {
                sup = std::numeric_limits<double>::infinity();
                break;
            }
            sup = std::max(sup, hausdorff(ca, cb));
        }
        table.rows.push_back({h, sup});
    }
    return table;
}

std::optional<Trajectory::Snapshot> steady_state(const Trajectory& traj, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("steady_state: tol must be > 0");
    const auto& snaps = traj.snapshots;
    if (snaps.empty()) return std::nullopt;
    if (snaps.size() == 1) return snaps.front();
    std::size_t last_moving = 0;  // index of the last pair (t-1, t) with diff > tol
    for (std::size_t t = 1; t < snaps.size(); ++t) {
        double diff = 0.0;
        for (int c = 0; c < snaps[t].u.grid.count(); ++c)
            diff = std::max(diff, std::fabs(snaps[t].u.values[c] - snaps[t - 1].u.values[c]));
        if (diff > tol) last_moving = t;
    }
    if (last_moving == snaps.size() - 1) return std::nullopt;  // still moving at the end
    return snaps[last_moving];
}

std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<std::array<double, 2>>& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return std::fabs(a) / 2.0;
}

bool point_in_convex_polygon(double x, double y, const std::vector<std::array<double, 2>>& poly,
                             double tol) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        const double cr = (q[0] - p[0]) * (y - p[1]) - (q[1] - p[1]) * (x - p[0]);
        if (cr < -tol) return false;  // counterclockwise polygon
    }
    return true;
}

ContourSet disk_union_hull_contour(const std::vector<Disk>& disks, int samples_per_disk) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(disks.size() * samples_per_disk);
    for (const auto& d : disks)
        for (int s = 0; s < samples_per_disk; ++s) {
            const double a = 2.0 * M_PI * s / samples_per_disk;
            pts.push_back({d.cx + d.r * std::cos(a), d.cy + d.r * std::sin(a)});
        }
    auto hull = convex_hull(std::move(pts));
    ContourSet c;
    Polyline line;
    line.points = std::move(hull);
    line.closed = true;
    c.loops.push_back(std::move(line));
    return c;
}

HullReport hull_compare(const std::vector<Disk>& omega_disks, const Grid& g,
                        const SolverConfig& cfg, double steady_tol) {
    if (omega_disks.size() < 2)
        throw std::invalid_argument("hull_compare: need at least 2 disks");

    const ScalarField u_plus = signed_distance_disks(g, omega_disks);
    double cx = 0.0, cy = 0.0;
    for (const auto& d : omega_disks) {
        cx += d.cx;
        cy += d.cy;
    }
    cx /= omega_disks.size();
    cy /= omega_disks.size();
    double big_r = 0.0;
    for (const auto& d : omega_disks)
        big_r = std::max(big_r, std::hypot(d.cx - cx, d.cy - cy) + d.r);
    const double extent = std::min((g.nx - 1) * g.hx, (g.ny - 1) * g.hy);
    big_r = std::min(big_r + 0.15 * extent, 0.42 * extent);

    ScalarField u0 = signed_distance_disks(g, {Disk{cx, cy, big_r}});
    for (int c = 0; c < g.count(); ++c) u0.values[c] = std::min(u0.values[c], u_plus.values[c]);

    const ObstacleSet obs = ObstacleSet::constant(ScalarField(g, -1e3), u_plus);
    SolverConfig run_cfg = cfg;
    if (run_cfg.record_times.empty()) {
        for (int i = 0; i <= 60; ++i) run_cfg.record_times.push_back(cfg.t_end * i / 60.0);
    }
    const Trajectory traj = evolve(u0, obs, ScalarField(g, 0.0), run_cfg);

    HullReport rep;
    auto steady = steady_state(traj, steady_tol);
    const Trajectory::Snapshot& limit = steady ? *steady : traj.snapshots.back();
    rep.steady_reached = steady.has_value();
    rep.steady_time = limit.t;

    rep.limit_contour = extract_contour(limit.u, 0.0);
    rep.hull_contour = disk_union_hull_contour(omega_disks);
    if (!rep.limit_contour.empty())
        rep.hausdorff_to_hull = hausdorff(rep.limit_contour, rep.hull_contour);
    else
        rep.hausdorff_to_hull = std::numeric_limits<double>::infinity();

    // Convexity defect via node counting so the hull count dominates exactly.
    std::vector<std::array<double, 2>> inside_pts;
    int n_set = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (limit.u.at(i, j) <= 0.0) {
                inside_pts.push_back({g.x(i), g.y(j)});
                ++n_set;
            }
    if (inside_pts.size() >= 3) {
        const auto hull = convex_hull(inside_pts);
        int n_hull = 0;
        const double tol = 1e-9 * extent;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (point_in_convex_polygon(g.x(i), g.y(j), hull, tol)) ++n_hull;
        rep.convexity_defect = (n_hull - n_set) * g.hx * g.hy;
    }
    return rep;
}

double lipschitz_growth(const Trajectory& traj, double L, double L0) {
    if (L < 0.0 || !(L0 > 0.0)) throw std::invalid_argument("lipschitz_growth: bad constants");
    double worst = 0.0;
    for (const auto& s : traj.snapshots)
        worst = std::max(worst, discrete_lipschitz(s.u) / (L0 * std::exp(L * s.t)));
    return worst;
}

}  // namespace omcf
