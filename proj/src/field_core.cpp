#include "omcf/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "omcf/kernels.hpp"

namespace omcf {

ScalarField signed_distance_disks(const Grid& g, const std::vector<Disk>& disks) {
    if (disks.empty()) throw std::invalid_argument("signed_distance_disks: empty disk list");
    for (const auto& d : disks)
        if (!(d.r > 0.0)) throw std::invalid_argument("signed_distance_disks: radius must be > 0");
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& d : disks) {
                const double dx = g.x(i) - d.cx, dy = g.y(j) - d.cy;
                best = std::min(best, std::sqrt(dx * dx + dy * dy) - d.r);
            }
            f.at(i, j) = best;
        }
    return f;
}

namespace {

void check_two_phase(const BinarySet& e) {
    const int n = e.count_inside();
    if (n == 0 || n == e.grid.count())
        throw std::invalid_argument("signed_distance_to_set: set must have both phases");
}

}  // namespace

ScalarField signed_distance_brute_force(const BinarySet& e) {
    check_two_phase(e);
    const Grid& g = e.grid;
    std::vector<std::array<double, 2>> in_pts, out_pts;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            (e.at(i, j) ? in_pts : out_pts).push_back({g.x(i), g.y(j)});
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto& opp = e.at(i, j) ? out_pts : in_pts;
            const double px = g.x(i), py = g.y(j);
            double best = std::numeric_limits<double>::max();
            for (const auto& q : opp) {
                const double dx = px - q[0], dy = py - q[1];
                best = std::min(best, dx * dx + dy * dy);
            }
            f.at(i, j) = e.at(i, j) ? -std::sqrt(best) : std::sqrt(best);
        }
    return f;
}

ScalarField signed_distance_to_set(const BinarySet& e) {
    check_two_phase(e);
    const Grid& g = e.grid;
    if (g.count() < 128 * 128) return signed_distance_brute_force(e);

    std::vector<std::uint8_t> outside(g.count());
    for (int c = 0; c < g.count(); ++c) outside[c] = e.inside[c] ? 0 : 1;
    std::vector<double> d2_in(g.count()), d2_out(g.count());
    kernels::edt_pass_omp(g, e.inside.data(), d2_in.data());
    kernels::edt_pass_omp(g, outside.data(), d2_out.data());
    ScalarField f(g);
    for (int c = 0; c < g.count(); ++c)
        f.values[c] = e.inside[c] ? -std::sqrt(d2_out[c]) : std::sqrt(d2_in[c]);
    return f;
}

namespace {

// Edge keys: 2*(j*nx+i) for the horizontal edge (i,j)-(i+1,j),
// 2*(j*nx+i)+1 for the vertical edge (i,j)-(i,j+1).
struct MarchState {
    const ScalarField& u;
    double level;
    std::unordered_map<long long, std::array<double, 2>> points;
    std::vector<std::array<long long, 2>> segments;

    long long hkey(int i, int j) const { return 2LL * (static_cast<long long>(j) * u.grid.nx + i); }
    long long vkey(int i, int j) const { return hkey(i, j) + 1; }

    long long hpoint(int i, int j) {
        const long long k = hkey(i, j);
        if (!points.count(k)) {
            const double v0 = u.at(i, j), v1 = u.at(i + 1, j);
            const double t = (level - v0) / (v1 - v0);
            points[k] = {u.grid.x(i) + t * u.grid.hx, u.grid.y(j)};
        }
        return k;
    }
    long long vpoint(int i, int j) {
        const long long k = vkey(i, j);
        if (!points.count(k)) {
            const double v0 = u.at(i, j), v1 = u.at(i, j + 1);
            const double t = (level - v0) / (v1 - v0);
            points[k] = {u.grid.x(i), u.grid.y(j) + t * u.grid.hy};
        }
        return k;
    }
};

}  // namespace

ContourSet extract_contour(const ScalarField& u, double level) {
    const Grid& g = u.grid;
    MarchState st{u, level, {}, {}};

    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            const double v00 = u.at(i, j), v10 = u.at(i + 1, j);
            const double v11 = u.at(i + 1, j + 1), v01 = u.at(i, j + 1);
            const int mask = (v00 <= level ? 1 : 0) | (v10 <= level ? 2 : 0) |
                             (v11 <= level ? 4 : 0) | (v01 <= level ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            const auto B = [&] { return st.hpoint(i, j); };
            const auto T = [&] { return st.hpoint(i, j + 1); };
            const auto L = [&] { return st.vpoint(i, j); };
            const auto R = [&] { return st.vpoint(i + 1, j); };
            auto add = [&](long long a, long long b) { st.segments.push_back({a, b}); };
            switch (mask) {
                case 1: case 14: add(B(), L()); break;
                case 2: case 13: add(B(), R()); break;
                case 3: case 12: add(L(), R()); break;
                case 4: case 11: add(R(), T()); break;
                case 6: case 9:  add(B(), T()); break;
                case 7: case 8:  add(L(), T()); break;
                case 5: {  // corners 00 and 11 inside
                    const bool center_in = (v00 + v10 + v11 + v01) * 0.25 <= level;
                    if (center_in) { add(B(), R()); add(L(), T()); }
                    else           { add(B(), L()); add(R(), T()); }
                    break;
                }
                case 10: {  // corners 10 and 01 inside
                    const bool center_in = (v00 + v10 + v11 + v01) * 0.25 <= level;
                    if (center_in) { add(B(), L()); add(R(), T()); }
                    else           { add(B(), R()); add(L(), T()); }
                    break;
                }
                default: break;
            }
        }

    // Stitch segments into chains; every edge key touches at most two segments.
    std::unordered_map<long long, std::array<int, 2>> adj;  // key -> segment ids
    std::unordered_map<long long, int> degree;
    for (int s = 0; s < static_cast<int>(st.segments.size()); ++s)
        for (long long k : st.segments[s]) {
            auto& d = degree[k];
            auto& a = adj[k];
            if (d < 2) a[d] = s;
            ++d;
        }

    ContourSet out;
    std::vector<char> used(st.segments.size(), 0);
    auto walk = [&](int seg0, long long start) {
        Polyline line;
        line.points.push_back(st.points.at(start));
        long long cur = start;
        int seg = seg0;
        for (;;) {
            used[seg] = 1;
            const auto& s = st.segments[seg];
            const long long next = (s[0] == cur) ? s[1] : s[0];
            if (next == start) {
                line.closed = true;
                break;
            }
            line.points.push_back(st.points.at(next));
            const auto& a = adj.at(next);
            const int other = (a[0] == seg) ? (degree.at(next) > 1 ? a[1] : -1) : a[0];
            if (other < 0 || used[other]) break;
            cur = next;
            seg = other;
        }
        return line;
    };

    // Open chains first (start at degree-1 keys), then remaining cycles.
    for (const auto& [key, deg] : degree) {
        if (deg != 1) continue;
        const int s = adj.at(key)[0];
        if (used[s]) continue;
        Polyline line = walk(s, key);
        if (line.points.size() >= 2) out.loops.push_back(std::move(line));
    }
    for (int s = 0; s < static_cast<int>(st.segments.size()); ++s) {
        if (used[s]) continue;
        Polyline line = walk(s, st.segments[s][0]);
        if (line.closed ? line.points.size() >= 3 : line.points.size() >= 2)
            out.loops.push_back(std::move(line));
    }
    return out;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
    const double qx = ax + t * dx, qy = ay + t * dy;
    return std::hypot(px - qx, py - qy);
}

namespace {

double directed_hausdorff(const ContourSet& a, const ContourSet& b) {
    double worst = 0.0;
    for (const auto& la : a.loops)
        for (const auto& p : la.points) {
            double best = std::numeric_limits<double>::max();
            for (const auto& lb : b.loops) {
                const std::size_t n = lb.points.size();
                if (n == 1) {
                    best = std::min(best, std::hypot(p[0] - lb.points[0][0], p[1] - lb.points[0][1]));
                    continue;
                }
                const std::size_t nseg = lb.closed ? n : n - 1;
                for (std::size_t s = 0; s < nseg; ++s) {
                    const auto& q0 = lb.points[s];
                    const auto& q1 = lb.points[(s + 1) % n];
                    best = std::min(best, point_segment_distance(p[0], p[1], q0[0], q0[1], q1[0], q1[1]));
                    if (best == 0.0) break;
                }
            }
            worst = std::max(worst, best);
        }
    return worst;
}

}  // namespace

double hausdorff(const ContourSet& a, const ContourSet& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff: contour set is empty");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double sublevel_area(const ScalarField& u, double level) {
    const Grid& g = u.grid;
    long long corners = 0;
    for (int j = 0; j < g.ny - 1; ++j)
        for (int i = 0; i < g.nx - 1; ++i) {
            corners += (u.at(i, j) <= level) + (u.at(i + 1, j) <= level) +
                       (u.at(i + 1, j + 1) <= level) + (u.at(i, j + 1) <= level);
        }
    return g.hx * g.hy * static_cast<double>(corners) / 4.0;
}

BinarySet threshold_sublevel(const ScalarField& u, double level) {
    BinarySet s(u.grid);
    for (int c = 0; c < u.grid.count(); ++c) s.inside[c] = u.values[c] <= level ? 1 : 0;
    return s;
}

}  // namespace omcf
