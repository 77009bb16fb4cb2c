#include "omcf/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <stdexcept>

#include "omcf/kernels.hpp"

namespace omcf {

ObstacleSet::ObstacleSet(std::vector<Keyframe> keyframes) : frames_(std::move(keyframes)) {
    if (frames_.empty()) throw std::invalid_argument("ObstacleSet: no keyframes");
    const Grid& g = frames_.front().lower.grid;
    double prev_t = -std::numeric_limits<double>::max();
    for (const auto& f : frames_) {
        if (!(f.lower.grid == g) || !(f.upper.grid == g))
            throw std::invalid_argument("ObstacleSet: keyframes on different grids");
        if (!(f.t > prev_t))
            throw std::invalid_argument("ObstacleSet: keyframe times must be strictly increasing");
        prev_t = f.t;
        for (int c = 0; c < g.count(); ++c)
            if (f.lower.values[c] > f.upper.values[c])
                throw std::invalid_argument("ObstacleSet: lower > upper at a node");
    }
}

ObstacleSet ObstacleSet::constant(ScalarField lower, ScalarField upper) {
    return ObstacleSet({Keyframe{0.0, std::move(lower), std::move(upper)}});
}

ObstacleSet ObstacleSet::wide(const Grid& g, double width) {
    return constant(ScalarField(g, -width), ScalarField(g, width));
}

std::pair<ScalarField, ScalarField> ObstacleSet::at(double t) const {
    if (frames_.size() == 1 || t <= frames_.front().t)
        return {frames_.front().lower, frames_.front().upper};
    if (t >= frames_.back().t) return {frames_.back().lower, frames_.back().upper};
    std::size_t hi = 1;
    while (frames_[hi].t < t) ++hi;
    const auto& a = frames_[hi - 1];
    const auto& b = frames_[hi];
    const double s = (t - a.t) / (b.t - a.t);
    ScalarField lo = a.lower, up = a.upper;
    for (int c = 0; c < lo.grid.count(); ++c) {
        lo.values[c] += s * (b.lower.values[c] - a.lower.values[c]);
        up.values[c] += s * (b.upper.values[c] - a.upper.values[c]);
    }
    return {std::move(lo), std::move(up)};
}

double SolverConfig::dt(const Grid& g) const {
    const double h = g.min_spacing();
    return cfl * h * h / 4.0;
}

void SolverConfig::validate(const Grid& g) const {
    (void)g;
    if (!(eps > 0.0)) throw std::invalid_argument("SolverConfig: eps must be > 0");
    if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("SolverConfig: cfl must be in (0,1]");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    for (double t : record_times)
        if (t < 0.0 || t > t_end + 1e-12)
            throw std::invalid_argument("SolverConfig: record time outside [0, t_end]");
}

ScalarField curvature_rhs(const ScalarField& u, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("curvature_rhs: eps must be > 0");
    ScalarField out(u.grid);
    kernels::curvature_rhs_omp(u.grid, u.values.data(), eps, out.values.data());
    return out;
}

ScalarField forcing_rhs(const ScalarField& u, const ScalarField& k) {
    if (!(k.grid == u.grid)) throw std::invalid_argument("forcing_rhs: grid mismatch");
    ScalarField out(u.grid);
    kernels::forcing_rhs_omp(u.grid, u.values.data(), k.values.data(), out.values.data());
    return out;
}

namespace {

void check_within(const ScalarField& u, const ScalarField& lo, const ScalarField& up,
                  const char* who) {
    const Grid& g = u.grid;
    double worst = 0.0;
    int worst_c = -1;
    for (int c = 0; c < g.count(); ++c) {
        const double below = lo.values[c] - u.values[c];
        const double above = u.values[c] - up.values[c];
        const double viol = std::max(below, above);
        if (viol > worst) {
            worst = viol;
            worst_c = c;
        }
    }
    if (worst_c >= 0) {
        const int i = worst_c % g.nx, j = worst_c / g.nx;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s: field violates obstacles by %.6g at node (%d,%d) = (%.6g,%.6g)", who,
                      worst, i, j, g.x(i), g.y(j));
        throw std::runtime_error(buf);
    }
}

}  // namespace

ScalarField step(const ScalarField& u, const ObstacleSet& obs, const ScalarField& k, double t,
                 double dt, double eps) {
    const Grid& g = u.grid;
    const double h = g.min_spacing();
    if (dt > h * h / 4.0 * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt violates the CFL bound min(hx,hy)^2/4");
    {
        auto [lo, up] = obs.at(t);
        check_within(u, lo, up, "step");
    }
    ScalarField curv(g), forc(g);
    kernels::curvature_rhs_omp(g, u.values.data(), eps, curv.values.data());
    kernels::forcing_rhs_omp(g, u.values.data(), k.values.data(), forc.values.data());
    auto [lo, up] = obs.at(t + dt);
    ScalarField out(g);
    kernels::step_combine_omp(g, u.values.data(), curv.values.data(), forc.values.data(), dt,
                              lo.values.data(), up.values.data(), out.values.data());
    return out;
}

Trajectory evolve(const ScalarField& u0, const ObstacleSet& obs, const ScalarField& k,
                  const SolverConfig& cfg) {
    const Grid& g = u0.grid;
    cfg.validate(g);
    if (!(k.grid == g) || !(obs.grid() == g)) throw std::invalid_argument("evolve: grid mismatch");
    {
        auto [lo, up] = obs.at(0.0);
        check_within(u0, lo, up, "evolve: initial datum");
    }

    std::vector<double> rec = cfg.record_times;
    std::sort(rec.begin(), rec.end());
    rec.erase(std::unique(rec.begin(), rec.end()), rec.end());

    Trajectory traj;
    traj.snapshots.push_back({0.0, u0});

    const double dt = cfg.dt(g);
    ScalarField cur = u0;
    double t = 0.0;
    std::size_t ri = 0;
    while (ri < rec.size() && rec[ri] <= 0.0) ++ri;

    // Obstacle interpolation is hoisted for time-constant obstacles.
    const bool static_obs = obs.keyframes().size() == 1;
    ScalarField lo0, up0;
    if (static_obs) {
        auto [lo, up] = obs.at(0.0);
        lo0 = std::move(lo);
        up0 = std::move(up);
    }

    ScalarField curv(g), forc(g), next(g);
    while (t < cfg.t_end - 1e-15) {
        const double dtn = std::min(dt, cfg.t_end - t);
        kernels::curvature_rhs_omp(g, cur.values.data(), cfg.eps, curv.values.data());
        kernels::forcing_rhs_omp(g, cur.values.data(), k.values.data(), forc.values.data());
        if (static_obs) {
            kernels::step_combine_omp(g, cur.values.data(), curv.values.data(),
                                      forc.values.data(), dtn, lo0.values.data(),
                                      up0.values.data(), next.values.data());
        } else {
            auto [lo, up] = obs.at(t + dtn);
            kernels::step_combine_omp(g, cur.values.data(), curv.values.data(),
                                      forc.values.data(), dtn, lo.values.data(),
                                      up.values.data(), next.values.data());
        }
        const double t_next = t + dtn;
        while (ri < rec.size() && rec[ri] <= t_next + 1e-15) {
            const double r = rec[ri];
            const double a = std::min(1.0, (r - t) / dtn);
            ScalarField snap(g);
            for (int c = 0; c < g.count(); ++c)
                snap.values[c] = cur.values[c] + a * (next.values[c] - cur.values[c]);
            // Re-clamp so interpolated states satisfy the sandwich exactly.
            if (static_obs) {
                for (int c = 0; c < g.count(); ++c)
                    snap.values[c] = std::min(std::max(snap.values[c], lo0.values[c]),
                                              up0.values[c]);
            } else {
                auto [lo, up] = obs.at(r);
                for (int c = 0; c < g.count(); ++c)
                    snap.values[c] = std::min(std::max(snap.values[c], lo.values[c]),
                                              up.values[c]);
            }
            traj.snapshots.push_back({r, std::move(snap)});
            ++ri;
        }
        cur.values.swap(next.values);
        t = t_next;
    }
    return traj;
}

double barrier_residual(const Grid& g, double xi_x, double xi_y,
                        const std::vector<double>& times, double eps) {
    if (times.empty()) throw std::invalid_argument("barrier_residual: no times");
    for (double t : times)
        if (t < 0.0) throw std::invalid_argument("barrier_residual: negative time");

    ScalarField h(g);
    ScalarField curv(g);
    double worst = -std::numeric_limits<double>::max();
    for (double t : times) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double dx = g.x(i) - xi_x, dy = g.y(j) - xi_y;
                h.at(i, j) = -(dx * dx + dy * dy + 4.0 * t);
            }
        kernels::curvature_rhs_omp(g, h.values.data(), eps, curv.values.data());
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const double gx = (h.at(i + 1, j) - h.at(i - 1, j)) / (2.0 * g.hx);
                const double gy = (h.at(i, j + 1) - h.at(i, j - 1)) / (2.0 * g.hy);
                if (gx * gx + gy * gy < eps * eps) continue;  // degenerate-gradient node
                worst = std::max(worst, -4.0 - curv.at(i, j));
            }
    }
    return worst;
}

double discrete_lipschitz(const ScalarField& u) {
    const Grid& g = u.grid;
    double lip = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (i + 1 < g.nx)
                lip = std::max(lip, std::fabs(u.at(i + 1, j) - u.at(i, j)) / g.hx);
            if (j + 1 < g.ny)
                lip = std::max(lip, std::fabs(u.at(i, j + 1) - u.at(i, j)) / g.hy);
        }
    return lip;
}

void write_trajectory(const Trajectory& traj, const std::string& dir,
                      std::vector<std::string>* written) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream index(dir + "/index.txt");
    if (!index) throw std::runtime_error("cannot write trajectory index in " + dir);
    char name[64];
    for (const auto& s : traj.snapshots) {
        std::snprintf(name, sizeof name, "u_t%.6f.dat", s.t);
        write_field(s.u, dir + "/" + name);
        char line[96];
        std::snprintf(line, sizeof line, "%.6f %s", s.t, name);
        index << line << '\n';
        if (written) written->push_back(name);
    }
    if (written) written->push_back("index.txt");
}

}  // namespace omcf
