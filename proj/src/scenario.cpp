#include "omcf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace omcf {

Grid ScenarioConfig::grid() const { return make_grid(nx, ny, xmin, xmax, ymin, ymax); }

std::vector<double> ScenarioConfig::record_times() const {
    std::vector<double> times;
    for (int i = 0; i <= records; ++i) times.push_back(solver.t_end * i / records);
    return times;
}

namespace {

struct RawEntry {
    std::string value;
    int line;
    bool used = false;
};

struct RawConfig {
    std::map<std::string, RawEntry> entries;  // "section.key" -> value

    const RawEntry* find(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }
};

[[noreturn]] void fail(const std::string& msg, int line = 0) {
    if (line > 0)
        throw ConfigError(msg + " (line " + std::to_string(line) + ")");
    throw ConfigError(msg);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const RawEntry& e, const std::string& key) {
    try {
        std::size_t pos;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail("invalid number for key `" + key + "`: " + e.value, e.line);
    }
}

int parse_int(const RawEntry& e, const std::string& key) {
    try {
        std::size_t pos;
        const int v = std::stoi(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail("invalid integer for key `" + key + "`: " + e.value, e.line);
    }
}

RawConfig read_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected `key = value`", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key", lineno);
        if (section.empty()) fail("key `" + key + "` outside any [section]", lineno);
        const std::string full = section + "." + key;
        if (raw.entries.count(full)) fail("duplicate key `" + full + "`", lineno);
        raw.entries[full] = RawEntry{value, lineno};
    }
    return raw;
}

std::vector<double> parse_list(const RawEntry& e, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            fail("invalid list entry for key `" + key + "`: " + tok, e.line);
        }
    }
    return out;
}

std::vector<std::array<double, 2>> parse_points(const RawEntry& e, const std::string& key) {
    std::vector<std::array<double, 2>> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const auto comma = tok.find(',');
        if (comma == std::string::npos) fail("expected `x,y` in key `" + key + "`", e.line);
        try {
            out.push_back({std::stod(trim(tok.substr(0, comma))),
                           std::stod(trim(tok.substr(comma + 1)))});
        } catch (...) {
            fail("invalid point in key `" + key + "`: " + tok, e.line);
        }
    }
    return out;
}

const char* kScenarios[] = {"circle",     "circle_obstacle", "triangle_fattening",
                            "disks_hull", "dumbbell",        "custom"};

}  // namespace

ScenarioConfig parse_config(const std::string& path) {
    RawConfig raw = read_raw(path);
    ScenarioConfig cfg;

    const RawEntry* e = raw.find("scenario.name");
    if (!e) fail("missing required key `scenario.name`");
    cfg.name = e->value;
    if (std::find_if(std::begin(kScenarios), std::end(kScenarios),
                     [&](const char* s) { return cfg.name == s; }) == std::end(kScenarios))
        fail("unknown scenario `" + cfg.name + "`", e->line);
    if ((e = raw.find("scenario.seed"))) cfg.seed = parse_int(*e, "seed");

    for (const char* key : {"nx", "ny"}) {
        e = raw.find(std::string("grid.") + key);
        if (!e) fail(std::string("missing required key `grid.") + key + "`");
        (key[1] == 'x' ? cfg.nx : cfg.ny) = parse_int(*e, key);
        if ((key[1] == 'x' ? cfg.nx : cfg.ny) < 3)
            fail(std::string("key `") + key + "` must be >= 3", e->line);
    }
    struct {
        const char* key;
        double* dst;
    } bounds[] = {{"xmin", &cfg.xmin}, {"xmax", &cfg.xmax}, {"ymin", &cfg.ymin}, {"ymax", &cfg.ymax}};
    for (auto& b : bounds) {
        e = raw.find(std::string("grid.") + b.key);
        if (!e) fail(std::string("missing required key `grid.") + b.key + "`");
        *b.dst = parse_double(*e, b.key);
    }
    if (!(cfg.xmax > cfg.xmin) || !(cfg.ymax > cfg.ymin)) fail("degenerate grid bounds");

    e = raw.find("solver.t_end");
    if (!e) fail("missing required key `solver.t_end`");
    cfg.solver.t_end = parse_double(*e, "t_end");
    if (cfg.solver.t_end < 0) fail("key `t_end` must be >= 0", e->line);
    if ((e = raw.find("solver.eps"))) {
        cfg.solver.eps = parse_double(*e, "eps");
        if (!(cfg.solver.eps > 0)) fail("key `eps` must be > 0", e->line);
    }
    if ((e = raw.find("solver.cfl"))) {
        cfg.solver.cfl = parse_double(*e, "cfl");
        if (!(cfg.solver.cfl > 0) || cfg.solver.cfl > 1.0)
            fail("key `cfl` must be in (0, 1]", e->line);
    }
    if ((e = raw.find("solver.records"))) {
        cfg.records = parse_int(*e, "records");
        if (cfg.records < 1) fail("key `records` must be >= 1", e->line);
    }

    if ((e = raw.find("scheme.h"))) {
        cfg.scheme.h = parse_double(*e, "h");
        if (!(cfg.scheme.h > 0)) fail("key `h` must be > 0", e->line);
    }
    if ((e = raw.find("scheme.gap_tol"))) {
        cfg.scheme.gap_tol = parse_double(*e, "gap_tol");
        if (!(cfg.scheme.gap_tol > 0)) fail("key `gap_tol` must be > 0", e->line);
    }
    if ((e = raw.find("scheme.max_iters"))) {
        cfg.scheme.max_iters = parse_int(*e, "max_iters");
        if (cfg.scheme.max_iters < 1) fail("key `max_iters` must be >= 1", e->line);
    }
    if ((e = raw.find("scheme.levels"))) {
        cfg.levels = parse_int(*e, "levels");
        if (cfg.levels < 3) fail("key `levels` must be >= 3", e->line);
    }
    if ((e = raw.find("scheme.theta_generic"))) {
        cfg.scheme.theta_generic = parse_double(*e, "theta_generic");
        if (!(cfg.scheme.theta_generic > 0) || !(cfg.scheme.theta_generic < 1))
            fail("key `theta_generic` must be in (0, 1)", e->line);
    }
    if ((e = raw.find("scheme.theta_max"))) {
        cfg.scheme.theta_max = parse_double(*e, "theta_max");
        if (!(cfg.scheme.theta_max > 0) || !(cfg.scheme.theta_max < cfg.scheme.theta_generic))
            fail("key `theta_max` must be in (0, theta_generic)", e->line);
    }

    std::vector<std::array<double, 2>> centers;
    std::vector<double> radii;
    if ((e = raw.find("geometry.centers"))) centers = parse_points(*e, "centers");
    if ((e = raw.find("geometry.radii"))) radii = parse_list(*e, "radii");
    if (centers.size() != radii.size())
        fail("keys `centers` and `radii` must have matching lengths");
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (!(radii[i] > 0)) fail("entries of `radii` must be > 0");
        cfg.disks.push_back({centers[i][0], centers[i][1], radii[i]});
    }
    if ((e = raw.find("geometry.forcing"))) cfg.forcing = parse_double(*e, "forcing");
    if ((e = raw.find("geometry.radius"))) {
        cfg.radius = parse_double(*e, "radius");
        if (!(cfg.radius > 0)) fail("key `radius` must be > 0", e->line);
    }
    if ((e = raw.find("geometry.obstacle_radius"))) {
        cfg.obstacle_radius = parse_double(*e, "obstacle_radius");
        if (!(cfg.obstacle_radius > 0)) fail("key `obstacle_radius` must be > 0", e->line);
    }
    if ((e = raw.find("geometry.band_cells"))) {
        cfg.band_cells = parse_double(*e, "band_cells");
        if (!(cfg.band_cells > 0)) fail("key `band_cells` must be > 0", e->line);
    }

    if ((e = raw.find("custom.u0"))) cfg.u0_file = e->value;
    if ((e = raw.find("custom.lower"))) cfg.lower_file = e->value;
    if ((e = raw.find("custom.upper"))) cfg.upper_file = e->value;
    if (cfg.name == "custom") {
        if (cfg.u0_file.empty()) fail("scenario `custom` requires key `custom.u0`");
        for (const std::string& p : {cfg.u0_file, cfg.lower_file, cfg.upper_file})
            if (!p.empty() && !fs::exists(p)) fail("referenced field file does not exist: " + p);
    }
    if (cfg.name == "disks_hull" && cfg.disks.size() < 2)
        fail("scenario `disks_hull` requires at least 2 disks in `centers`/`radii`");

    if ((e = raw.find("output.dir"))) cfg.out_dir = e->value;

    for (const auto& [key, entry] : raw.entries)
        if (!entry.used) fail("unknown key `" + key + "`", entry.line);
    return cfg;
}

ScenarioData build_scenario_data(const ScenarioConfig& cfg) {
    const Grid g = cfg.grid();
    ScenarioData d{ScalarField(g), ScalarField(g, -1e3), ScalarField(g, 1e3),
                   ScalarField(g, cfg.forcing)};
    const double cx = 0.5 * (cfg.xmin + cfg.xmax), cy = 0.5 * (cfg.ymin + cfg.ymax);

    if (cfg.name == "circle" || cfg.name == "circle_obstacle") {
        d.u0 = signed_distance_disks(g, {Disk{cx, cy, cfg.radius}});
        if (cfg.name == "circle_obstacle")
            d.upper = signed_distance_disks(g, {Disk{cx, cy, cfg.obstacle_radius}});
    } else if (cfg.name == "triangle_fattening") {
        // Point obstacles realized as disks of radius 2 hx.
        const double rho = cfg.obstacle_radius;
        std::vector<Disk> pts;
        for (int v = 0; v < 3; ++v) {
            const double a = M_PI / 2.0 + 2.0 * M_PI * v / 3.0;
            pts.push_back({cx + rho * std::cos(a), cy + rho * std::sin(a), 2.0 * g.hx});
        }
        d.upper = signed_distance_disks(g, pts);
        d.lower = ScalarField(g, -1.0);
        d.u0 = signed_distance_disks(g, {Disk{cx, cy, cfg.radius}});
    } else if (cfg.name == "dumbbell") {
        std::vector<Disk> disks = cfg.disks;
        if (disks.empty())
            disks = {Disk{cx - 0.45, cy, 0.25}, Disk{cx + 0.45, cy, 0.25}};
        d.u0 = signed_distance_disks(g, disks);
        // Neck: axis-aligned capsule of half-width 0.08 between the first two centers.
        const double w = 0.08;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double seg = point_segment_distance(g.x(i), g.y(j), disks[0].cx, disks[0].cy,
                                                          disks[1].cx, disks[1].cy) - w;
                d.u0.at(i, j) = std::min(d.u0.at(i, j), seg);
            }
    } else if (cfg.name == "disks_hull") {
        d.upper = signed_distance_disks(g, cfg.disks);
        double big = 0.0;
        for (const auto& dk : cfg.disks)
            big = std::max(big, std::hypot(dk.cx - cx, dk.cy - cy) + dk.r);
        const double extent = std::min(cfg.xmax - cfg.xmin, cfg.ymax - cfg.ymin);
        big = std::min(big + 0.15 * extent, 0.42 * extent);
        d.u0 = signed_distance_disks(g, {Disk{cx, cy, big}});
        for (int c = 0; c < g.count(); ++c)
            d.u0.values[c] = std::min(d.u0.values[c], d.upper.values[c]);
    } else if (cfg.name == "custom") {
        d.u0 = read_field(cfg.u0_file);
        if (!(d.u0.grid == g)) throw ConfigError("custom u0 grid does not match [grid] section");
        if (!cfg.lower_file.empty()) {
            d.lower = read_field(cfg.lower_file);
            if (!(d.lower.grid == g)) throw ConfigError("custom lower grid mismatch");
        }
        if (!cfg.upper_file.empty()) {
            d.upper = read_field(cfg.upper_file);
            if (!(d.upper.grid == g)) throw ConfigError("custom upper grid mismatch");
        }
    } else {
        throw ConfigError("unknown scenario `" + cfg.name + "`");
    }
    return d;
}

namespace {

struct ArtifactDir {
    fs::path dir;
    std::vector<std::string> files;

    explicit ArtifactDir(const std::string& d) : dir(d) {
        fs::create_directories(dir);
        fs::remove(dir / "FAILED");
    }
    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir / name).string();
    }
    void note(const std::vector<std::string>& names) {
        for (const auto& n : names) files.push_back(n);
    }
    void write_manifest() {
        std::ofstream out(dir / "manifest.txt");
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out << f << ' ' << fs::file_size(dir / f) << '\n';
    }
    void mark_failed(const std::string& why) {
        std::ofstream out(dir / "FAILED");
        out << why << '\n';
    }
};

double mean_contour_radius(const ContourSet& c, double cx, double cy) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& l : c.loops)
        for (const auto& p : l.points) {
            sum += std::hypot(p[0] - cx, p[1] - cy);
            ++n;
        }
    return n ? sum / n : 0.0;
}

void write_snapshot_artifacts(ArtifactDir& art, const Trajectory& traj) {
    std::vector<std::string> names;
    write_trajectory(traj, art.dir.string(), &names);
    art.note(names);
    char name[64];
    for (const auto& s : traj.snapshots) {
        const ContourSet c = extract_contour(s.u, 0.0);
        std::snprintf(name, sizeof name, "contour_t%.6f.txt", s.t);
        write_contours(c, art.path(name));
        std::snprintf(name, sizeof name, "u_t%.6f.pgm", s.t);
        write_pgm_preview(s.u, art.path(name));
    }
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg) {
    ArtifactDir art(cfg.out_dir);
    try {
        const Grid g = cfg.grid();
        const ScenarioData data = build_scenario_data(cfg);
        SolverConfig scfg = cfg.solver;
        scfg.record_times = cfg.record_times();

        if (cfg.name == "disks_hull") {
            const HullReport rep = hull_compare(cfg.disks, g, scfg);
            std::ofstream out(art.path("hull_report.txt"));
            out << "steady_reached = " << (rep.steady_reached ? 1 : 0) << '\n'
                << "steady_time = " << rep.steady_time << '\n'
                << "hausdorff = " << rep.hausdorff_to_hull << '\n'
                << "convexity_defect = " << rep.convexity_defect << '\n';
            write_contours(rep.limit_contour, art.path("limit_contour.txt"));
            write_contours(rep.hull_contour, art.path("hull_contour.txt"));
            if (!rep.steady_reached) {
                art.mark_failed("steady state not reached within t_end");
                art.write_manifest();
                return 2;
            }
            art.write_manifest();
            return 0;
        }

        const ObstacleSet obs = ObstacleSet::constant(data.lower, data.upper);
        const Trajectory traj = evolve(data.u0, obs, data.k, scfg);
        write_snapshot_artifacts(art, traj);

        const double cx = 0.5 * (cfg.xmin + cfg.xmax), cy = 0.5 * (cfg.ymin + cfg.ymax);
        {
            std::ofstream out(art.path("metrics.csv"));
            out << "time,mean_radius,expected_radius\n";
            char line[96];
            for (const auto& s : traj.snapshots) {
                const ContourSet c = extract_contour(s.u, 0.0);
                const double r = c.empty() ? 0.0 : mean_contour_radius(c, cx, cy);
                const double exp_r =
                    std::sqrt(std::max(0.0, cfg.radius * cfg.radius - 2.0 * s.t));
                std::snprintf(line, sizeof line, "%.6f,%.8f,%.8f", s.t, r, exp_r);
                out << line << '\n';
            }
        }

        if (cfg.name == "triangle_fattening") {
            const ObstacleSet free_obs =
                ObstacleSet::constant(data.lower, ScalarField(g, 1e3));
            const Trajectory free_traj = evolve(data.u0, free_obs, data.k, scfg);
            const double band = cfg.band_cells * g.hx;
            const auto with = fattening_metrics(traj, band);
            const auto without = fattening_metrics(free_traj, band);
            std::ofstream out(art.path("fattening_series.csv"));
            out << "time,band_area,band_area_free,sublevel_area\n";
            char line[128];
            for (std::size_t i = 0; i < with.size(); ++i) {
                std::snprintf(line, sizeof line, "%.6f,%.8f,%.8f,%.8f", with[i].t,
                              with[i].band_area, without[i].band_area, with[i].sublevel_area);
                out << line << '\n';
            }
        }

        art.write_manifest();
        if (!cfg.quiet) std::cout << "scenario " << cfg.name << ": done, artifacts in "
                                  << cfg.out_dir << '\n';
        return 0;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        art.mark_failed(ex.what());
        art.write_manifest();
        if (!cfg.quiet) std::cerr << "scenario failed: " << ex.what() << '\n';
        return 2;
    }
}

int compare_schemes_cmd(const ScenarioConfig& cfg, const std::vector<double>& h_list) {
    if (h_list.empty()) throw ConfigError("compare: empty h list");
    if (h_list.size() < 2) throw ConfigError("compare: need at least 2 h values");
    ArtifactDir art(cfg.out_dir);
    try {
        const ScenarioData data = build_scenario_data(cfg);
        std::vector<double> hs = h_list;
        std::sort(hs.rbegin(), hs.rend());
        const ConvergenceTable table =
            scheme_consistency(data.u0, data.upper, hs, cfg.solver, cfg.scheme,
                               uniform_levels(cfg.levels));
        std::ofstream out(art.path("consistency_table.csv"));
        out << "h,sup_contour_distance\n";
        char line[64];
        for (const auto& r : table.rows) {
            std::snprintf(line, sizeof line, "%.6f,%.8f", r.h, r.sup_contour_distance);
            out << line << '\n';
        }
        art.write_manifest();
        return 0;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        art.mark_failed(ex.what());
        art.write_manifest();
        if (!cfg.quiet) std::cerr << "compare failed: " << ex.what() << '\n';
        return 2;
    }
}

int hull_cmd(const ScenarioConfig& cfg) {
    if (cfg.name != "disks_hull")
        throw ConfigError("hull: scenario must be `disks_hull`");
    if (cfg.disks.size() < 2) throw ConfigError("hull: need at least 2 disks");
    return run_scenario(cfg);
}

namespace {

int g_failures;

void check(bool ok, const std::string& what, bool quiet) {
    if (!ok) ++g_failures;
    if (!quiet || !ok)
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << '\n';
}

}  // namespace

int selftest(bool quiet) {
    g_failures = 0;
    auto close = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

    {
        const Grid g = make_grid(5, 5, 0, 1, 0, 1);
        check(close(g.hx, 0.25, 0) && close(g.hy, 0.25, 0), "grid spacing from bounds", quiet);
        const Grid g2 = make_grid(3, 3, 0, 2, 0, 1);
        check(close(g2.hx, 1.0, 0) && close(g2.hy, 0.5, 0), "anisotropic spacing", quiet);
        bool threw = false;
        try {
            make_grid(2, 5, 0, 1, 0, 1);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        check(threw, "node count below 3 rejected", quiet);
    }
    {
        const Grid g = make_grid(65, 65, -1, 1, -1, 1);
        const ScalarField d = signed_distance_disks(g, {Disk{0, 0, 0.5}});
        check(close(d.at(32, 32), -0.5, 1e-12), "disk distance at center", quiet);
        check(close(d.at(64, 32), 0.5, 1e-12), "disk distance at 2r", quiet);
        const ScalarField c(g, 1.0);
        check(extract_contour(c, 0.0).empty(), "constant field has empty contour", quiet);
        check(close(sublevel_area(c, 0.0), 0.0, 0), "positive field has zero sublevel area",
              quiet);
        const ScalarField m(g, -1.0);
        check(close(sublevel_area(m, 0.0), 4.0, 1e-9), "negative field fills the domain", quiet);
        const ContourSet circ = extract_contour(d, 0.0);
        check(close(hausdorff(circ, circ), 0.0, 0), "identical contours at distance 0", quiet);
    }
    {
        const Grid g = make_grid(17, 17, 0, 1, 0, 1);
        const ScalarField lo(g, -1.0), up(g, 2.0);
        const ObstacleSet obs = ObstacleSet::constant(lo, up);
        auto [l, u] = obs.at(3.0);
        check(close(l.values[0], -1.0, 0) && close(u.values[0], 2.0, 0),
              "single keyframe obstacles are constant in time", quiet);
        const ScalarField k(g, 0.0), u0(g, 0.5);
        const ScalarField f = forcing_rhs(u0, k);
        check(close(*std::max_element(f.values.begin(), f.values.end()), 0.0, 0),
              "zero forcing gives zero field", quiet);
        const ObstacleSet pinch = ObstacleSet::constant(u0, u0);
        const ScalarField s = step(u0, pinch, k, 0.0, g.hx * g.hx / 8.0, 1e-6);
        bool same = true;
        for (int c = 0; c < g.count(); ++c) same = same && s.values[c] == u0.values[c];
        check(same, "pinched obstacles force the identity step", quiet);
    }
    {
        check(close(ball_step_radius(1.0, 0.0, 2), 1.0, 0), "ball step with h = 0", quiet);
        check(close(ball_step_radius(1.0, 1.0 / 8.0, 2), 0.5, 1e-12),
              "ball step at the validity edge", quiet);
        const Grid g = make_grid(33, 33, -1, 1, -1, 1);
        const BinarySet e = threshold_sublevel(signed_distance_disks(g, {Disk{0, 0, 0.6}}), 0.0);
        auto recs = flow(e, BinarySet(g), SchemeConfig{}, 0.001);
        check(recs.size() == 1, "flow with t_end < h keeps only the initial set", quiet);
    }
    std::cout << (g_failures == 0 ? "selftest: all checks passed\n"
                                  : "selftest: FAILURES detected\n");
    return g_failures == 0 ? 0 : 3;
}

}  // namespace omcf
