#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "omcf/analysis.hpp"
#include "omcf/field_core.hpp"
#include "omcf/variational.hpp"
#include "omcf/viscosity.hpp"

namespace omcf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string name;
    int seed = 42;

    int nx = 0, ny = 0;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

    SolverConfig solver;  // record_times filled from `records` at run time
    int records = 10;

    SchemeConfig scheme;
    int levels = 33;

    std::vector<Disk> disks;
    double forcing = 0.0;
    double radius = 0.5;           // initial circle radius
    double obstacle_radius = 0.3;  // inner obstacle radius / triangle circumradius
    double band_cells = 2.0;       // fattening band in cells

    std::string u0_file, lower_file, upper_file;  // custom scenario

    std::string out_dir = "out";
    bool quiet = false;  // CLI flag, not a file key

    Grid grid() const;
    std::vector<double> record_times() const;
};

// Line-based `key = value` format with `[section]` headers; unknown keys are
// rejected with their line number.
ScenarioConfig parse_config(const std::string& path);

// Exit statuses: 0 success, 2 solver error (FAILED marker left in out_dir).
int run_scenario(const ScenarioConfig& cfg);
int compare_schemes_cmd(const ScenarioConfig& cfg, const std::vector<double>& h_list);
int hull_cmd(const ScenarioConfig& cfg);
// Runs the quick closed-form checks; 0 on success, 3 on failure.
int selftest(bool quiet);

// Initial datum and upper-obstacle field for a built-in scenario; shared by
// run and compare paths.
struct ScenarioData {
    ScalarField u0;
    ScalarField lower;
    ScalarField upper;
    ScalarField k;
};
ScenarioData build_scenario_data(const ScenarioConfig& cfg);

}  // namespace omcf
