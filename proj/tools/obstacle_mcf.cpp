#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omcf/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"2D mean curvature flow with obstacles: PDE and variational solvers"};
    app.set_help_flag("--help", "print help");  // keep --h free for the compare step list
    app.require_subcommand(1);

    std::string config_path, out_override;
    bool quiet = false;
    std::vector<double> h_list;

    auto add_common = [&](CLI::App* sub, bool with_config) {
        sub->set_help_flag("--help", "print help");
        if (with_config) sub->add_option("config", config_path, "scenario config file")->required();
        sub->add_option("--out", out_override, "override output directory");
        sub->add_flag("--quiet", quiet, "suppress progress lines");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario");
    add_common(run, true);
    CLI::App* compare = app.add_subcommand("compare", "compare the two schemes over h values");
    add_common(compare, true);
    compare->add_option("--h", h_list, "scheme time steps (at least 2)")->delimiter(',');
    CLI::App* hull = app.add_subcommand("hull", "long-time hull comparison");
    add_common(hull, true);
    CLI::App* self = app.add_subcommand("selftest", "run the built-in quick checks");
    add_common(self, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (self->parsed()) return omcf::selftest(quiet);

        omcf::ScenarioConfig cfg = omcf::parse_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        cfg.quiet = quiet;

        if (run->parsed()) return omcf::run_scenario(cfg);
        if (compare->parsed()) return omcf::compare_schemes_cmd(cfg, h_list);
        if (hull->parsed()) return omcf::hull_cmd(cfg);
    } catch (const omcf::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
