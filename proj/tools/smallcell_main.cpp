#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smallcell/experiments.hpp"
#include "smallcell/rng.hpp"

namespace {

using namespace smallcell;

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig config = load_config(config_path);
    const ValidationReport report = validate_config(config);
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    if (!report.ok()) {
        for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
        return 1;
    }
    std::cout << "OK\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const ScenarioConfig config = load_config(config_path);
    const ScenarioResult result = run_scenario(config, out_dir);
    std::cout << "wrote " << out_dir << "/hours.csv and summary.csv\n";
    std::cout << "daily delay (ms): mechanism " << csv_double(result.daily.d_mechanism)
              << ", no caching " << csv_double(result.daily.d_nocache) << ", highest popularity "
              << csv_double(result.daily.d_highestpop) << ", greedy "
              << csv_double(result.daily.d_greedy) << "\n";
    std::cout << "replacement sum " << csv_double(result.daily.replacement_sum) << ", overlap "
              << csv_double(result.overlap) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const SweepSpec& spec, const std::string& out_dir) {
    const ScenarioConfig config = load_config(config_path);
    run_sweep(config, spec, out_dir);
    std::cout << "wrote " << out_dir << "/sweep.csv (" << spec.values.size() << " values x "
              << spec.seeds << " seeds)\n";
    return 0;
}

// Monte-Carlo check of the closed-form lens / triple-patch areas.
int cmd_oracle_geometry(double radius, int64_t samples, uint64_t seed) {
    std::printf("%-8s %-8s %-12s %-12s %-8s %-12s %-12s %-8s\n", "c", "theta", "lens", "lens_mc",
                "err", "triple", "triple_mc", "err");
    for (double c : {0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6}) {
        const double theta = std::acos(c);
        const HexPatchAreas areas = hex_patch_areas(radius, theta);
        const double d = 2.0 * radius * c;
        // two adjacent disks at distance d; third one on the upper triangle
        const Point a{0.0, 0.0}, b{d, 0.0};
        const Point t3{d / 2.0, d * std::sqrt(3.0) / 2.0};
        RngStream rng(derive_seed(seed, {static_cast<uint64_t>(c * 1e6)}));
        const double r2 = radius * radius;
        const auto inside = [&](const Point& center, double x, double y) {
            const double dx = x - center.x, dy = y - center.y;
            return dx * dx + dy * dy <= r2;
        };
        // sample the lens bounding box
        const double lo_x = d / 2.0 - radius, hi_x = d / 2.0 + radius;
        const double lo_y = -radius, hi_y = radius;
        int64_t lens_hits = 0, triple_hits = 0;
        for (int64_t s = 0; s < samples; ++s) {
            const double x = rng.uniform(lo_x, hi_x);
            const double y = rng.uniform(lo_y, hi_y);
            const bool in_a = inside(a, x, y), in_b = inside(b, x, y);
            if (in_a && in_b) {
                ++lens_hits;
                if (inside(t3, x, y)) ++triple_hits;
            }
        }
        const double box = (hi_x - lo_x) * (hi_y - lo_y);
        const double lens_mc = box * static_cast<double>(lens_hits) / static_cast<double>(samples);
        const double triple_mc =
            box * static_cast<double>(triple_hits) / static_cast<double>(samples);
        const auto rel = [](double est, double ref) {
            return ref > 0.0 ? std::abs(est - ref) / ref : std::abs(est - ref);
        };
        std::printf("%-8.4g %-8.4g %-12.6g %-12.6g %-8.2g %-12.6g %-12.6g %-8.2g\n", c, theta,
                    areas.lens_m2, lens_mc, rel(lens_mc, areas.lens_m2), areas.triple_m2,
                    triple_mc,
                    areas.triple_m2 > 0.0 ? rel(triple_mc, areas.triple_m2) : triple_mc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small-cell caching simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";

    auto* validate = app.add_subcommand("validate", "Check a scenario config file");
    validate->add_option("config", config_path, "JSON scenario config")->required();

    auto* run = app.add_subcommand("run", "Run one scenario and write per-hour CSV reports");
    run->add_option("config", config_path, "JSON scenario config")->required();
    run->add_option("--out", out_dir, "Output directory");

    SweepSpec spec;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("config", config_path, "JSON scenario config")->required();
    sweep->add_option("--axis", spec.axis, "H, K, c, O, omega, alpha or beta3")->required();
    sweep->add_option("--values", spec.values, "Axis grid values")->required()->delimiter(',');
    sweep->add_option("--seeds", spec.seeds, "Replicates per value (root_seed + index)");
    sweep->add_option("--threads", spec.threads, "Parallel sweep points");
    sweep->add_flag("--svg", spec.svg, "Also write sweep.svg");
    sweep->add_option("--out", out_dir, "Output directory");

    double oracle_radius = 50.0;
    int64_t oracle_samples = 2000000;
    uint64_t oracle_seed = 1;
    auto* oracle = app.add_subcommand(
        "oracle-geometry", "Monte-Carlo vs closed-form overlap patch areas");
    oracle->add_option("--radius", oracle_radius, "Disk radius (m)");
    oracle->add_option("--samples", oracle_samples, "Monte-Carlo samples per grid point");
    oracle->add_option("--seed", oracle_seed, "Sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(config_path);
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, spec, out_dir);
        if (oracle->parsed()) return cmd_oracle_geometry(oracle_radius, oracle_samples, oracle_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
