#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smallcell/demand.hpp"
#include "smallcell/geometry.hpp"
#include "smallcell/mechanism.hpp"

namespace smallcell {

struct LayoutSpec {
    enum class Kind { Hex, Random, Explicit };
    Kind kind = Kind::Hex;
    int count = 24;
    double compress = 0.75;            // hex spacing factor
    Rect bounds{0.0, 0.0, 500.0, 500.0};  // random sampling window
    uint64_t seed = 1;                 // random layout seed
    std::vector<Point> positions;      // explicit layouts
};

/// Everything a run needs; defaults follow the standard parameter table at
/// desk scale (smaller catalog and storage so a full day runs in seconds).
struct ScenarioConfig {
    LayoutSpec layout;
    double radius_m = 50.0;
    double capacity_gb = 100.0;  // uniform per SBS
    int sp_count = 4;
    int content_count = 2000;
    double block_size_gb = 20.0;
    double omega = 0.0;
    double accuracy = 100.0;
    DelayParams delay{1.0, 5.0, 0.0};
    CatalogRanges ranges;
    double mu = 1.0;
    double sigma = 0.5;
    DensityProfile profile = DensityProfile::weekday_default();
    int hours = 24;
    uint64_t root_seed = 1;
    double resolution_m = 0.25;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& config);
ValidationReport validate_config(const ScenarioConfig& config);

struct HourRow {
    int hour = 0;
    std::optional<double> d_mechanism;
    std::optional<double> d_nocache;
    std::optional<double> d_highestpop;
    std::optional<double> d_greedy;
    double replacement = 0.0;
    double mean_iterations = 0.0;
    double mean_price = 0.0;
    double max_price = 0.0;
    double dropped_gb = 0.0;
    int64_t users_total = 0;
};

struct DailySummary {
    double d_mechanism = 0.0;
    double d_nocache = 0.0;
    double d_highestpop = 0.0;
    double d_greedy = 0.0;
    double replacement_sum = 0.0;
    double mean_iterations = 0.0;
};

struct ScenarioResult {
    std::vector<HourRow> hours;
    DailySummary daily;
    std::vector<RoundStats> rounds;  // every auction round of the run
    double overlap = 0.0;            // sampled O of the layout
};

/// Runs all four strategies on identical demand draws. Pass `out_dir` to
/// also write hours.csv and summary.csv (byte-identical for identical
/// configs).
ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& out_dir = "");

struct SweepSpec {
    std::string axis;  // H, K, c, O, omega, alpha or beta3
    std::vector<double> values;
    int seeds = 1;
    int threads = 1;
    bool svg = false;
};

struct SweepRow {
    double value = 0.0;
    uint64_t seed = 0;
    DailySummary daily;
    double overlap = 0.0;
    double wall_ms = 0.0;  // reported in the timing sidecar only
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;  // ordered by (value index, seed)
};

/// One row per (axis value, replicate seed); replicate seeds are
/// root_seed + index. Rows are computed possibly in parallel but always
/// emitted in canonical order; wall times go to sweep_timing.csv so
/// sweep.csv stays deterministic.
SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec,
                      const std::string& out_dir = "");

ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value);

/// Formats doubles for CSV output; fixed 10-significant-digit shortest form
/// so files are byte-stable across runs and platforms.
std::string csv_double(double v);

}  // namespace smallcell
