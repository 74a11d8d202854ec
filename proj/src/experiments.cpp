#include "smallcell/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "smallcell/blocks.hpp"
#include "smallcell/rng.hpp"
#include "smallcell/svg.hpp"

namespace smallcell {

namespace {

constexpr uint64_t kCatalogTag = 0x636174ull;
constexpr uint64_t kDemandTag = 0x64656dull;

LayoutSpec::Kind layout_kind_from_string(const std::string& s) {
    if (s == "hex") return LayoutSpec::Kind::Hex;
    if (s == "random") return LayoutSpec::Kind::Random;
    if (s == "explicit") return LayoutSpec::Kind::Explicit;
    throw std::invalid_argument("layout.type must be hex, random or explicit");
}

std::string layout_kind_to_string(LayoutSpec::Kind kind) {
    switch (kind) {
        case LayoutSpec::Kind::Hex: return "hex";
        case LayoutSpec::Kind::Random: return "random";
        default: return "explicit";
    }
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw std::invalid_argument("unknown config key: " + where + key);
    }
}

SbsLayout build_layout(const ScenarioConfig& config) {
    switch (config.layout.kind) {
        case LayoutSpec::Kind::Hex:
            return generate_hex_layout(config.layout.count, config.radius_m,
                                       config.layout.compress, config.capacity_gb);
        case LayoutSpec::Kind::Random:
            return generate_random_layout(config.layout.count, config.radius_m,
                                          config.layout.bounds, config.layout.seed,
                                          config.capacity_gb);
        default: {
            SbsLayout layout;
            layout.positions = config.layout.positions;
            layout.radius_m = config.radius_m;
            layout.capacities_gb.assign(layout.positions.size(), config.capacity_gb);
            validate_layout(layout);
            return layout;
        }
    }
}

double mean_or_nan(const std::vector<double>& values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

std::string csv_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

ScenarioConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    reject_unknown_keys(j,
                        {"layout", "radius_m", "capacity_gb", "sp_count", "content_count",
                         "block_size_gb", "omega", "accuracy", "beta1_ms", "beta2_ms", "beta3_ms",
                         "popularity", "density_profile", "hours", "root_seed", "resolution_m"},
                        "");
    ScenarioConfig config;
    if (j.contains("layout")) {
        const auto& l = j.at("layout");
        reject_unknown_keys(l, {"type", "count", "compress", "bounds", "seed", "positions"},
                            "layout.");
        if (l.contains("type")) config.layout.kind = layout_kind_from_string(l.at("type"));
        if (l.contains("count")) config.layout.count = l.at("count").get<int>();
        if (l.contains("compress")) config.layout.compress = l.at("compress").get<double>();
        if (l.contains("seed")) config.layout.seed = l.at("seed").get<uint64_t>();
        if (l.contains("bounds")) {
            const auto& b = l.at("bounds");
            config.layout.bounds = {b.at(0).get<double>(), b.at(1).get<double>(),
                                    b.at(2).get<double>(), b.at(3).get<double>()};
        }
        if (l.contains("positions")) {
            config.layout.positions.clear();
            for (const auto& p : l.at("positions"))
                config.layout.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            config.layout.count = static_cast<int>(config.layout.positions.size());
        }
    }
    if (j.contains("radius_m")) config.radius_m = j.at("radius_m").get<double>();
    if (j.contains("capacity_gb")) config.capacity_gb = j.at("capacity_gb").get<double>();
    if (j.contains("sp_count")) config.sp_count = j.at("sp_count").get<int>();
    if (j.contains("content_count")) config.content_count = j.at("content_count").get<int>();
    if (j.contains("block_size_gb")) config.block_size_gb = j.at("block_size_gb").get<double>();
    if (j.contains("omega")) config.omega = j.at("omega").get<double>();
    if (j.contains("accuracy")) config.accuracy = j.at("accuracy").get<double>();
    if (j.contains("beta1_ms")) config.delay.backhaul_ms_per_user = j.at("beta1_ms").get<double>();
    if (j.contains("beta2_ms")) config.delay.downlink_ms_per_user = j.at("beta2_ms").get<double>();
    if (j.contains("beta3_ms")) config.delay.choosing_ms_per_sbs = j.at("beta3_ms").get<double>();
    if (j.contains("popularity")) {
        const auto& p = j.at("popularity");
        reject_unknown_keys(p, {"mu", "sigma", "a", "b", "t0", "size_gb"}, "popularity.");
        if (p.contains("mu")) config.mu = p.at("mu").get<double>();
        if (p.contains("sigma")) config.sigma = p.at("sigma").get<double>();
        const auto pair = [](const nlohmann::json& arr, double& lo, double& hi) {
            lo = arr.at(0).get<double>();
            hi = arr.at(1).get<double>();
        };
        if (p.contains("a")) pair(p.at("a"), config.ranges.a_min, config.ranges.a_max);
        if (p.contains("b")) pair(p.at("b"), config.ranges.b_min, config.ranges.b_max);
        if (p.contains("t0")) pair(p.at("t0"), config.ranges.t0_min, config.ranges.t0_max);
        if (p.contains("size_gb"))
            pair(p.at("size_gb"), config.ranges.size_gb_min, config.ranges.size_gb_max);
    }
    if (j.contains("density_profile")) {
        const auto& d = j.at("density_profile");
        if (d.size() != 24)
            throw std::invalid_argument("density_profile must have exactly 24 entries");
        for (size_t k = 0; k < 24; ++k) config.profile.users_per_m2[k] = d.at(k).get<double>();
    }
    if (j.contains("hours")) config.hours = j.at("hours").get<int>();
    if (j.contains("root_seed")) config.root_seed = j.at("root_seed").get<uint64_t>();
    if (j.contains("resolution_m")) config.resolution_m = j.at("resolution_m").get<double>();
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ScenarioConfig& config) {
    nlohmann::json j;
    j["layout"]["type"] = layout_kind_to_string(config.layout.kind);
    j["layout"]["count"] = config.layout.count;
    if (config.layout.kind == LayoutSpec::Kind::Hex)
        j["layout"]["compress"] = config.layout.compress;
    if (config.layout.kind == LayoutSpec::Kind::Random) {
        j["layout"]["bounds"] = {config.layout.bounds.min_x, config.layout.bounds.min_y,
                                 config.layout.bounds.max_x, config.layout.bounds.max_y};
        j["layout"]["seed"] = config.layout.seed;
    }
    if (config.layout.kind == LayoutSpec::Kind::Explicit) {
        auto& pos = j["layout"]["positions"];
        pos = nlohmann::json::array();
        for (const auto& p : config.layout.positions) pos.push_back({p.x, p.y});
    }
    j["radius_m"] = config.radius_m;
    j["capacity_gb"] = config.capacity_gb;
    j["sp_count"] = config.sp_count;
    j["content_count"] = config.content_count;
    j["block_size_gb"] = config.block_size_gb;
    j["omega"] = config.omega;
    j["accuracy"] = config.accuracy;
    j["beta1_ms"] = config.delay.backhaul_ms_per_user;
    j["beta2_ms"] = config.delay.downlink_ms_per_user;
    j["beta3_ms"] = config.delay.choosing_ms_per_sbs;
    j["popularity"]["mu"] = config.mu;
    j["popularity"]["sigma"] = config.sigma;
    j["popularity"]["a"] = {config.ranges.a_min, config.ranges.a_max};
    j["popularity"]["b"] = {config.ranges.b_min, config.ranges.b_max};
    j["popularity"]["t0"] = {config.ranges.t0_min, config.ranges.t0_max};
    j["popularity"]["size_gb"] = {config.ranges.size_gb_min, config.ranges.size_gb_max};
    j["density_profile"] = config.profile.users_per_m2;
    j["hours"] = config.hours;
    j["root_seed"] = config.root_seed;
    j["resolution_m"] = config.resolution_m;
    return j.dump(2);
}

ValidationReport validate_config(const ScenarioConfig& config) {
    ValidationReport report;
    const auto bad = [&](const std::string& field, const std::string& why) {
        report.errors.push_back(field + ": " + why);
    };
    if (config.layout.count < 1) bad("layout.count", "must be >= 1");
    if (config.layout.kind == LayoutSpec::Kind::Hex &&
        (config.layout.compress < kMinCompress - 1e-12 || config.layout.compress > 1.0 + 1e-12))
        bad("layout.compress", "must lie in [1/sqrt(3), 1]");
    if (config.layout.kind == LayoutSpec::Kind::Random &&
        (config.layout.bounds.max_x <= config.layout.bounds.min_x ||
         config.layout.bounds.max_y <= config.layout.bounds.min_y))
        bad("layout.bounds", "empty rectangle");
    if (config.layout.kind == LayoutSpec::Kind::Explicit &&
        config.layout.positions.size() != static_cast<size_t>(config.layout.count))
        bad("layout.positions", "must match layout.count");
    if (config.radius_m <= 0.0) bad("radius_m", "must be > 0");
    if (config.capacity_gb <= 0.0) bad("capacity_gb", "must be > 0");
    if (config.sp_count < 1) bad("sp_count", "must be >= 1");
    if (config.content_count < config.sp_count)
        bad("content_count", "need at least one content per SP");
    if (config.block_size_gb <= 0.0) bad("block_size_gb", "must be > 0");
    if (config.omega < 0.0) bad("omega", "must be >= 0");
    if (config.accuracy < 1.0) bad("accuracy", "must be >= 1");
    if (config.delay.backhaul_ms_per_user < 0.0) bad("beta1_ms", "must be >= 0");
    if (config.delay.downlink_ms_per_user < 0.0) bad("beta2_ms", "must be >= 0");
    if (config.delay.choosing_ms_per_sbs < 0.0) bad("beta3_ms", "must be >= 0");
    if (config.ranges.size_gb_min <= 0.0) bad("popularity.size_gb", "sizes must be > 0");
    if (config.ranges.size_gb_max < config.ranges.size_gb_min)
        bad("popularity.size_gb", "empty range");
    if (config.ranges.a_min < 0.0) bad("popularity.a", "must be >= 0");
    if (config.ranges.a_max < config.ranges.a_min) bad("popularity.a", "empty range");
    if (config.ranges.b_min <= 0.0) bad("popularity.b", "lifespans must be > 0");
    if (config.ranges.b_max < config.ranges.b_min) bad("popularity.b", "empty range");
    if (config.ranges.t0_max < config.ranges.t0_min) bad("popularity.t0", "empty range");
    if (config.sigma <= 0.0) bad("popularity.sigma", "must be > 0");
    for (double u : config.profile.users_per_m2)
        if (u < 0.0) {
            bad("density_profile", "entries must be >= 0");
            break;
        }
    if (config.hours < 1) bad("hours", "must be >= 1");
    if (config.resolution_m <= 0.0) bad("resolution_m", "must be > 0");

    if (report.errors.empty()) {
        const int64_t slots = mb_from_gb(config.capacity_gb) / mb_from_gb(config.block_size_gb);
        if (config.layout.count > slots)
            report.warnings.push_back(
                "layout.count exceeds storage blocks per SBS (H/S); a block cannot hold a copy "
                "in every SBS");
        if (config.ranges.size_gb_max > config.block_size_gb)
            report.warnings.push_back(
                "block_size_gb is below the largest content size; contents will span more than "
                "two blocks");
    }
    return report;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
    const ValidationReport validation = validate_config(config);
    if (!validation.ok()) {
        std::string message = "invalid config:";
        for (const auto& e : validation.errors) message += "\n  " + e;
        throw std::invalid_argument(message);
    }

    const SbsLayout layout = build_layout(config);
    const CoverageMap map = build_coverage_map(layout, config.resolution_m);
    const Catalog catalog =
        generate_catalog(config.sp_count, config.content_count, config.ranges,
                         derive_seed(config.root_seed, {kCatalogTag}), config.mu, config.sigma);
    std::vector<int64_t> capacities_mb;
    capacities_mb.reserve(layout.capacities_gb.size());
    for (double gb : layout.capacities_gb) capacities_mb.push_back(mb_from_gb(gb));
    const int64_t block_size_mb = mb_from_gb(config.block_size_gb);
    const uint64_t demand_seed = derive_seed(config.root_seed, {kDemandTag});

    CachingMechanism mechanism(map, capacities_mb, config.delay,
                               {config.block_size_gb, config.omega, config.accuracy});

    ScenarioResult result;
    result.overlap = map.overlap;
    std::vector<double> day_mech, day_none, day_pop, day_greedy;
    double iter_sum = 0.0;
    int64_t iter_count = 0;

    for (int t = 1; t <= config.hours; ++t) {
        const RegionUserCounts users = sample_region_users(map, config.profile, t, demand_seed);
        std::vector<ContentBlock> blocks;
        double dropped_gb = 0.0;
        for (int sp = 0; sp < config.sp_count; ++sp) {
            RibbonSnapshot snap = ribbonize(catalog, sp, config.block_size_gb, t);
            dropped_gb += gb_from_mb(snap.dropped_mb);
            for (auto& b : snap.blocks) blocks.push_back(std::move(b));
        }

        const HourReport report = mechanism.run_hour(t, users, blocks, dropped_gb);
        const AllocationState none = allocate_none(t, capacities_mb, blocks);
        const AllocationState pop =
            allocate_highest_popularity(t, capacities_mb, blocks, block_size_mb);
        const AllocationState greedy = allocate_greedy(t, capacities_mb, blocks, block_size_mb,
                                                       users, map, config.delay);

        HourRow row;
        row.hour = t;
        row.d_mechanism = report.delay_ms;
        row.d_nocache = average_delay(none, blocks, users, map, config.delay);
        row.d_highestpop = average_delay(pop, blocks, users, map, config.delay);
        row.d_greedy = average_delay(greedy, blocks, users, map, config.delay);
        row.replacement = report.replacement;
        row.dropped_gb = dropped_gb;
        row.users_total = users.total;
        std::vector<double> iters;
        double price_sum = 0.0;
        for (const auto& r : report.rounds) {
            if (r.objects == 0) continue;
            iters.push_back(static_cast<double>(r.iterations));
            price_sum += r.mean_price;
            row.max_price = std::max(row.max_price, r.max_price);
            result.rounds.push_back(r);
        }
        row.mean_iterations = mean_or_nan(iters);
        row.mean_price = iters.empty() ? 0.0 : price_sum / static_cast<double>(iters.size());
        if (!iters.empty()) {
            for (double v : iters) iter_sum += v;
            iter_count += static_cast<int64_t>(iters.size());
        }

        if (row.d_mechanism) day_mech.push_back(*row.d_mechanism);
        if (row.d_nocache) day_none.push_back(*row.d_nocache);
        if (row.d_highestpop) day_pop.push_back(*row.d_highestpop);
        if (row.d_greedy) day_greedy.push_back(*row.d_greedy);
        result.daily.replacement_sum += row.replacement;
        result.hours.push_back(std::move(row));
    }

    result.daily.d_mechanism = mean_or_nan(day_mech);
    result.daily.d_nocache = mean_or_nan(day_none);
    result.daily.d_highestpop = mean_or_nan(day_pop);
    result.daily.d_greedy = mean_or_nan(day_greedy);
    result.daily.mean_iterations =
        iter_count > 0 ? iter_sum / static_cast<double>(iter_count)
                       : std::numeric_limits<double>::quiet_NaN();

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto opt = [](const std::optional<double>& v) {
            return v ? csv_double(*v) : std::string("nan");
        };
        std::ofstream hours(std::filesystem::path(out_dir) / "hours.csv");
        hours << "t,D_mechanism,D_nocache,D_highestpop,D_greedy,lambda,mean_iterations,"
                 "mean_price,max_price,dropped_gb,users\n";
        for (const auto& row : result.hours) {
            hours << row.hour << "," << opt(row.d_mechanism) << "," << opt(row.d_nocache) << ","
                  << opt(row.d_highestpop) << "," << opt(row.d_greedy) << ","
                  << csv_double(row.replacement) << "," << csv_double(row.mean_iterations) << ","
                  << csv_double(row.mean_price) << "," << csv_double(row.max_price) << ","
                  << csv_double(row.dropped_gb) << "," << row.users_total << "\n";
        }
        std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv");
        summary << "strategy,daily_delay_ms,lambda_sum,mean_iterations\n";
        summary << "mechanism," << csv_double(result.daily.d_mechanism) << ","
                << csv_double(result.daily.replacement_sum) << ","
                << csv_double(result.daily.mean_iterations) << "\n";
        summary << "nocache," << csv_double(result.daily.d_nocache) << ",,\n";
        summary << "highestpop," << csv_double(result.daily.d_highestpop) << ",,\n";
        summary << "greedy," << csv_double(result.daily.d_greedy) << ",,\n";
    }
    return result;
}

ScenarioConfig apply_axis(const ScenarioConfig& config, const std::string& axis, double value) {
    ScenarioConfig out = config;
    if (axis == "H") {
        out.capacity_gb = value;
    } else if (axis == "K") {
        out.content_count = static_cast<int>(std::llround(value));
    } else if (axis == "c") {
        if (out.layout.kind != LayoutSpec::Kind::Hex)
            throw std::invalid_argument("axis c requires a hex layout");
        out.layout.compress = value;
    } else if (axis == "O") {
        if (out.layout.kind != LayoutSpec::Kind::Hex)
            throw std::invalid_argument("axis O requires a hex layout");
        out.layout.compress = find_hex_compress_for_overlap(out.layout.count, out.radius_m, value,
                                                            std::max(0.5, out.resolution_m));
    } else if (axis == "omega") {
        out.omega = value;
    } else if (axis == "alpha") {
        out.accuracy = value;
    } else if (axis == "beta3") {
        out.delay.choosing_ms_per_sbs = value;
    } else {
        throw std::invalid_argument("unknown sweep axis: " + axis +
                                    " (expected H, K, c, O, omega, alpha or beta3)");
    }
    return out;
}

SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec,
                      const std::string& out_dir) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
    if (spec.seeds < 1) throw std::invalid_argument("sweep: seeds must be >= 1");

    struct Job {
        size_t value_index;
        int seed_index;
    };
    std::vector<Job> jobs;
    for (size_t v = 0; v < spec.values.size(); ++v)
        for (int s = 0; s < spec.seeds; ++s) jobs.push_back({v, s});

    SweepResult result;
    result.spec = spec;
    result.rows.resize(jobs.size());

    std::atomic<size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            ScenarioConfig point = apply_axis(config, spec.axis, spec.values[job.value_index]);
            point.root_seed = config.root_seed + static_cast<uint64_t>(job.seed_index);
            const auto started = std::chrono::steady_clock::now();
            const ScenarioResult run = run_scenario(point);
            const auto finished = std::chrono::steady_clock::now();
            SweepRow row;
            row.value = spec.values[job.value_index];
            row.seed = point.root_seed;
            row.daily = run.daily;
            row.overlap = run.overlap;
            row.wall_ms =
                std::chrono::duration<double, std::milli>(finished - started).count();
            result.rows[idx] = std::move(row);
        }
    };
    const int threads = std::max(1, spec.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream csv(std::filesystem::path(out_dir) / "sweep.csv");
        csv << "axis,value,seed,D_mechanism,D_nocache,D_highestpop,D_greedy,lambda_sum,"
               "mean_iterations,overlap\n";
        for (const auto& row : result.rows) {
            csv << spec.axis << "," << csv_double(row.value) << "," << row.seed << ","
                << csv_double(row.daily.d_mechanism) << "," << csv_double(row.daily.d_nocache)
                << "," << csv_double(row.daily.d_highestpop) << ","
                << csv_double(row.daily.d_greedy) << "," << csv_double(row.daily.replacement_sum)
                << "," << csv_double(row.daily.mean_iterations) << "," << csv_double(row.overlap)
                << "\n";
        }
        // Wall time varies run to run; keep it out of the deterministic file.
        std::ofstream timing(std::filesystem::path(out_dir) / "sweep_timing.csv");
        timing << "axis,value,seed,wall_ms\n";
        for (const auto& row : result.rows)
            timing << spec.axis << "," << csv_double(row.value) << "," << row.seed << ","
                   << csv_double(row.wall_ms) << "\n";

        if (spec.svg) {
            std::vector<double> xs = spec.values;
            const auto median_series = [&](auto pick) {
                SvgSeries series;
                for (size_t v = 0; v < spec.values.size(); ++v) {
                    std::vector<double> ys;
                    for (size_t idx = 0; idx < result.rows.size(); ++idx)
                        if (jobs[idx].value_index == v) ys.push_back(pick(result.rows[idx]));
                    std::sort(ys.begin(), ys.end());
                    series.y.push_back(ys.empty() ? 0.0 : ys[ys.size() / 2]);
                }
                return series;
            };
            SvgSeries mech = median_series([](const SweepRow& r) { return r.daily.d_mechanism; });
            mech.label = "mechanism";
            SvgSeries none = median_series([](const SweepRow& r) { return r.daily.d_nocache; });
            none.label = "no caching";
            SvgSeries pop = median_series([](const SweepRow& r) { return r.daily.d_highestpop; });
            pop.label = "highest popularity";
            SvgSeries greedy = median_series([](const SweepRow& r) { return r.daily.d_greedy; });
            greedy.label = "greedy";
            std::ofstream svg(std::filesystem::path(out_dir) / "sweep.svg");
            svg << render_line_chart("daily average delay vs " + spec.axis, spec.axis,
                                     "daily average delay (ms)", xs,
                                     {mech, none, pop, greedy});
        }
    }
    return result;
}

}  // namespace smallcell
