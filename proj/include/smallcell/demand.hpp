#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "smallcell/geometry.hpp"

namespace smallcell {

/// Mean user density per hour of day, users per square meter.
struct DensityProfile {
    std::array<double, 24> users_per_m2{};

    /// Hours are 1-based; multi-day runs wrap around the 24-hour table.
    double at_hour(int t) const { return users_per_m2[((t - 1) % 24 + 24) % 24]; }

    static DensityProfile weekday_default();
};

/// Sizes are kept on a 1 MB fixed-point grid (decimal: 1 GB = 1000 MB) so
/// ribbon interval arithmetic is exact.
inline constexpr int64_t kMbPerGb = 1000;
inline int64_t mb_from_gb(double gb) { return static_cast<int64_t>(std::llround(gb * kMbPerGb)); }
inline double gb_from_mb(int64_t mb) { return static_cast<double>(mb) / kMbPerGb; }

struct Content {
    int sp = 0;
    int id = 0;          // index within the SP's set
    int64_t size_mb = 0;
    double pop_scale = 0.0;     // a: peak popularity scale
    double pop_lifespan = 1.0;  // b: lifespan in hours
    double pop_upload = 0.0;    // t0: upload hour (may be negative)

    double size_gb() const { return gb_from_mb(size_mb); }
};

struct CatalogRanges {
    double size_gb_min = 0.1, size_gb_max = 1.0;
    double a_min = 0.0, a_max = 3.0;
    double b_min = 4.0, b_max = 12.0;
    double t0_min = -75.0, t0_max = 25.0;
};

struct Catalog {
    std::vector<std::vector<Content>> by_sp;
    double mu = 1.0;
    double sigma = 0.5;

    int sp_count() const { return static_cast<int>(by_sp.size()); }
    int total_contents() const {
        int k = 0;
        for (const auto& v : by_sp) k += static_cast<int>(v.size());
        return k;
    }
};

/// Per-region Poisson user draws for one hour plus the aggregates the delay
/// model needs.
struct RegionUserCounts {
    int hour = 0;
    std::vector<int64_t> per_region;
    std::vector<int64_t> per_sbs;
    int64_t total = 0;
};

/// Time-shifted, scaled log-normal popularity: a * f((t - t0)/b) with f the
/// log-normal pdf; zero at and before the upload time.
double content_popularity(const Content& content, double t, double mu, double sigma);

/// Hour at which the popularity curve peaks: t0 + b * exp(mu - sigma^2).
double popularity_peak_hour(const Content& content, double mu, double sigma);

/// Contents split near-evenly across SPs; sizes and popularity parameters
/// drawn uniformly from `ranges`. Deterministic per seed.
Catalog generate_catalog(int sp_count, int total_contents, const CatalogRanges& ranges,
                         uint64_t seed, double mu = 1.0, double sigma = 0.5);

/// Independent Poisson draw per simplest region with mean u(t) * area.
/// Streams derive from (seed, hour, region) so draws are stable when other
/// regions are added.
RegionUserCounts sample_region_users(const CoverageMap& map, const DensityProfile& profile, int t,
                                     uint64_t seed);

std::string catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const std::string& text);

}  // namespace smallcell
