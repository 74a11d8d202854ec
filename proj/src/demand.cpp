#include "smallcell/demand.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "smallcell/rng.hpp"

namespace smallcell {

DensityProfile DensityProfile::weekday_default() {
    // users per m^2, hourly means for one day
    DensityProfile p;
    constexpr std::array<double, 24> scaled = {380,  210,  110,  110,  140,  200,  300,  650,
                                               1100, 1260, 1400, 1570, 1530, 1370, 1310, 1250,
                                               900,  800,  940,  1100, 1200, 1070, 610,  450};
    for (size_t i = 0; i < scaled.size(); ++i) p.users_per_m2[i] = scaled[i] * 1e-5;
    return p;
}

double content_popularity(const Content& content, double t, double mu, double sigma) {
    const double x = (t - content.pop_upload) / content.pop_lifespan;
    if (x <= 0.0) return 0.0;
    const double lx = std::log(x);
    const double pdf = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma * x) *
                       std::exp(-(lx - mu) * (lx - mu) / (2.0 * sigma * sigma));
    return content.pop_scale * pdf;
}

double popularity_peak_hour(const Content& content, double mu, double sigma) {
    return content.pop_upload + content.pop_lifespan * std::exp(mu - sigma * sigma);
}

Catalog generate_catalog(int sp_count, int total_contents, const CatalogRanges& ranges,
                         uint64_t seed, double mu, double sigma) {
    if (sp_count < 1) throw std::invalid_argument("catalog: sp_count must be >= 1");
    if (total_contents < sp_count)
        throw std::invalid_argument("catalog: need at least one content per SP");
    const auto check = [](double lo, double hi, const char* what) {
        if (hi < lo) throw std::invalid_argument(std::string("catalog: empty range for ") + what);
    };
    check(ranges.size_gb_min, ranges.size_gb_max, "size");
    check(ranges.a_min, ranges.a_max, "a");
    check(ranges.b_min, ranges.b_max, "b");
    check(ranges.t0_min, ranges.t0_max, "t0");
    if (ranges.size_gb_min <= 0.0) throw std::invalid_argument("catalog: sizes must be > 0");
    if (ranges.b_min <= 0.0) throw std::invalid_argument("catalog: lifespans must be > 0");
    if (ranges.a_min < 0.0) throw std::invalid_argument("catalog: popularity scale must be >= 0");

    Catalog catalog;
    catalog.mu = mu;
    catalog.sigma = sigma;
    catalog.by_sp.resize(sp_count);
    RngStream rng(derive_seed(seed, {0x636174616c6f67ull}));
    for (int l = 0; l < sp_count; ++l) {
        const int count = total_contents / sp_count + (l < total_contents % sp_count ? 1 : 0);
        catalog.by_sp[l].reserve(count);
        for (int k = 0; k < count; ++k) {
            Content c;
            c.sp = l;
            c.id = k;
            c.size_mb = std::max<int64_t>(1, mb_from_gb(rng.uniform(ranges.size_gb_min,
                                                                    ranges.size_gb_max)));
            c.pop_scale = rng.uniform(ranges.a_min, ranges.a_max);
            c.pop_lifespan = rng.uniform(ranges.b_min, ranges.b_max);
            c.pop_upload = rng.uniform(ranges.t0_min, ranges.t0_max);
            catalog.by_sp[l].push_back(c);
        }
    }
    return catalog;
}

RegionUserCounts sample_region_users(const CoverageMap& map, const DensityProfile& profile, int t,
                                     uint64_t seed) {
    if (t < 1) throw std::invalid_argument("user sampling: hours are 1-based");
    RegionUserCounts counts;
    counts.hour = t;
    const double density = profile.at_hour(t);
    counts.per_region.resize(map.regions.size());
    counts.per_sbs.assign(map.per_sbs_area_m2.size(), 0);
    for (size_t j = 0; j < map.regions.size(); ++j) {
        RngStream rng(derive_seed(seed, {static_cast<uint64_t>(t), j}));
        const int64_t users = rng.poisson(density * map.regions[j].area_m2);
        counts.per_region[j] = users;
        counts.total += users;
        for (int i : map.regions[j].covering) counts.per_sbs[i] += users;
    }
    return counts;
}

std::string catalog_to_json(const Catalog& catalog) {
    nlohmann::json j;
    j["mu"] = catalog.mu;
    j["sigma"] = catalog.sigma;
    auto& sps = j["sps"];
    sps = nlohmann::json::array();
    for (const auto& contents : catalog.by_sp) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : contents) {
            arr.push_back({{"size_mb", c.size_mb},
                           {"a", c.pop_scale},
                           {"b", c.pop_lifespan},
                           {"t0", c.pop_upload}});
        }
        sps.push_back(std::move(arr));
    }
    return j.dump(2);
}

Catalog catalog_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Catalog catalog;
    catalog.mu = j.at("mu").get<double>();
    catalog.sigma = j.at("sigma").get<double>();
    int l = 0;
    for (const auto& arr : j.at("sps")) {
        std::vector<Content> contents;
        int k = 0;
        for (const auto& e : arr) {
            Content c;
            c.sp = l;
            c.id = k++;
            c.size_mb = e.at("size_mb").get<int64_t>();
            c.pop_scale = e.at("a").get<double>();
            c.pop_lifespan = e.at("b").get<double>();
            c.pop_upload = e.at("t0").get<double>();
            contents.push_back(c);
        }
        catalog.by_sp.push_back(std::move(contents));
        ++l;
    }
    return catalog;
}

}  // namespace smallcell
