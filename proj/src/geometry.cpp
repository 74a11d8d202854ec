#include "smallcell/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "smallcell/rng.hpp"

namespace smallcell {

namespace {

constexpr double kPi = std::numbers::pi;

double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

bool in_disk(const Point& p, const Point& center, double r2) {
    return dist2(p, center) <= r2;
}

// Intersection points of two equal-radius circles; empty when disjoint.
std::vector<Point> circle_intersections(const Point& a, const Point& b, double r) {
    std::vector<Point> out;
    const double d2 = dist2(a, b);
    const double d = std::sqrt(d2);
    if (d > 2.0 * r || d == 0.0) return out;
    const double h2 = r * r - d2 / 4.0;
    const double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    const Point mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
    const double ux = (b.x - a.x) / d;
    const double uy = (b.y - a.y) / d;
    out.push_back({mid.x - uy * h, mid.y + ux * h});
    out.push_back({mid.x + uy * h, mid.y - ux * h});
    return out;
}

// Whether three closed disks share a point. The intersection of disks is
// convex; if non-empty it contains a circle-circle intersection point or a
// center, so checking those candidates is exact.
bool disks_share_point(const Point& a, const Point& b, const Point& c, double r) {
    const double r2 = r * r * (1.0 + 1e-12);
    const std::array<Point, 3> centers{a, b, c};
    for (const auto& p : centers) {
        if (in_disk(p, a, r2) && in_disk(p, b, r2) && in_disk(p, c, r2)) return true;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            for (const auto& p : circle_intersections(centers[i], centers[j], r)) {
                if (in_disk(p, a, r2) && in_disk(p, b, r2) && in_disk(p, c, r2)) return true;
            }
        }
    }
    return false;
}

// Exact 4-overlap test. By Helly's theorem in the plane, four convex sets
// have a common point iff every three of them do.
bool has_four_fold_overlap(const std::vector<Point>& centers, double r) {
    const int n = static_cast<int>(centers.size());
    const double limit = 4.0 * r * r * (1.0 + 1e-12);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (dist2(centers[a], centers[b]) > limit) continue;
            for (int c = b + 1; c < n; ++c) {
                if (dist2(centers[a], centers[c]) > limit) continue;
                if (dist2(centers[b], centers[c]) > limit) continue;
                if (!disks_share_point(centers[a], centers[b], centers[c], r)) continue;
                for (int d = c + 1; d < n; ++d) {
                    if (dist2(centers[a], centers[d]) > limit) continue;
                    if (dist2(centers[b], centers[d]) > limit) continue;
                    if (dist2(centers[c], centers[d]) > limit) continue;
                    if (disks_share_point(centers[a], centers[b], centers[d], r) &&
                        disks_share_point(centers[a], centers[c], centers[d], r) &&
                        disks_share_point(centers[b], centers[c], centers[d], r))
                        return true;
                }
            }
        }
    return false;
}

std::vector<Point> hex_ring_sites(int ring, double spacing) {
    std::vector<Point> sites;
    if (ring == 0) {
        sites.push_back({0.0, 0.0});
        return sites;
    }
    std::array<Point, 6> corners;
    for (int s = 0; s < 6; ++s) {
        const double ang = kPi / 3.0 * s;
        corners[s] = {spacing * ring * std::cos(ang), spacing * ring * std::sin(ang)};
    }
    for (int s = 0; s < 6; ++s) {
        const Point& from = corners[s];
        const Point& to = corners[(s + 1) % 6];
        for (int step = 0; step < ring; ++step) {
            const double f = static_cast<double>(step) / ring;
            sites.push_back({from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f});
        }
    }
    std::sort(sites.begin(), sites.end(), [](const Point& a, const Point& b) {
        double aa = std::atan2(a.y, a.x);
        double ab = std::atan2(b.y, b.x);
        if (aa < 0) aa += 2.0 * kPi;
        if (ab < 0) ab += 2.0 * kPi;
        return aa < ab;
    });
    return sites;
}

}  // namespace

SbsLayout generate_hex_layout(int count, double radius_m, double compress, double capacity_gb) {
    if (count < 1) throw std::invalid_argument("hex layout: count must be >= 1");
    if (radius_m <= 0.0) throw std::invalid_argument("hex layout: radius must be > 0");
    if (compress < kMinCompress - 1e-12 || compress > 1.0 + 1e-12)
        throw std::invalid_argument("hex layout: compress factor must lie in [1/sqrt(3), 1]");
    SbsLayout layout;
    layout.radius_m = radius_m;
    const double spacing = 2.0 * radius_m * compress;
    for (int ring = 0; layout.count() < count; ++ring) {
        for (const auto& p : hex_ring_sites(ring, spacing)) {
            if (layout.count() >= count) break;
            layout.positions.push_back(p);
        }
    }
    layout.capacities_gb.assign(count, capacity_gb);
    return layout;
}

SbsLayout generate_random_layout(int count, double radius_m, Rect bounds, uint64_t seed,
                                 double capacity_gb) {
    if (count < 1) throw std::invalid_argument("random layout: count must be >= 1");
    if (radius_m <= 0.0) throw std::invalid_argument("random layout: radius must be > 0");
    if (bounds.max_x <= bounds.min_x || bounds.max_y <= bounds.min_y)
        throw std::invalid_argument("random layout: empty bounds");
    RngStream rng(derive_seed(seed, {0x6c61796f7574ull}));
    constexpr int kBudget = 10000;
    for (int attempt = 0; attempt < kBudget; ++attempt) {
        std::vector<Point> centers(count);
        for (auto& p : centers) {
            p.x = rng.uniform(bounds.min_x, bounds.max_x);
            p.y = rng.uniform(bounds.min_y, bounds.max_y);
        }
        if (!has_four_fold_overlap(centers, radius_m)) {
            SbsLayout layout;
            layout.positions = std::move(centers);
            layout.radius_m = radius_m;
            layout.capacities_gb.assign(count, capacity_gb);
            return layout;
        }
    }
    throw std::runtime_error("random layout: rejection budget exhausted, bounds too small");
}

void validate_layout(const SbsLayout& layout) {
    if (layout.count() < 1) throw std::invalid_argument("layout: needs at least one SBS");
    if (layout.radius_m <= 0.0) throw std::invalid_argument("layout: radius must be > 0");
    if (layout.capacities_gb.size() != layout.positions.size())
        throw std::invalid_argument("layout: one capacity per SBS required");
    if (has_four_fold_overlap(layout.positions, layout.radius_m))
        throw std::invalid_argument("layout: a point is covered by four or more disks");
}

CoverageMap build_coverage_map(const SbsLayout& layout, double resolution_m) {
    if (resolution_m <= 0.0) throw std::invalid_argument("coverage map: resolution must be > 0");
    if (layout.count() < 1) throw std::invalid_argument("coverage map: empty layout");
    const double r = layout.radius_m;
    const double r2 = r * r;
    const int n = layout.count();

    double min_x = layout.positions[0].x, max_x = min_x;
    double min_y = layout.positions[0].y, max_y = min_y;
    for (const auto& p : layout.positions) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    min_x -= r;
    min_y -= r;
    max_x += r;
    max_y += r;
    const int64_t nx = static_cast<int64_t>(std::ceil((max_x - min_x) / resolution_m));
    const int64_t ny = static_cast<int64_t>(std::ceil((max_y - min_y) / resolution_m));

    // Accumulate one row at a time: per cell up to 3 covering indices.
    using Key = std::array<int32_t, 3>;
    std::map<Key, int64_t> cell_counts;
    std::vector<int8_t> row_n(nx);
    std::vector<std::array<int32_t, 3>> row_ids(nx);

    // Disks sorted by x-range give a cheap per-row candidate list.
    for (int64_t iy = 0; iy < ny; ++iy) {
        const double cy = min_y + (iy + 0.5) * resolution_m;
        std::fill(row_n.begin(), row_n.end(), 0);
        for (int i = 0; i < n; ++i) {
            const double dy = cy - layout.positions[i].y;
            const double span2 = r2 - dy * dy;
            if (span2 < 0.0) continue;
            const double span = std::sqrt(span2);
            const double lo = layout.positions[i].x - span;
            const double hi = layout.positions[i].x + span;
            int64_t ix_lo = static_cast<int64_t>(std::floor((lo - min_x) / resolution_m - 0.5));
            int64_t ix_hi = static_cast<int64_t>(std::ceil((hi - min_x) / resolution_m));
            ix_lo = std::max<int64_t>(ix_lo, 0);
            ix_hi = std::min<int64_t>(ix_hi, nx - 1);
            const double cx0 = layout.positions[i].x;
            for (int64_t ix = ix_lo; ix <= ix_hi; ++ix) {
                const double dx = min_x + (ix + 0.5) * resolution_m - cx0;
                if (dx * dx > span2) continue;
                if (row_n[ix] >= 3)
                    throw std::runtime_error(
                        "coverage map: a cell is covered by four or more disks");
                row_ids[ix][row_n[ix]++] = i;
            }
        }
        for (int64_t ix = 0; ix < nx; ++ix) {
            if (row_n[ix] == 0) continue;
            Key key{-1, -1, -1};
            for (int k = 0; k < row_n[ix]; ++k) key[k] = row_ids[ix][k];
            // Indices were appended in ascending i, already sorted.
            ++cell_counts[key];
        }
    }

    CoverageMap map;
    map.resolution_m = resolution_m;
    map.per_sbs_area_m2.assign(n, 0.0);
    map.regions_by_sbs.resize(n);
    const double cell_area = resolution_m * resolution_m;
    int64_t covered_cells = 0;
    int id = 0;
    for (const auto& [key, cells] : cell_counts) {
        SimplestRegion region;
        region.id = id++;
        for (int32_t v : key)
            if (v >= 0) region.covering.push_back(v);
        region.area_m2 = static_cast<double>(cells) * cell_area;
        covered_cells += cells;
        for (int i : region.covering) {
            map.per_sbs_area_m2[i] += region.area_m2;
            map.regions_by_sbs[i].push_back(region.id);
        }
        map.regions.push_back(std::move(region));
    }
    map.total_area_m2 = static_cast<double>(covered_cells) * cell_area;
    double sum_per_sbs = 0.0;
    for (double a : map.per_sbs_area_m2) sum_per_sbs += a;
    map.overlap = map.total_area_m2 > 0.0 ? (sum_per_sbs - map.total_area_m2) / map.total_area_m2
                                          : 0.0;
    return map;
}

double overlap_percentage(const CoverageMap& map) { return map.overlap; }

HexPatchAreas hex_patch_areas(double radius_m, double theta) {
    if (radius_m <= 0.0) throw std::invalid_argument("patch areas: radius must be > 0");
    const double theta_max = std::acos(kMinCompress);
    if (theta <= 0.0 || theta >= theta_max)
        throw std::invalid_argument("patch areas: theta must lie in (0, arccos(1/sqrt(3)))");
    HexPatchAreas a;
    a.theta = theta;
    a.compress = std::cos(theta);
    const double r2 = radius_m * radius_m;
    a.single_m2 = kPi * r2;
    a.lens_m2 = 2.0 * r2 * (theta - std::cos(theta) * std::sin(theta));
    if (theta <= kPi / 6.0) {
        a.triple_m2 = 0.0;
    } else {
        const double c = std::cos(theta), s = std::sin(theta);
        a.triple_m2 = r2 * (3.0 * (theta - kPi / 6.0) + std::sqrt(3.0) * c * c - 3.0 * s * c);
    }
    return a;
}

double find_hex_compress_for_overlap(int count, double radius_m, double target_overlap,
                                     double resolution_m, double tolerance) {
    double lo = kMinCompress, hi = 1.0;  // O decreasing in c: O(lo) high, O(hi) = 0
    const auto overlap_at = [&](double c) {
        return build_coverage_map(generate_hex_layout(count, radius_m, c), resolution_m).overlap;
    };
    if (target_overlap > overlap_at(lo) || target_overlap < 0.0)
        throw std::invalid_argument("compress search: target overlap unreachable");
    for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2.0;
        const double o = overlap_at(mid);
        if (std::abs(o - target_overlap) < tolerance) return mid;
        if (o > target_overlap)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0;
}

std::string layout_to_json(const SbsLayout& layout) {
    nlohmann::json j;
    auto& pos = j["positions"];
    pos = nlohmann::json::array();
    for (const auto& p : layout.positions) pos.push_back({p.x, p.y});
    j["radius_m"] = layout.radius_m;
    j["capacities_gb"] = layout.capacities_gb;
    return j.dump(2);
}

SbsLayout layout_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SbsLayout layout;
    for (const auto& p : j.at("positions"))
        layout.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    layout.radius_m = j.at("radius_m").get<double>();
    layout.capacities_gb = j.at("capacities_gb").get<std::vector<double>>();
    validate_layout(layout);
    return layout;
}

void save_layout(const SbsLayout& layout, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << layout_to_json(layout) << "\n";
}

SbsLayout load_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return layout_from_json(ss.str());
}

void write_coverage_csv(const CoverageMap& map, std::ostream& out) {
    out << "region,covering,area_m2\n";
    for (const auto& region : map.regions) {
        out << region.id << ",";
        for (size_t k = 0; k < region.covering.size(); ++k) {
            if (k) out << ";";
            out << region.covering[k];
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g", region.area_m2);
        out << "," << buf << "\n";
    }
}

}  // namespace smallcell
