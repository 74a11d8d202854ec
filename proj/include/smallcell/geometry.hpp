#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace smallcell {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

/// A set of equal-radius coverage disks with per-SBS storage capacities.
struct SbsLayout {
    std::vector<Point> positions;
    double radius_m = 0.0;
    std::vector<double> capacities_gb;

    int count() const { return static_cast<int>(positions.size()); }
};

/// Maximal plane region covered by exactly the SBS set `covering`,
/// aggregated over grid cells (disconnected parts with the same covering
/// set count as one region).
struct SimplestRegion {
    int id = 0;
    std::vector<int> covering;  // sorted SBS indices, 1..3 entries
    double area_m2 = 0.0;
};

struct CoverageMap {
    std::vector<SimplestRegion> regions;
    double total_area_m2 = 0.0;           // area of the union of disks
    std::vector<double> per_sbs_area_m2;  // sum of region areas containing i
    double overlap = 0.0;                 // (sum per-SBS - total) / total
    double resolution_m = 0.0;
    std::vector<std::vector<int>> regions_by_sbs;  // region ids covering SBS i

    int region_count() const { return static_cast<int>(regions.size()); }
};

/// Closed-form patch areas for the triangular-grid disk arrangement with
/// neighbor spacing 2*R*cos(theta): full disk, full pairwise lens, and
/// triple-overlap patch (zero until theta exceeds pi/6).
struct HexPatchAreas {
    double single_m2 = 0.0;  // pi R^2
    double lens_m2 = 0.0;    // 2 R^2 (theta - cos theta sin theta)
    double triple_m2 = 0.0;
    double theta = 0.0;
    double compress = 0.0;  // cos(theta)
};

inline constexpr double kMinCompress = 0.57735026918962576451;  // 1/sqrt(3)

/// Triangular lattice of SBS centers with nearest-neighbor spacing 2*R*c,
/// filled ring by ring from the center; partial outer rings fill in
/// ascending angular order. c outside [1/sqrt(3), 1] throws.
SbsLayout generate_hex_layout(int count, double radius_m, double compress,
                              double capacity_gb = 1.0);

/// Uniform i.i.d. centers inside `bounds`; whole layouts with a 4-fold
/// covered point are rejected and resampled (budget 10000). Deterministic
/// per seed.
SbsLayout generate_random_layout(int count, double radius_m, Rect bounds, uint64_t seed,
                                 double capacity_gb = 1.0);

/// Throws when some plane point is covered by four or more disks. The test
/// is exact (Helly reduction to triple intersections), not sampled.
void validate_layout(const SbsLayout& layout);

/// Partitions the covered plane by sampling cell centers on a regular grid
/// of side `resolution_m`; cells sharing a covering set aggregate into one
/// region. Throws if any cell sees four or more disks.
CoverageMap build_coverage_map(const SbsLayout& layout, double resolution_m = 0.25);

double overlap_percentage(const CoverageMap& map);

/// Valid for 0 < theta < arccos(1/sqrt(3)).
HexPatchAreas hex_patch_areas(double radius_m, double theta);

/// Bisects the compress factor so that the sampled overlap percentage of an
/// I-SBS hex layout hits `target_overlap` (O is strictly decreasing in c).
double find_hex_compress_for_overlap(int count, double radius_m, double target_overlap,
                                     double resolution_m = 0.5, double tolerance = 1e-3);

// Structured-text (JSON) layout serialization: positions, radius, capacities.
std::string layout_to_json(const SbsLayout& layout);
SbsLayout layout_from_json(const std::string& text);
void save_layout(const SbsLayout& layout, const std::string& path);
SbsLayout load_layout(const std::string& path);

/// CSV rows: region id, covering set as ';'-joined sorted indices, area.
void write_coverage_csv(const CoverageMap& map, std::ostream& out);

}  // namespace smallcell
