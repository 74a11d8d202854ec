#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "smallcell/geometry.hpp"

using namespace smallcell;

namespace {

constexpr double kPi = std::numbers::pi;

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const SimplestRegion* find_region(const CoverageMap& map, std::vector<int> covering) {
    for (const auto& r : map.regions)
        if (r.covering == covering) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("hex layout: tangent disks at c=1") {
    const SbsLayout layout = generate_hex_layout(7, 50.0, 1.0);
    REQUIRE(layout.count() == 7);
    // ring 1 sits at distance 2Rc = 100 from the center and from neighbors
    for (int i = 1; i < 7; ++i) CHECK(dist(layout.positions[0], layout.positions[i]) ==
                                      doctest::Approx(100.0).epsilon(1e-12));
    const CoverageMap map = build_coverage_map(layout, 0.25);
    CHECK(map.overlap == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("hex layout: compress factor domain") {
    CHECK_THROWS_AS(generate_hex_layout(7, 50.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(generate_hex_layout(7, 50.0, 1.01), std::invalid_argument);
    CHECK_NOTHROW(generate_hex_layout(7, 50.0, kMinCompress));
}

TEST_CASE("hex layout: ring fill is deterministic and ring-ordered") {
    const SbsLayout a = generate_hex_layout(24, 50.0, 0.8);
    const SbsLayout b = generate_hex_layout(24, 50.0, 0.8);
    for (int i = 0; i < 24; ++i) {
        CHECK(a.positions[i].x == b.positions[i].x);
        CHECK(a.positions[i].y == b.positions[i].y);
    }
    // distances from the center never decrease ring by ring
    CHECK(dist(a.positions[0], {0, 0}) == doctest::Approx(0.0));
    for (int i = 1; i <= 6; ++i)
        CHECK(dist(a.positions[i], {0, 0}) == doctest::Approx(80.0).epsilon(1e-9));
    for (int i = 7; i < 19; ++i)
        CHECK(dist(a.positions[i], {0, 0}) >= 80.0 * std::sqrt(3.0) - 1e-9);
}

TEST_CASE("compress factor for target overlap is found by bisection") {
    const double c = find_hex_compress_for_overlap(24, 50.0, 0.54, 0.5, 1e-3);
    const CoverageMap map = build_coverage_map(generate_hex_layout(24, 50.0, c), 0.5);
    CHECK(map.overlap == doctest::Approx(0.54).epsilon(0.01));
}

TEST_CASE("random layout: determinism and coverage constraint") {
    const Rect bounds{0, 0, 500, 500};
    const SbsLayout a = generate_random_layout(20, 50.0, bounds, 7);
    const SbsLayout b = generate_random_layout(20, 50.0, bounds, 7);
    REQUIRE(a.count() == 20);
    for (int i = 0; i < 20; ++i) {
        CHECK(a.positions[i].x == b.positions[i].x);
        CHECK(a.positions[i].y == b.positions[i].y);
    }
    // dense grid sampling: every cell sees at most 3 disks (else this throws)
    CHECK_NOTHROW(build_coverage_map(a, 0.5));

    const SbsLayout single = generate_random_layout(1, 50.0, bounds, 3);
    CHECK(build_coverage_map(single, 0.25).overlap == doctest::Approx(0.0));
}

TEST_CASE("random layout: impossible bounds exhaust the rejection budget") {
    // 30 disks of radius 50 in a 10x10 box always 4-overlap
    CHECK_THROWS_AS(generate_random_layout(30, 50.0, {0, 0, 10, 10}, 1), std::runtime_error);
}

TEST_CASE("two-disk map: three regions and the lens oracle") {
    SbsLayout layout;
    layout.radius_m = 50.0;
    layout.positions = {{0, 0}, {60, 0}};
    layout.capacities_gb = {1.0, 1.0};
    const CoverageMap map = build_coverage_map(layout, 0.25);
    REQUIRE(map.region_count() == 3);
    CHECK(find_region(map, {0}) != nullptr);
    CHECK(find_region(map, {1}) != nullptr);
    const SimplestRegion* lens = find_region(map, {0, 1});
    REQUIRE(lens != nullptr);

    // theta = arccos(d / 2R) = arccos(0.6)
    const double theta = std::acos(0.6);
    const HexPatchAreas areas = hex_patch_areas(50.0, theta);
    CHECK(areas.lens_m2 == doctest::Approx(2236.4).epsilon(1e-3));
    CHECK(lens->area_m2 == doctest::Approx(areas.lens_m2).epsilon(0.01));

    // overlap percentage via inclusion-exclusion on the same lens
    const double total = 2.0 * kPi * 2500.0 - areas.lens_m2;
    CHECK(overlap_percentage(map) == doctest::Approx(areas.lens_m2 / total).epsilon(0.01));
    CHECK(overlap_percentage(map) == doctest::Approx(0.166).epsilon(0.01));
}

TEST_CASE("one-disk map area approaches pi R^2") {
    SbsLayout layout;
    layout.radius_m = 50.0;
    layout.positions = {{13.7, -2.9}};
    layout.capacities_gb = {1.0};
    const CoverageMap map = build_coverage_map(layout, 0.25);
    REQUIRE(map.region_count() == 1);
    CHECK(map.total_area_m2 == doctest::Approx(kPi * 2500.0).epsilon(0.01));
    CHECK(map.overlap == doctest::Approx(0.0));
}

TEST_CASE("disjoint disks have zero overlap") {
    SbsLayout layout;
    layout.radius_m = 50.0;
    layout.positions = {{0, 0}, {300, 0}};
    layout.capacities_gb = {1.0, 1.0};
    CHECK(build_coverage_map(layout, 0.5).overlap == doctest::Approx(0.0));
}

TEST_CASE("patch areas: limits and the pi/6 branch point") {
    const HexPatchAreas tiny = hex_patch_areas(50.0, 1e-7);
    CHECK(tiny.single_m2 == doctest::Approx(kPi * 2500.0));
    CHECK(tiny.lens_m2 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(tiny.triple_m2 == 0.0);

    // the triple patch vanishes continuously at theta = pi/6:
    // sqrt(3) cos^2(pi/6) = 3 sin(pi/6) cos(pi/6)
    CHECK(hex_patch_areas(50.0, kPi / 6.0).triple_m2 == 0.0);
    CHECK(hex_patch_areas(50.0, kPi / 6.0 + 1e-8).triple_m2 ==
          doctest::Approx(0.0).epsilon(1e-6));

    const double theta = std::acos(0.6);
    const HexPatchAreas a = hex_patch_areas(50.0, theta);
    CHECK(a.lens_m2 == doctest::Approx(2.0 * 2500.0 * (theta - 0.6 * 0.8)).epsilon(1e-12));
    CHECK(a.compress == doctest::Approx(0.6));

    CHECK_THROWS_AS(hex_patch_areas(50.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hex_patch_areas(50.0, std::acos(kMinCompress) + 0.01),
                    std::invalid_argument);
}

TEST_CASE("patch areas agree with Monte-Carlo sampling") {
    for (double c : {0.9, 0.7}) {
        const double theta = std::acos(c);
        const HexPatchAreas areas = hex_patch_areas(50.0, theta);
        const double lens_mc = oracle::monte_carlo_lens_area(50.0, 100.0 * c, 2000000, 11);
        CHECK(areas.lens_m2 == doctest::Approx(lens_mc).epsilon(0.01));
        if (areas.triple_m2 > 0.0) {
            const double triple_mc =
                oracle::monte_carlo_triple_area(50.0, 100.0 * c, 4000000, 12);
            CHECK(areas.triple_m2 == doctest::Approx(triple_mc).epsilon(0.02));
        }
    }
}

TEST_CASE("partition property: region areas sum to totals") {
    const SbsLayout layout = generate_random_layout(12, 50.0, {0, 0, 400, 400}, 21);
    const CoverageMap map = build_coverage_map(layout, 0.5);
    double sum = 0.0;
    for (const auto& r : map.regions) sum += r.area_m2;
    CHECK(sum == doctest::Approx(map.total_area_m2).epsilon(1e-12));
    // per-SBS sampled area vs the exact disk area, against a sampling-error
    // bound of ~perimeter * resolution
    const double bound = 2.0 * (2.0 * kPi * 50.0 * map.resolution_m);
    for (int i = 0; i < map.regions_by_sbs.size(); ++i) {
        double covered = 0.0;
        for (int j : map.regions_by_sbs[i]) covered += map.regions[j].area_m2;
        CHECK(covered == doctest::Approx(map.per_sbs_area_m2[i]).epsilon(1e-12));
        CHECK(std::abs(covered - kPi * 2500.0) <= bound);
    }
}

TEST_CASE("hex oracle: sampled patch classes match the closed forms") {
    // two rings -> the center and ring one are interior (all six neighbors)
    const double c = 0.7;
    const double theta = std::acos(c);
    const SbsLayout layout = generate_hex_layout(19, 50.0, c);
    const CoverageMap map = build_coverage_map(layout, 0.25);
    const HexPatchAreas areas = hex_patch_areas(50.0, theta);

    // interior SBSs: all six lattice neighbors present
    const double spacing = 100.0 * c;
    std::vector<int> interior;
    for (int i = 0; i < layout.count(); ++i) {
        int neighbors = 0;
        for (int j = 0; j < layout.count(); ++j)
            if (j != i && dist(layout.positions[i], layout.positions[j]) < spacing * 1.01)
                ++neighbors;
        if (neighbors == 6) interior.push_back(i);
    }
    REQUIRE(interior.size() == 7);

    const int a = interior[0], b = interior[1];
    REQUIRE(dist(layout.positions[a], layout.positions[b]) == doctest::Approx(spacing));
    // common lattice neighbors of the pair
    std::vector<int> commons;
    for (int k = 0; k < layout.count(); ++k) {
        if (k == a || k == b) continue;
        if (dist(layout.positions[a], layout.positions[k]) < spacing * 1.01 &&
            dist(layout.positions[b], layout.positions[k]) < spacing * 1.01)
            commons.push_back(k);
    }
    REQUIRE(commons.size() == 2);

    const auto region_area = [&](std::vector<int> covering) {
        std::sort(covering.begin(), covering.end());
        const SimplestRegion* r = find_region(map, covering);
        return r ? r->area_m2 : 0.0;
    };
    // exactly-two region plus its two triple caps reconstructs the full lens
    const double lens_sampled = region_area({a, b}) + region_area({a, b, commons[0]}) +
                                region_area({a, b, commons[1]});
    CHECK(lens_sampled == doctest::Approx(areas.lens_m2).epsilon(0.01));
    CHECK(region_area({a, b, commons[0]}) == doctest::Approx(areas.triple_m2).epsilon(0.01));

    // per-SBS accounting: exclusive + half of lenses + third of triples
    for (int i : interior) {
        double acc = 0.0;
        for (int j : map.regions_by_sbs[i]) {
            const auto& r = map.regions[j];
            acc += r.area_m2 / static_cast<double>(r.covering.size());
        }
        CHECK(acc == doctest::Approx(areas.single_m2 - 3.0 * areas.lens_m2 +
                                     2.0 * areas.triple_m2)
                         .epsilon(0.01));
    }
}

TEST_CASE("area fraction of a boundary-light subset grows with theta") {
    // analytic check of the fraction (A1 - x A2 + y A3)/(A1 - 3 A2 + 2 A3)
    // for boundary coefficients x < 3, y < 2 with 1 + y - x > 0
    const double theta_hi = std::acos(kMinCompress);
    for (auto [x, y] : std::vector<std::pair<double, double>>{
             {2.5, 1.6}, {2.0, 1.2}, {1.0, 0.5}, {0.0, 0.0}}) {
        double prev = 0.0;
        bool first = true;
        for (double theta = 0.05; theta < theta_hi - 1e-6; theta += 0.02) {
            const HexPatchAreas a = hex_patch_areas(50.0, theta);
            const double frac = (a.single_m2 - x * a.lens_m2 + y * a.triple_m2) /
                                (a.single_m2 - 3.0 * a.lens_m2 + 2.0 * a.triple_m2);
            if (!first) CHECK(frac >= prev - 1e-12);
            prev = frac;
            first = false;
        }
    }
}

TEST_CASE("overlap decreases strictly in the compress factor") {
    double prev = 2.0;
    for (double c : {0.62, 0.7, 0.8, 0.9, 1.0}) {
        const CoverageMap map = build_coverage_map(generate_hex_layout(19, 50.0, c), 0.5);
        CHECK(map.overlap < prev);
        prev = map.overlap;
    }
}

TEST_CASE("layout serialization round trip") {
    const SbsLayout layout = generate_hex_layout(7, 50.0, 0.8, 100.0);
    const SbsLayout back = layout_from_json(layout_to_json(layout));
    REQUIRE(back.count() == layout.count());
    CHECK(back.radius_m == layout.radius_m);
    for (int i = 0; i < 7; ++i) {
        CHECK(back.positions[i].x == layout.positions[i].x);
        CHECK(back.capacities_gb[i] == 100.0);
    }
}

TEST_CASE("coverage CSV export lists sorted covering sets") {
    SbsLayout layout;
    layout.radius_m = 50.0;
    layout.positions = {{0, 0}, {60, 0}};
    layout.capacities_gb = {1.0, 1.0};
    const CoverageMap map = build_coverage_map(layout, 1.0);
    std::ostringstream out;
    write_coverage_csv(map, out);
    const std::string text = out.str();
    CHECK(text.find("region,covering,area_m2") == 0);
    CHECK(text.find("0;1") != std::string::npos);
}
