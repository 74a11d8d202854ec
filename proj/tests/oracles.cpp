#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smallcell/rng.hpp"

namespace oracle {

namespace {

void assign_recursive(const std::vector<std::vector<double>>& values, size_t row,
                      std::vector<bool>& used, double acc, double& best) {
    if (row == values.size()) {
        best = std::max(best, acc);
        return;
    }
    // leave this row unassigned
    assign_recursive(values, row + 1, used, acc, best);
    for (size_t m = 0; m < values[row].size(); ++m) {
        if (used[m]) continue;
        used[m] = true;
        assign_recursive(values, row + 1, used, acc + values[row][m], best);
        used[m] = false;
    }
}

}  // namespace

double best_assignment_value(const std::vector<std::vector<double>>& values) {
    double best = 0.0;
    std::vector<bool> used(values.empty() ? 0 : values[0].size(), false);
    assign_recursive(values, 0, used, 0.0, best);
    return best;
}

double brute_force_average_delay(const smallcell::AllocationState& alloc,
                                 const std::vector<smallcell::ContentBlock>& blocks,
                                 const smallcell::RegionUserCounts& users,
                                 const smallcell::CoverageMap& map,
                                 const smallcell::DelayParams& params) {
    double pop_sum = 0.0;
    for (const auto& b : blocks) pop_sum += b.popularity;
    double total = 0.0;
    for (size_t b = 0; b < blocks.size(); ++b) {
        for (size_t j = 0; j < map.regions.size(); ++j) {
            double cheapest = 1e300;
            for (int i : map.regions[j].covering) {
                double option = params.downlink_ms_per_user * double(users.per_sbs[size_t(i)]);
                if (!alloc.is_cached(i, int(b)))
                    option += params.backhaul_ms_per_user * double(users.total);
                cheapest = std::min(cheapest, option);
            }
            cheapest += params.choosing_ms_per_sbs * double(map.regions[j].covering.size());
            total += cheapest * double(users.per_region[j]) * blocks[b].popularity;
        }
    }
    return total / (pop_sum * double(users.total));
}

double monte_carlo_lens_area(double radius, double center_distance, int64_t samples,
                             uint64_t seed) {
    smallcell::RngStream rng(smallcell::derive_seed(seed, {0x6c656e73ull}));
    const double r2 = radius * radius;
    const double cx = center_distance / 2.0;
    int64_t hits = 0;
    for (int64_t s = 0; s < samples; ++s) {
        const double x = rng.uniform(cx - radius, cx + radius);
        const double y = rng.uniform(-radius, radius);
        const bool in_a = x * x + y * y <= r2;
        const double bx = x - center_distance;
        const bool in_b = bx * bx + y * y <= r2;
        if (in_a && in_b) ++hits;
    }
    return 4.0 * r2 * double(hits) / double(samples);
}

double monte_carlo_triple_area(double radius, double center_distance, int64_t samples,
                               uint64_t seed) {
    smallcell::RngStream rng(smallcell::derive_seed(seed, {0x747269ull}));
    const double r2 = radius * radius;
    const double d = center_distance;
    const double ax = 0.0, ay = 0.0;
    const double bx = d, by = 0.0;
    const double cx = d / 2.0, cy = d * std::sqrt(3.0) / 2.0;
    int64_t hits = 0;
    // sample around the triangle centroid
    const double gx = (ax + bx + cx) / 3.0, gy = (ay + by + cy) / 3.0;
    for (int64_t s = 0; s < samples; ++s) {
        const double x = rng.uniform(gx - radius, gx + radius);
        const double y = rng.uniform(gy - radius, gy + radius);
        const auto inside = [&](double px, double py) {
            const double dx = x - px, dy = y - py;
            return dx * dx + dy * dy <= r2;
        };
        if (inside(ax, ay) && inside(bx, by) && inside(cx, cy)) ++hits;
    }
    return 4.0 * r2 * double(hits) / double(samples);
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<size_t> order(v.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    size_t k = 0;
    while (k < order.size()) {
        size_t j = k;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[k]]) ++j;
        const double avg = (double(k) + double(j)) / 2.0 + 1.0;
        for (size_t p = k; p <= j; ++p) rank[order[p]] = avg;
        k = j + 1;
    }
    return rank;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a), rb = ranks(b);
    const double n = double(a.size());
    double ma = 0, mb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0 || vb == 0) return 0.0;
    return cov / std::sqrt(va * vb);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 0.0;
    return fit;
}

}  // namespace oracle
