#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (exhaustive enumeration, direct sums) so they cannot
// share a bug with the library code they check.

#include <cstdint>
#include <vector>

#include "smallcell/blocks.hpp"
#include "smallcell/delay.hpp"
#include "smallcell/geometry.hpp"

namespace oracle {

/// Maximum-total-value assignment of rows to distinct columns, by exhaustive
/// permutation of column subsets. Usable up to ~7x7.
double best_assignment_value(const std::vector<std::vector<double>>& values);

/// Average delay recomputed from scratch: loops every (block, region) pair,
/// scans covering SBSs for the cheapest serving option, applies the
/// popularity/user weights directly.
double brute_force_average_delay(const smallcell::AllocationState& alloc,
                                 const std::vector<smallcell::ContentBlock>& blocks,
                                 const smallcell::RegionUserCounts& users,
                                 const smallcell::CoverageMap& map,
                                 const smallcell::DelayParams& params);

/// Monte-Carlo area of the lens between two disks of radius r at center
/// distance d (seeded, deterministic).
double monte_carlo_lens_area(double radius, double center_distance, int64_t samples,
                             uint64_t seed);

/// Monte-Carlo area of the common intersection of the three disks of an
/// equilateral triangle of side d.
double monte_carlo_triple_area(double radius, double center_distance, int64_t samples,
                               uint64_t seed);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// Least-squares slope and r^2 of y against x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
