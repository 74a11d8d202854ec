#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smallcell/blocks.hpp"
#include "smallcell/geometry.hpp"

namespace smallcell {

/// Linear delay coefficients, all in milliseconds per unit.
struct DelayParams {
    double backhaul_ms_per_user = 1.0;   // beta1
    double downlink_ms_per_user = 5.0;   // beta2
    double choosing_ms_per_sbs = 0.0;    // beta3
};

/// Which blocks each SBS holds in the current hour, plus the byte ranges
/// and used capacity needed for replacement tracking and the capacity
/// constraint.
class AllocationState {
public:
    AllocationState() = default;
    AllocationState(int hour, std::vector<int64_t> capacities_mb, int block_count);

    void cache_block(int sbs, int block_index, const ContentBlock& block);
    bool is_cached(int sbs, int block_index) const {
        return cached_[static_cast<size_t>(sbs)][static_cast<size_t>(block_index)] != 0;
    }

    int hour() const { return hour_; }
    int sbs_count() const { return static_cast<int>(capacities_mb_.size()); }
    int block_count() const { return cached_.empty() ? 0 : static_cast<int>(cached_[0].size()); }
    int64_t used_mb(int sbs) const { return used_mb_[static_cast<size_t>(sbs)]; }
    int64_t capacity_mb(int sbs) const { return capacities_mb_[static_cast<size_t>(sbs)]; }
    const RangeSet& cached_ranges(int sbs) const { return ranges_[static_cast<size_t>(sbs)]; }
    const std::vector<uint8_t>& cached_flags(int sbs) const {
        return cached_[static_cast<size_t>(sbs)];
    }

private:
    int hour_ = 0;
    std::vector<std::vector<uint8_t>> cached_;  // [sbs][block]
    std::vector<RangeSet> ranges_;
    std::vector<int64_t> used_mb_;
    std::vector<int64_t> capacities_mb_;
};

double backhaul_delay(const RegionUserCounts& users, const DelayParams& params);
double downlink_delay(int sbs, const RegionUserCounts& users, const DelayParams& params);
double choosing_delay(const SimplestRegion& region, const DelayParams& params);

/// Per-request delay for one block seen from one region: best covering SBS
/// (cached ones skip the backhaul hop) plus the choosing delay. Ties in the
/// minimum go to the lowest SBS index.
double request_delay(int block_index, int region, const AllocationState& alloc,
                     const RegionUserCounts& users, const CoverageMap& map,
                     const DelayParams& params);

/// Popularity- and user-weighted average of request delays over all blocks
/// and regions. Empty when there is no demand (no users or zero total
/// popularity).
std::optional<double> average_delay(const AllocationState& alloc,
                                    const std::vector<ContentBlock>& blocks,
                                    const RegionUserCounts& users, const CoverageMap& map,
                                    const DelayParams& params);

}  // namespace smallcell
