#include "smallcell/delay.hpp"

#include <stdexcept>

namespace smallcell {

AllocationState::AllocationState(int hour, std::vector<int64_t> capacities_mb, int block_count)
    : hour_(hour), capacities_mb_(std::move(capacities_mb)) {
    const size_t n = capacities_mb_.size();
    cached_.assign(n, std::vector<uint8_t>(static_cast<size_t>(block_count), 0));
    ranges_.resize(n);
    used_mb_.assign(n, 0);
}

void AllocationState::cache_block(int sbs, int block_index, const ContentBlock& block) {
    auto& flags = cached_[static_cast<size_t>(sbs)];
    if (flags[static_cast<size_t>(block_index)]) return;
    if (used_mb_[static_cast<size_t>(sbs)] + block.size_mb > capacities_mb_[static_cast<size_t>(sbs)])
        throw std::runtime_error("allocation: capacity exceeded");
    flags[static_cast<size_t>(block_index)] = 1;
    ranges_[static_cast<size_t>(sbs)].add_block(block);
    used_mb_[static_cast<size_t>(sbs)] += block.size_mb;
}

double backhaul_delay(const RegionUserCounts& users, const DelayParams& params) {
    return params.backhaul_ms_per_user * static_cast<double>(users.total);
}

double downlink_delay(int sbs, const RegionUserCounts& users, const DelayParams& params) {
    return params.downlink_ms_per_user * static_cast<double>(users.per_sbs[static_cast<size_t>(sbs)]);
}

double choosing_delay(const SimplestRegion& region, const DelayParams& params) {
    return params.choosing_ms_per_sbs * static_cast<double>(region.covering.size());
}

double request_delay(int block_index, int region, const AllocationState& alloc,
                     const RegionUserCounts& users, const CoverageMap& map,
                     const DelayParams& params) {
    const SimplestRegion& reg = map.regions[static_cast<size_t>(region)];
    const double back = backhaul_delay(users, params);
    double best = 0.0;
    bool first = true;
    for (int i : reg.covering) {
        double candidate = downlink_delay(i, users, params);
        if (!alloc.is_cached(i, block_index)) candidate += back;
        if (first || candidate < best) {
            best = candidate;
            first = false;
        }
    }
    return best + choosing_delay(reg, params);
}

std::optional<double> average_delay(const AllocationState& alloc,
                                    const std::vector<ContentBlock>& blocks,
                                    const RegionUserCounts& users, const CoverageMap& map,
                                    const DelayParams& params) {
    double pop_sum = 0.0;
    for (const auto& b : blocks) pop_sum += b.popularity;
    if (users.total <= 0 || pop_sum <= 0.0) return std::nullopt;
    double weighted = 0.0;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        for (size_t j = 0; j < map.regions.size(); ++j) {
            if (users.per_region[j] == 0) continue;
            weighted += request_delay(static_cast<int>(bi), static_cast<int>(j), alloc, users, map,
                                      params) *
                        static_cast<double>(users.per_region[j]) * blocks[bi].popularity;
        }
    }
    return weighted / (pop_sum * static_cast<double>(users.total));
}

}  // namespace smallcell
