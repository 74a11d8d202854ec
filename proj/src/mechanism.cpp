#include "smallcell/mechanism.hpp"

#include <algorithm>
#include <stdexcept>

namespace smallcell {

namespace {

// Best current delay for a block seen from one region, without the choosing
// term (it cancels out of every marginal comparison).
double best_core_delay(int block_index, const SimplestRegion& region,
                       const AllocationState& alloc, const RegionUserCounts& users,
                       const DelayParams& params, double backhaul_ms) {
    double best = 0.0;
    bool first = true;
    for (int i : region.covering) {
        double candidate = downlink_delay(i, users, params);
        if (!alloc.is_cached(i, block_index)) candidate += backhaul_ms;
        if (first || candidate < best) {
            best = candidate;
            first = false;
        }
    }
    return best;
}

int64_t storage_blocks(int64_t capacity_mb, int64_t block_size_mb) {
    return capacity_mb / block_size_mb;
}

}  // namespace

double marginal_valuation(int block_index, const std::vector<ContentBlock>& blocks, int sbs,
                          const AllocationState& alloc, const RegionUserCounts& users,
                          const CoverageMap& map, const DelayParams& params) {
    if (alloc.is_cached(sbs, block_index)) return 0.0;
    const double back = backhaul_delay(users, params);
    const double down_here = downlink_delay(sbs, users, params);
    const double popularity = blocks[static_cast<size_t>(block_index)].popularity;
    double value = 0.0;
    for (int j : map.regions_by_sbs[static_cast<size_t>(sbs)]) {
        const int64_t region_users = users.per_region[static_cast<size_t>(j)];
        if (region_users == 0) continue;
        const double best = best_core_delay(block_index, map.regions[static_cast<size_t>(j)],
                                            alloc, users, params, back);
        const double gain = best - down_here;  // candidate delay via sbs is down_here
        if (gain > 0.0) value += gain * static_cast<double>(region_users) * popularity;
    }
    return value;
}

double additional_price(double cached_fraction, double omega, double backhaul_ms) {
    return omega * (1.0 - cached_fraction) * backhaul_ms;
}

double additional_price(const ContentBlock& block, const RangeSet& previous_ranges, double omega,
                        double backhaul_ms) {
    return additional_price(block_overlap_fraction(block, previous_ranges), omega, backhaul_ms);
}

double replacement_percentage(const AllocationState& alloc,
                              const std::vector<RangeSet>& previous_ranges,
                              const std::vector<ContentBlock>& blocks) {
    const int sbs_count = alloc.sbs_count();
    double sum = 0.0;
    for (int i = 0; i < sbs_count; ++i) {
        double replaced_mb = 0.0;
        for (int b = 0; b < alloc.block_count(); ++b) {
            if (!alloc.is_cached(i, b)) continue;
            const auto& block = blocks[static_cast<size_t>(b)];
            const double eps = block_overlap_fraction(block, previous_ranges[static_cast<size_t>(i)]);
            replaced_mb += static_cast<double>(block.size_mb) * (1.0 - eps);
        }
        sum += replaced_mb / static_cast<double>(alloc.capacity_mb(i));
    }
    return sum / static_cast<double>(sbs_count);
}

RoundSetup build_round_valuations(const std::vector<ContentBlock>& blocks,
                                  const AllocationState& alloc,
                                  const std::vector<RangeSet>& previous_ranges,
                                  const RegionUserCounts& users, const CoverageMap& map,
                                  const DelayParams& params, double omega, int round,
                                  int64_t block_size_mb) {
    RoundSetup setup;
    const int sbs_count = alloc.sbs_count();
    for (int i = 0; i < sbs_count; ++i) {
        if (storage_blocks(alloc.capacity_mb(i), block_size_mb) >= round)
            setup.object_sbs.push_back(i);
    }
    const double back = backhaul_delay(users, params);
    setup.values.assign(blocks.size(), std::vector<double>(setup.object_sbs.size(), 0.0));
    for (size_t b = 0; b < blocks.size(); ++b) {
        for (size_t col = 0; col < setup.object_sbs.size(); ++col) {
            const int i = setup.object_sbs[col];
            if (alloc.is_cached(i, static_cast<int>(b))) continue;  // duplicates bid nothing
            const double gross = marginal_valuation(static_cast<int>(b), blocks, i, alloc, users,
                                                    map, params);
            const double penalty =
                additional_price(blocks[b], previous_ranges[static_cast<size_t>(i)], omega, back);
            setup.values[b][col] = std::max(0.0, gross - penalty);
        }
    }
    return setup;
}

RoundStats run_round(AllocationState& alloc, const std::vector<ContentBlock>& blocks,
                     const std::vector<RangeSet>& previous_ranges, const RegionUserCounts& users,
                     const CoverageMap& map, const DelayParams& params,
                     const MechanismConfig& config, int round) {
    RoundStats stats;
    stats.round = round;
    if (blocks.empty()) return stats;
    RoundSetup setup = build_round_valuations(blocks, alloc, previous_ranges, users, map, params,
                                              config.omega, round,
                                              mb_from_gb(config.block_size_gb));
    stats.bidders = static_cast<int>(blocks.size());
    stats.objects = static_cast<int>(setup.object_sbs.size());
    if (setup.object_sbs.empty()) return stats;

    const ValuationMatrix matrix = quantize(setup.values, config.accuracy);
    const MatchingResult result = market_match(matrix, config.accuracy);
    stats.iterations = result.iterations;
    if (!result.prices.empty()) {
        double sum = 0.0;
        for (double p : result.prices) {
            sum += p;
            stats.max_price = std::max(stats.max_price, p);
        }
        stats.mean_price = sum / static_cast<double>(result.prices.size());
    }
    for (size_t b = 0; b < blocks.size(); ++b) {
        const int col = result.assignment[b];
        if (col < 0) continue;
        if (matrix.at(static_cast<int>(b), col) == 0) continue;  // worthless win, skip the write
        alloc.cache_block(setup.object_sbs[static_cast<size_t>(col)], static_cast<int>(b),
                          blocks[b]);
    }
    return stats;
}

CachingMechanism::CachingMechanism(const CoverageMap& map, std::vector<int64_t> capacities_mb,
                                   DelayParams delay, MechanismConfig config)
    : map_(map), capacities_mb_(std::move(capacities_mb)), delay_(delay), config_(config) {
    if (config_.block_size_gb <= 0.0)
        throw std::invalid_argument("mechanism: block size must be > 0");
    if (config_.omega < 0.0) throw std::invalid_argument("mechanism: omega must be >= 0");
    if (config_.accuracy < 1.0) throw std::invalid_argument("mechanism: accuracy must be >= 1");
    previous_ranges_.resize(capacities_mb_.size());
}

HourReport CachingMechanism::run_hour(int t, const RegionUserCounts& users,
                                      const std::vector<ContentBlock>& blocks,
                                      double dropped_gb) {
    HourReport report;
    report.hour = t;
    report.users_total = users.total;
    report.dropped_gb = dropped_gb;

    allocation_ = AllocationState(t, capacities_mb_, static_cast<int>(blocks.size()));
    const int64_t block_size_mb = mb_from_gb(config_.block_size_gb);
    int64_t max_rounds = 0;
    for (int64_t cap : capacities_mb_)
        max_rounds = std::max(max_rounds, storage_blocks(cap, block_size_mb));
    for (int round = 1; round <= max_rounds; ++round)
        report.rounds.push_back(run_round(allocation_, blocks, previous_ranges_, users, map_,
                                          delay_, config_, round));

    report.replacement = replacement_percentage(allocation_, previous_ranges_, blocks);
    report.delay_ms = average_delay(allocation_, blocks, users, map_, delay_);

    previous_ranges_.clear();
    for (int i = 0; i < allocation_.sbs_count(); ++i)
        previous_ranges_.push_back(allocation_.cached_ranges(i));
    return report;
}

AllocationState allocate_none(int t, const std::vector<int64_t>& capacities_mb,
                              const std::vector<ContentBlock>& blocks) {
    return AllocationState(t, capacities_mb, static_cast<int>(blocks.size()));
}

AllocationState allocate_highest_popularity(int t, const std::vector<int64_t>& capacities_mb,
                                            const std::vector<ContentBlock>& blocks,
                                            int64_t block_size_mb) {
    AllocationState alloc(t, capacities_mb, static_cast<int>(blocks.size()));
    std::vector<int> order(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) order[b] = static_cast<int>(b);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (blocks[a].popularity != blocks[b].popularity)
            return blocks[a].popularity > blocks[b].popularity;
        if (blocks[a].sp != blocks[b].sp) return blocks[a].sp < blocks[b].sp;
        return blocks[a].index < blocks[b].index;
    });
    for (int i = 0; i < alloc.sbs_count(); ++i) {
        const int64_t slots = capacities_mb[static_cast<size_t>(i)] / block_size_mb;
        for (int64_t s = 0; s < std::min<int64_t>(slots, static_cast<int64_t>(order.size())); ++s)
            alloc.cache_block(i, order[static_cast<size_t>(s)], blocks[order[static_cast<size_t>(s)]]);
    }
    return alloc;
}

AllocationState allocate_greedy(int t, const std::vector<int64_t>& capacities_mb,
                                const std::vector<ContentBlock>& blocks, int64_t block_size_mb,
                                const RegionUserCounts& users, const CoverageMap& map,
                                const DelayParams& params) {
    AllocationState alloc(t, capacities_mb, static_cast<int>(blocks.size()));
    std::vector<int64_t> free_slots(capacities_mb.size());
    int64_t total_free = 0;
    for (size_t i = 0; i < capacities_mb.size(); ++i) {
        free_slots[i] = capacities_mb[i] / block_size_mb;
        total_free += free_slots[i];
    }
    const int64_t placeable = static_cast<int64_t>(blocks.size()) * static_cast<int64_t>(capacities_mb.size());
    total_free = std::min(total_free, placeable);
    while (total_free > 0) {
        double best_value = -1.0;
        int best_block = -1, best_sbs = -1;
        for (size_t b = 0; b < blocks.size(); ++b) {
            for (size_t i = 0; i < capacities_mb.size(); ++i) {
                if (free_slots[i] == 0 || alloc.is_cached(static_cast<int>(i), static_cast<int>(b)))
                    continue;
                const double v = marginal_valuation(static_cast<int>(b), blocks,
                                                    static_cast<int>(i), alloc, users, map, params);
                if (v > best_value) {
                    best_value = v;
                    best_block = static_cast<int>(b);
                    best_sbs = static_cast<int>(i);
                }
            }
        }
        if (best_block < 0) break;  // every block already cached everywhere with slots left
        alloc.cache_block(best_sbs, best_block, blocks[static_cast<size_t>(best_block)]);
        --free_slots[static_cast<size_t>(best_sbs)];
        --total_free;
    }
    return alloc;
}

}  // namespace smallcell
