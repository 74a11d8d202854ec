#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smallcell/auction.hpp"
#include "smallcell/delay.hpp"

namespace smallcell {

struct MechanismConfig {
    double block_size_gb = 20.0;  // standard caching size S
    double omega = 0.0;           // additional price coefficient
    double accuracy = 100.0;      // valuation quantification accuracy
};

struct RoundStats {
    int round = 0;    // 1-based storage-block index
    int bidders = 0;  // content blocks
    int objects = 0;  // participating SBS storages
    int iterations = 0;
    double mean_price = 0.0;
    double max_price = 0.0;
};

struct HourReport {
    int hour = 0;
    std::optional<double> delay_ms;  // empty when there was no demand
    double replacement = 0.0;        // fraction of storage overwritten vs. t-1
    std::vector<RoundStats> rounds;
    double dropped_gb = 0.0;  // ribbon tails that fit no block this hour
    int64_t users_total = 0;
};

/// Delay saved per hour, summed over the regions SBS `sbs` covers, if the
/// block were added there now: users * popularity * max(0, current best
/// delay - delay via `sbs` with the block cached). Zero when already cached
/// at `sbs`. The choosing delay cancels out of the difference.
double marginal_valuation(int block_index, const std::vector<ContentBlock>& blocks, int sbs,
                          const AllocationState& alloc, const RegionUserCounts& users,
                          const CoverageMap& map, const DelayParams& params);

/// Replacement deterrent: omega * (1 - cached fraction) * backhaul delay.
double additional_price(double cached_fraction, double omega, double backhaul_ms);
double additional_price(const ContentBlock& block, const RangeSet& previous_ranges, double omega,
                        double backhaul_ms);

/// Average fraction of SBS storage whose bytes were not already present in
/// the previous hour.
double replacement_percentage(const AllocationState& alloc,
                              const std::vector<RangeSet>& previous_ranges,
                              const std::vector<ContentBlock>& blocks);

/// Net per-(block, storage) bids for one auction round: marginal valuation
/// minus the additional price, clamped at zero. `object_sbs` lists the SBS
/// behind each column (SBSs whose storage is exhausted before this round
/// are left out).
struct RoundSetup {
    std::vector<int> object_sbs;
    std::vector<std::vector<double>> values;
};
RoundSetup build_round_valuations(const std::vector<ContentBlock>& blocks,
                                  const AllocationState& alloc,
                                  const std::vector<RangeSet>& previous_ranges,
                                  const RegionUserCounts& users, const CoverageMap& map,
                                  const DelayParams& params, double omega, int round,
                                  int64_t block_size_mb);

/// One multi-object auction: the round's storage blocks go to the winning
/// content blocks. Zero-value wins leave the storage empty rather than
/// writing worthless data.
RoundStats run_round(AllocationState& alloc, const std::vector<ContentBlock>& blocks,
                     const std::vector<RangeSet>& previous_ranges, const RegionUserCounts& users,
                     const CoverageMap& map, const DelayParams& params,
                     const MechanismConfig& config, int round);

/// Auction-based caching engine. Carries the previous hour's cached byte
/// ranges so replacement penalties and the replacement percentage see
/// across-hour data overlap.
class CachingMechanism {
public:
    CachingMechanism(const CoverageMap& map, std::vector<int64_t> capacities_mb,
                     DelayParams delay, MechanismConfig config);

    /// Rounds 1..max(H_i/S) of auctions for hour `t`, then the hour's delay
    /// and replacement statistics. Blocks must be freshly ribbonized for
    /// this hour.
    HourReport run_hour(int t, const RegionUserCounts& users,
                        const std::vector<ContentBlock>& blocks, double dropped_gb = 0.0);

    const AllocationState& allocation() const { return allocation_; }

private:
    const CoverageMap& map_;
    std::vector<int64_t> capacities_mb_;
    DelayParams delay_;
    MechanismConfig config_;
    AllocationState allocation_;
    std::vector<RangeSet> previous_ranges_;
};

// Baseline strategies, evaluated on the same demand draws.
AllocationState allocate_none(int t, const std::vector<int64_t>& capacities_mb,
                              const std::vector<ContentBlock>& blocks);

/// Every SBS caches the globally most popular blocks until full.
AllocationState allocate_highest_popularity(int t, const std::vector<int64_t>& capacities_mb,
                                            const std::vector<ContentBlock>& blocks,
                                            int64_t block_size_mb);

/// Repeatedly caches the single (block, SBS) pair with the largest marginal
/// valuation until every storage block is used.
AllocationState allocate_greedy(int t, const std::vector<int64_t>& capacities_mb,
                                const std::vector<ContentBlock>& blocks, int64_t block_size_mb,
                                const RegionUserCounts& users, const CoverageMap& map,
                                const DelayParams& params);

}  // namespace smallcell
