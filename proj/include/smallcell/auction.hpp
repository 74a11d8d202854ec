#pragma once

#include <cstdint>
#include <vector>

namespace smallcell {

/// Non-negative valuations on a fixed quantum grid. Entries are stored as
/// integer multiples of `quantum`, which is what makes the matching
/// algorithm's price updates exact and its iteration count bounded.
struct ValuationMatrix {
    int contents = 0;  // rows
    int storages = 0;  // columns (real ones; virtual padding happens later)
    std::vector<int64_t> units;  // row-major, value = units * quantum
    double quantum = 0.0;        // 0 only for an all-zero matrix

    int64_t at(int n, int m) const { return units[static_cast<size_t>(n) * storages + m]; }
    double value(int n, int m) const { return static_cast<double>(at(n, m)) * quantum; }
};

/// Rounds each value to the nearest multiple of max(values)/accuracy.
/// An all-zero input stays all-zero (quantum 0).
ValuationMatrix quantize(const std::vector<std::vector<double>>& values, double accuracy);

/// Wraps pre-gridded values; throws if any entry is negative or not an
/// integer multiple of `quantum` (within 1e-9 of one).
ValuationMatrix valuation_from_values(const std::vector<std::vector<double>>& values,
                                      double quantum);

/// Bipartite graph linking each content to its maximum-profit storages at
/// the current prices. Storages >= `real_storages` are virtual (zero value,
/// price pinned by construction).
struct PreferredGraph {
    int contents = 0;
    int storages = 0;
    std::vector<std::vector<int>> adj;  // per content, ascending storage ids
};

struct Matching {
    std::vector<int> content_to_storage;  // -1 when unmatched
    std::vector<int> storage_to_content;

    int size() const {
        int s = 0;
        for (int m : content_to_storage) s += m >= 0 ? 1 : 0;
        return s;
    }
};

/// Contents whose preferred-storage neighborhood is strictly smaller than
/// themselves; blocks a perfect matching.
struct ConstrictedSet {
    std::vector<int> contents;
    std::vector<int> storages;
};

/// Grows `matching` along one augmenting path found by BFS from the lowest
/// unmatched content (true), or reports the constricted set the failed
/// search visited (false). Exploration order is ascending index, so results
/// are deterministic.
bool augment_or_constrict(const PreferredGraph& graph, Matching& matching, ConstrictedSet& out);

struct MatchingResult {
    std::vector<int> assignment;  // content -> real storage, -1 = nothing won
    std::vector<double> prices;   // per real storage
    std::vector<int64_t> price_units;
    std::vector<int64_t> all_price_units;  // padded vector; its minimum is 0
    int iterations = 0;  // preferred-graph builds until the matching was perfect
    double welfare = 0.0;
    int64_t welfare_units = 0;
};

/// One multi-object auction: finds the lowest market-clearing prices and
/// the welfare-maximizing assignment of contents to storages. Pads the
/// instance square with zero-value virtual columns (or zero rows when
/// storages outnumber contents); prices end with floor zero. `accuracy`
/// bounds the iteration count at accuracy * contents.
MatchingResult market_match(const ValuationMatrix& valuations, double accuracy);

}  // namespace smallcell
