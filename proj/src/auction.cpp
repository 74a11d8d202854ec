#include "smallcell/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smallcell {

namespace {

double max_value(const std::vector<std::vector<double>>& values) {
    double mx = 0.0;
    for (const auto& row : values)
        for (double v : row) {
            if (v < 0.0) throw std::invalid_argument("valuations must be non-negative");
            mx = std::max(mx, v);
        }
    return mx;
}

void check_rect(const std::vector<std::vector<double>>& values) {
    if (values.empty() || values[0].empty())
        throw std::invalid_argument("valuation matrix must be non-empty");
    for (const auto& row : values)
        if (row.size() != values[0].size())
            throw std::invalid_argument("valuation matrix must be rectangular");
}

}  // namespace

ValuationMatrix quantize(const std::vector<std::vector<double>>& values, double accuracy) {
    check_rect(values);
    if (accuracy < 1.0) throw std::invalid_argument("quantification accuracy must be >= 1");
    ValuationMatrix v;
    v.contents = static_cast<int>(values.size());
    v.storages = static_cast<int>(values[0].size());
    v.units.resize(static_cast<size_t>(v.contents) * v.storages, 0);
    const double mx = max_value(values);
    if (mx == 0.0) {
        v.quantum = 0.0;
        return v;
    }
    v.quantum = mx / accuracy;
    size_t idx = 0;
    for (const auto& row : values)
        for (double val : row) v.units[idx++] = std::llround(val / v.quantum);
    return v;
}

ValuationMatrix valuation_from_values(const std::vector<std::vector<double>>& values,
                                      double quantum) {
    check_rect(values);
    if (quantum <= 0.0) throw std::invalid_argument("quantum must be > 0");
    ValuationMatrix v;
    v.contents = static_cast<int>(values.size());
    v.storages = static_cast<int>(values[0].size());
    v.quantum = quantum;
    v.units.reserve(static_cast<size_t>(v.contents) * v.storages);
    for (const auto& row : values)
        for (double val : row) {
            if (val < 0.0) throw std::invalid_argument("valuations must be non-negative");
            const double q = val / quantum;
            const int64_t units = std::llround(q);
            if (std::abs(q - static_cast<double>(units)) > 1e-9)
                throw std::invalid_argument(
                    "valuation is not on the quantum grid; quantize() it first");
            v.units.push_back(units);
        }
    return v;
}

namespace {

// BFS for an augmenting path from `start`; flips it into the matching when
// found. On failure fills `fail` (when given) with the visited node sets,
// which form a constricted set.
bool bfs_augment(const PreferredGraph& graph, Matching& matching, int start,
                 ConstrictedSet* fail) {
    const int n = graph.contents;
    std::vector<int> prev_content(static_cast<size_t>(graph.storages), -1);
    std::vector<uint8_t> seen_content(static_cast<size_t>(n), 0);
    std::vector<uint8_t> seen_storage(static_cast<size_t>(graph.storages), 0);
    std::vector<int> queue{start};
    seen_content[static_cast<size_t>(start)] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        const int c = queue[head];
        for (int m : graph.adj[static_cast<size_t>(c)]) {
            if (seen_storage[static_cast<size_t>(m)]) continue;
            seen_storage[static_cast<size_t>(m)] = 1;
            prev_content[static_cast<size_t>(m)] = c;
            const int owner = matching.storage_to_content[static_cast<size_t>(m)];
            if (owner < 0) {
                // free storage: flip the alternating path back to `start`
                int storage = m;
                while (storage >= 0) {
                    const int content = prev_content[static_cast<size_t>(storage)];
                    const int next = matching.content_to_storage[static_cast<size_t>(content)];
                    matching.content_to_storage[static_cast<size_t>(content)] = storage;
                    matching.storage_to_content[static_cast<size_t>(storage)] = content;
                    storage = next;
                }
                return true;
            }
            if (!seen_content[static_cast<size_t>(owner)]) {
                seen_content[static_cast<size_t>(owner)] = 1;
                queue.push_back(owner);
            }
        }
    }
    if (fail) {
        fail->contents.clear();
        fail->storages.clear();
        for (int c = 0; c < n; ++c)
            if (seen_content[static_cast<size_t>(c)]) fail->contents.push_back(c);
        for (int m = 0; m < graph.storages; ++m)
            if (seen_storage[static_cast<size_t>(m)]) fail->storages.push_back(m);
    }
    return false;
}

int lowest_unmatched(const Matching& matching) {
    for (size_t c = 0; c < matching.content_to_storage.size(); ++c)
        if (matching.content_to_storage[c] < 0) return static_cast<int>(c);
    return -1;
}

}  // namespace

bool augment_or_constrict(const PreferredGraph& graph, Matching& matching, ConstrictedSet& out) {
    const int start = lowest_unmatched(matching);
    if (start < 0) return true;  // already perfect; nothing to do
    return bfs_augment(graph, matching, start, &out);
}

MatchingResult market_match(const ValuationMatrix& valuations, double accuracy) {
    if (valuations.contents <= 0 || valuations.storages <= 0)
        throw std::invalid_argument("market match: empty instance");
    if (accuracy < 1.0) throw std::invalid_argument("market match: accuracy must be >= 1");
    const int real_contents = valuations.contents;
    const int real_storages = valuations.storages;
    // Square instance: virtual storages (or virtual contents when storages
    // outnumber bidders) carry zero value.
    const int n = std::max(real_contents, real_storages);
    auto value_at = [&](int c, int m) -> int64_t {
        if (c >= real_contents || m >= real_storages) return 0;
        return valuations.at(c, m);
    };

    std::vector<int64_t> prices(static_cast<size_t>(n), 0);
    Matching matching;
    matching.content_to_storage.assign(static_cast<size_t>(n), -1);
    matching.storage_to_content.assign(static_cast<size_t>(n), -1);

    PreferredGraph graph;
    graph.contents = n;
    graph.storages = n;
    graph.adj.assign(static_cast<size_t>(n), {});

    std::vector<int64_t> best_profit(static_cast<size_t>(n), 0);
    MatchingResult result;
    // Sanity cap from the convergence bound; a correct run never reaches it.
    const int64_t max_iterations =
        2 * static_cast<int64_t>(std::ceil(accuracy)) * static_cast<int64_t>(n) + 16;

    for (;;) {
        // preferred-storage graph at current prices
        for (int c = 0; c < n; ++c) {
            int64_t best = std::numeric_limits<int64_t>::min();
            for (int m = 0; m < n; ++m) best = std::max(best, value_at(c, m) - prices[static_cast<size_t>(m)]);
            best_profit[static_cast<size_t>(c)] = best;
            auto& adj = graph.adj[static_cast<size_t>(c)];
            adj.clear();
            for (int m = 0; m < n; ++m)
                if (value_at(c, m) - prices[static_cast<size_t>(m)] == best) adj.push_back(m);
        }
        ++result.iterations;
        if (result.iterations > max_iterations)
            throw std::runtime_error("market match: iteration bound exceeded");

        // Matched edges that the new graph no longer contains are dropped.
        for (int c = 0; c < n; ++c) {
            const int m = matching.content_to_storage[static_cast<size_t>(c)];
            if (m < 0) continue;
            const auto& adj = graph.adj[static_cast<size_t>(c)];
            if (!std::binary_search(adj.begin(), adj.end(), m)) {
                matching.content_to_storage[static_cast<size_t>(c)] = -1;
                matching.storage_to_content[static_cast<size_t>(m)] = -1;
            }
        }

        // Expand to a maximum matching: a content with no augmenting path now
        // cannot gain one from later augmentations, so one ascending pass
        // suffices.
        for (int c = 0; c < n; ++c)
            if (matching.content_to_storage[static_cast<size_t>(c)] < 0)
                bfs_augment(graph, matching, c, nullptr);
        if (matching.size() == n) break;

        ConstrictedSet constricted;
        bfs_augment(graph, matching, lowest_unmatched(matching), &constricted);

        // Raise prices of the constricted storages by the smallest step that
        // lets some trapped content prefer an outside storage.
        std::vector<uint8_t> inside(static_cast<size_t>(n), 0);
        for (int m : constricted.storages) inside[static_cast<size_t>(m)] = 1;
        int64_t step = std::numeric_limits<int64_t>::max();
        for (int c : constricted.contents) {
            for (int m = 0; m < n; ++m) {
                if (inside[static_cast<size_t>(m)]) continue;
                const int64_t gap =
                    best_profit[static_cast<size_t>(c)] - (value_at(c, m) - prices[static_cast<size_t>(m)]);
                step = std::min(step, gap);
            }
        }
        if (step <= 0 || step == std::numeric_limits<int64_t>::max())
            throw std::logic_error("market match: degenerate price step");
        for (int m : constricted.storages) prices[static_cast<size_t>(m)] += step;
        const int64_t floor = *std::min_element(prices.begin(), prices.end());
        if (floor > 0)
            for (auto& p : prices) p -= floor;
    }

    result.assignment.assign(static_cast<size_t>(real_contents), -1);
    for (int c = 0; c < real_contents; ++c) {
        const int m = matching.content_to_storage[static_cast<size_t>(c)];
        if (m >= 0 && m < real_storages) {
            result.assignment[static_cast<size_t>(c)] = m;
            result.welfare_units += valuations.at(c, m);
        }
    }
    result.all_price_units = prices;
    result.price_units.assign(prices.begin(), prices.begin() + real_storages);
    result.prices.resize(static_cast<size_t>(real_storages));
    for (int m = 0; m < real_storages; ++m)
        result.prices[static_cast<size_t>(m)] =
            static_cast<double>(result.price_units[static_cast<size_t>(m)]) * valuations.quantum;
    result.welfare = static_cast<double>(result.welfare_units) * valuations.quantum;
    return result;
}

}  // namespace smallcell
