#include "smallcell/blocks.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace smallcell {

void RangeSet::add(int sp, int content_id, int64_t begin_mb, int64_t end_mb) {
    if (end_mb <= begin_mb) return;
    auto& intervals = ranges_[{sp, content_id}];
    intervals.emplace_back(begin_mb, end_mb);
    std::sort(intervals.begin(), intervals.end());
    std::vector<std::pair<int64_t, int64_t>> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    intervals = std::move(merged);
}

void RangeSet::add_block(const ContentBlock& block) {
    for (const auto& piece : block.pieces)
        add(block.sp, piece.content_id, piece.offset_mb, piece.offset_mb + piece.length_mb);
}

int64_t RangeSet::overlap_mb(const ContentBlock& block) const {
    int64_t total = 0;
    for (const auto& piece : block.pieces) {
        auto it = ranges_.find({block.sp, piece.content_id});
        if (it == ranges_.end()) continue;
        const int64_t lo = piece.offset_mb;
        const int64_t hi = piece.offset_mb + piece.length_mb;
        for (const auto& [b, e] : it->second) {
            const int64_t ov = std::min(hi, e) - std::max(lo, b);
            if (ov > 0) total += ov;
        }
    }
    return total;
}

int64_t RangeSet::total_mb() const {
    int64_t total = 0;
    for (const auto& [key, intervals] : ranges_)
        for (const auto& [b, e] : intervals) total += e - b;
    return total;
}

RibbonSnapshot ribbonize_weighted(const std::vector<Content>& contents,
                                  const std::vector<double>& popularity, int sp,
                                  int64_t block_size_mb, int hour) {
    if (block_size_mb <= 0) throw std::invalid_argument("ribbon: block size must be > 0");
    if (contents.size() != popularity.size())
        throw std::invalid_argument("ribbon: one popularity per content required");
    RibbonSnapshot snap;
    snap.sp = sp;
    snap.hour = hour;
    if (contents.empty()) return snap;

    std::vector<size_t> order(contents.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const double ra = popularity[a] / static_cast<double>(contents[a].size_mb);
        const double rb = popularity[b] / static_cast<double>(contents[b].size_mb);
        if (ra != rb) return ra > rb;
        return contents[a].id < contents[b].id;
    });

    int64_t total_mb = 0;
    for (const auto& c : contents) total_mb += c.size_mb;
    const int64_t block_count = total_mb / block_size_mb;

    size_t pos = 0;          // index into order
    int64_t consumed = 0;    // bytes of contents[order[pos]] already placed
    for (int64_t r = 0; r < block_count; ++r) {
        ContentBlock block;
        block.sp = sp;
        block.index = static_cast<int>(r);
        block.size_mb = block_size_mb;
        int64_t remaining = block_size_mb;
        while (remaining > 0) {
            const Content& c = contents[order[pos]];
            const int64_t take = std::min(remaining, c.size_mb - consumed);
            BlockPiece piece;
            piece.content_id = c.id;
            piece.offset_mb = consumed;
            piece.length_mb = take;
            piece.content_fraction = static_cast<double>(take) / static_cast<double>(c.size_mb);
            block.popularity += piece.content_fraction * popularity[order[pos]];
            block.pieces.push_back(piece);
            remaining -= take;
            consumed += take;
            if (consumed == c.size_mb) {
                ++pos;
                consumed = 0;
            }
        }
        snap.blocks.push_back(std::move(block));
    }
    // Tail that does not fill a whole block is dropped.
    for (size_t p = pos; p < order.size(); ++p) {
        const Content& c = contents[order[p]];
        const int64_t left = c.size_mb - (p == pos ? consumed : 0);
        snap.dropped_mb += left;
        snap.dropped_popularity +=
            popularity[order[p]] * static_cast<double>(left) / static_cast<double>(c.size_mb);
    }
    return snap;
}

RibbonSnapshot ribbonize(const Catalog& catalog, int sp, double block_size_gb, int t) {
    if (sp < 0 || sp >= catalog.sp_count()) throw std::invalid_argument("ribbon: no such SP");
    const auto& contents = catalog.by_sp[sp];
    std::vector<double> popularity(contents.size());
    for (size_t k = 0; k < contents.size(); ++k)
        popularity[k] = content_popularity(contents[k], t, catalog.mu, catalog.sigma);
    return ribbonize_weighted(contents, popularity, sp, mb_from_gb(block_size_gb), t);
}

double block_overlap_fraction(const ContentBlock& block, const RangeSet& cached) {
    if (block.size_mb <= 0) return 0.0;
    return static_cast<double>(cached.overlap_mb(block)) / static_cast<double>(block.size_mb);
}

void write_blocks_csv(const std::vector<ContentBlock>& blocks, std::ostream& out) {
    out << "sp,block,popularity,composition\n";
    char buf[64];
    for (const auto& b : blocks) {
        std::snprintf(buf, sizeof(buf), "%.10g", b.popularity);
        out << b.sp << "," << b.index << "," << buf << ",";
        for (size_t k = 0; k < b.pieces.size(); ++k) {
            const auto& p = b.pieces[k];
            if (k) out << ";";
            out << p.content_id << ":" << p.offset_mb << "+" << p.length_mb;
        }
        out << "\n";
    }
}

}  // namespace smallcell
