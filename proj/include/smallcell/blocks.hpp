#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "smallcell/demand.hpp"

namespace smallcell {

/// Slice of one content inside a block: [offset, offset+length) within the
/// content, plus the fraction of that content the slice represents.
struct BlockPiece {
    int content_id = 0;
    int64_t offset_mb = 0;
    int64_t length_mb = 0;
    double content_fraction = 0.0;  // length / content size
};

/// Equal-sized slice of one SP's popularity-ordered data ribbon.
struct ContentBlock {
    int sp = 0;
    int index = 0;  // position along the ribbon
    int64_t size_mb = 0;
    std::vector<BlockPiece> pieces;
    double popularity = 0.0;  // sum of piece fraction * content popularity
};

/// One SP's ribbon at a given hour: ordered contents cut into blocks, with
/// the sub-block-size tail dropped.
struct RibbonSnapshot {
    int sp = 0;
    int hour = 0;
    std::vector<ContentBlock> blocks;
    int64_t dropped_mb = 0;
    double dropped_popularity = 0.0;
};

/// Sorted disjoint byte intervals per content; tracks what an SBS held so
/// blocks rebuilt in a later hour can be compared by data, not identity.
class RangeSet {
public:
    void add(int sp, int content_id, int64_t begin_mb, int64_t end_mb);
    void add_block(const ContentBlock& block);
    int64_t overlap_mb(const ContentBlock& block) const;
    int64_t total_mb() const;
    void clear() { ranges_.clear(); }
    bool empty() const { return ranges_.empty(); }

private:
    // key: (sp, content id) -> merged intervals sorted by begin
    std::map<std::pair<int, int>, std::vector<std::pair<int64_t, int64_t>>> ranges_;
};

/// Sorts one SP's contents by descending popularity-to-size ratio (ties by
/// ascending content id), concatenates them into a ribbon, and cuts the
/// prefix into floor(total/size) blocks. The remainder is dropped and
/// reported.
RibbonSnapshot ribbonize(const Catalog& catalog, int sp, double block_size_gb, int t);

/// Same transform with caller-supplied popularities (index-aligned with
/// `contents`); the hour-based overload evaluates the popularity model and
/// delegates here.
RibbonSnapshot ribbonize_weighted(const std::vector<Content>& contents,
                                  const std::vector<double>& popularity, int sp,
                                  int64_t block_size_mb, int hour);

/// Fraction of the block's bytes present in `cached` (0 when disjoint,
/// 1 when fully covered).
double block_overlap_fraction(const ContentBlock& block, const RangeSet& cached);

/// Debug export: sp, block index, popularity, composition.
void write_blocks_csv(const std::vector<ContentBlock>& blocks, std::ostream& out);

}  // namespace smallcell
