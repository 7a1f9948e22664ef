#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace srcp {

struct Geometry {
    std::uint32_t sets = 1;
    std::uint32_t ways = 1;
    std::uint32_t block_size = 64;

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

// Throws ConfigError unless sets and block_size are powers of two and ways >= 1.
void validate(const Geometry& g);

struct SetTag {
    std::uint32_t set = 0;
    std::uint64_t tag = 0;

    friend bool operator==(const SetTag&, const SetTag&) = default;
};

// Modulo indexing on the block address.
inline SetTag decompose(std::uint64_t addr, const Geometry& g) {
    const std::uint64_t block = addr / g.block_size;
    return {static_cast<std::uint32_t>(block & (g.sets - 1)), block / g.sets};
}

// Inverse of decompose for block-aligned addresses.
inline std::uint64_t block_address(SetTag st, const Geometry& g) {
    return (st.tag * g.sets + st.set) * g.block_size;
}

// Half-open way range [start, end).
struct WayRange {
    std::uint32_t start = 0;
    std::uint32_t end = 0;

    std::uint32_t size() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(std::uint32_t way) const { return way >= start && way < end; }

    friend bool operator==(const WayRange&, const WayRange&) = default;
};

// Static way partitioning: core i owns ways [i*w, (i+1)*w) with w = ways/cores.
class PartitionMap {
public:
    // Throws ConfigError when cores or ways is zero, or ways % cores != 0.
    static PartitionMap build(std::uint32_t ways, std::uint32_t cores);

    std::uint32_t cores() const { return static_cast<std::uint32_t>(ranges_.size()); }
    std::uint32_t ways() const { return ways_; }
    std::uint32_t width() const { return ways_ / cores(); }
    const WayRange& range(std::uint32_t core) const { return ranges_.at(core); }
    std::uint32_t owner_of(std::uint32_t way) const { return way / width(); }

private:
    PartitionMap(std::uint32_t ways, std::vector<WayRange> ranges) : ways_(ways), ranges_(std::move(ranges)) {}

    std::uint32_t ways_;
    std::vector<WayRange> ranges_;
};

// Stamp value for "never touched"; real stamps start at 1.
inline constexpr std::uint64_t kNoStamp = 0;

// Per-line LLC metadata shared by every replacement policy.
struct LineState {
    bool valid = false;
    bool dirty = false;
    bool lc = false;
    std::uint8_t rrpv = 0;
    std::uint32_t afc = 0;
    std::uint32_t gcount = 0;
    std::uint64_t tag = 0;
    std::uint64_t last_local_touch = kNoStamp;
    std::uint64_t last_touch = kNoStamp;

    friend bool operator==(const LineState&, const LineState&) = default;
};

using SetView = std::span<LineState>;
using ConstSetView = std::span<const LineState>;

// The valid way holding tag, if any.
std::optional<std::uint32_t> probe(ConstSetView set, std::uint64_t tag);

// Flat sets x ways storage.
class LineStore {
public:
    explicit LineStore(const Geometry& g) : geometry_(g), lines_(std::size_t{g.sets} * g.ways) {}

    const Geometry& geometry() const { return geometry_; }
    SetView set(std::uint32_t index) { return {lines_.data() + std::size_t{index} * geometry_.ways, geometry_.ways}; }
    ConstSetView set(std::uint32_t index) const {
        return {lines_.data() + std::size_t{index} * geometry_.ways, geometry_.ways};
    }

private:
    Geometry geometry_;
    std::vector<LineState> lines_;
};

}  // namespace srcp
