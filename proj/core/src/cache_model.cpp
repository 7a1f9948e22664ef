#include "srcp/cache_model.hpp"

#include <bit>
#include <string>

#include "srcp/error.hpp"

namespace srcp {

void validate(const Geometry& g) {
    if (g.sets == 0 || !std::has_single_bit(g.sets))
        throw ConfigError("sets must be a power of two, got " + std::to_string(g.sets));
    if (g.ways == 0) throw ConfigError("ways must be >= 1");
    if (g.block_size == 0 || !std::has_single_bit(g.block_size))
        throw ConfigError("block size must be a power of two, got " + std::to_string(g.block_size));
}

PartitionMap PartitionMap::build(std::uint32_t ways, std::uint32_t cores) {
    if (cores == 0) throw ConfigError("cores must be >= 1");
    if (ways == 0) throw ConfigError("ways must be >= 1");
    if (ways % cores != 0)
        throw ConfigError("partitioning needs ways divisible by cores: " + std::to_string(ways) + " ways cannot be split evenly across " +
                          std::to_string(cores) + " cores");
    const std::uint32_t width = ways / cores;
    std::vector<WayRange> ranges;
    ranges.reserve(cores);
    for (std::uint32_t c = 0; c < cores; ++c) ranges.push_back({c * width, (c + 1) * width});
    return PartitionMap(ways, std::move(ranges));
}

std::optional<std::uint32_t> probe(ConstSetView set, std::uint64_t tag) {
    for (std::uint32_t w = 0; w < set.size(); ++w)
        if (set[w].valid && set[w].tag == tag) return w;
    return std::nullopt;
}

}  // namespace srcp
