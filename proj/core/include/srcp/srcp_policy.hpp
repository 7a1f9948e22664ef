#pragma once

#include <cstdint>
#include <string_view>

#include "srcp/cache_model.hpp"
#include "srcp/trace.hpp"

namespace srcp {

enum class FreqClass : std::uint8_t { FreqUsed, LessFreqUsed };
enum class ShareClass : std::uint8_t { Shared, Private };
enum class FillAction : std::uint8_t { FillL1, BypassL1, WriteLLCDirect };

std::string_view to_string(FreqClass c);
std::string_view to_string(ShareClass c);
std::string_view to_string(FillAction a);

// Which lines a miss ages: only the missing set, or the requester's ways in
// every set.
enum class AgingScope : std::uint8_t { SetLocal, PartitionGlobal };

// Counter widths. afc is k bits, gcount n bits; both saturate at both ends.
struct SrcpParams {
    std::uint32_t afc_bits = 8;
    std::uint32_t gcount_bits = 2;

    std::uint32_t afc_max() const { return (1u << afc_bits) - 1; }
    std::uint32_t gcount_max() const { return (1u << gcount_bits) - 1; }
    std::uint32_t threshold() const;
};

// Default GCount width for a core count: ceil(log2(cores)).
std::uint32_t default_gcount_bits(std::uint32_t cores);

// Fill and classification threshold: ceil((2^k - 1 + 0) / 2).
// Throws ConfigError for k outside [1, 31].
std::uint32_t initial_afc(std::uint32_t k);

inline FreqClass classify_frequency(std::uint32_t afc, std::uint32_t threshold) {
    return afc >= threshold ? FreqClass::FreqUsed : FreqClass::LessFreqUsed;
}

inline ShareClass classify_sharing(std::uint32_t gcount) {
    return gcount >= 1 ? ShareClass::Shared : ShareClass::Private;
}

// Installs a new block into line (the previous occupant is already gone).
// Counters restart: gcount = 0, afc = threshold, lc set only for the owner.
void on_fill(LineState& line, std::uint64_t tag, std::uint32_t requester, std::uint32_t owner, Op op,
             std::uint64_t now, const SrcpParams& params);

// Local hits bump afc and set lc; global hits bump gcount. last_touch moves
// either way.
void on_hit(LineState& line, std::uint32_t requester, std::uint32_t owner, std::uint64_t now,
            const SrcpParams& params);

// Decrements afc and gcount (floor 0) on every valid line in range.
void age_partition(SetView set, WayRange range);

// Lowest invalid way in range if any, else the way minimizing
// (afc, gcount, last_local_touch, way). Throws ConfigError on an empty range.
std::uint32_t select_victim(ConstSetView set, WayRange range);

// Where the data goes after an LLC access, by class and op:
//   shared write           -> WriteLLCDirect
//   less frequently used   -> BypassL1
//   everything else        -> FillL1
FillAction l1_fill_decision(FreqClass freq, ShareClass share, Op op);

}  // namespace srcp
