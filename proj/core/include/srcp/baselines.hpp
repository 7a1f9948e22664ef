#pragma once

#include <cstdint>
#include <vector>

#include "srcp/cache_model.hpp"
#include "srcp/rng.hpp"

namespace srcp {

// Partitioned LRU: lowest invalid way in range, else oldest last_touch.
// Throws ConfigError on an empty range.
std::uint32_t lru_victim(ConstSetView set, WayRange range);

/// RRIP family (2-bit RRPV).
///
/// Victim search scans the range for a line at the distant re-reference value
/// and ages the whole range when none is found. Insertion is SRRIP
/// (long re-reference) or BRRIP (distant, with a 1-in-32 long insertion).
inline constexpr std::uint8_t kRrpvMax = 3;
inline constexpr std::uint32_t kBrripLongOdds = 32;

struct RripVictim {
    std::uint32_t way = 0;
    std::uint32_t increments = 0;  // aging rounds performed before the hit
};

// Ages set lines in range as a side effect. Throws ConfigError on an empty range.
RripVictim rrip_victim(SetView set, WayRange range);

enum class RripEvent : std::uint8_t { Hit, InsertSRRIP, InsertBRRIP };

// brrip_coin is only consulted for InsertBRRIP.
void rrip_update(LineState& line, RripEvent event, Rng& brrip_coin);

/// Thread-aware set dueling.
///
/// Each core owns kLeadersPerCamp SRRIP-leader and kLeadersPerCamp
/// BRRIP-leader sets. The sets are cut into L equal constituencies
/// (L = min(32, sets / (2 * cores))); in every constituency, offset 2c is an
/// SRRIP leader for core c and offset 2c+1 a BRRIP leader. All other
/// (set, core) pairs follow the core's 10-bit selector: SRRIP while the
/// selector is below the midpoint 512, BRRIP otherwise. Selectors start at
/// 511. A miss by core c in one of its SRRIP leaders moves its selector up
/// by one (toward BRRIP), a miss in a BRRIP leader moves it down.
inline constexpr std::uint32_t kLeadersPerCamp = 32;
inline constexpr std::uint32_t kSelectorMax = 1023;
inline constexpr std::uint32_t kSelectorMid = 512;
inline constexpr std::uint32_t kSelectorInit = kSelectorMid - 1;

enum class SetRole : std::uint8_t { Follower, SrripLeader, BrripLeader };

class DuelState {
public:
    DuelState(std::uint32_t sets, std::uint32_t cores);

    SetRole role(std::uint32_t core, std::uint32_t set_index) const;
    RripEvent insertion(std::uint32_t core, std::uint32_t set_index) const;
    // Selector update for a miss by core in set_index; no-op in follower sets.
    void on_miss(std::uint32_t core, std::uint32_t set_index);

    std::uint32_t selector(std::uint32_t core) const { return selectors_.at(core); }
    std::uint32_t leaders_per_camp() const { return leaders_; }

private:
    std::uint32_t sets_;
    std::uint32_t cores_;
    std::uint32_t leaders_;
    std::uint32_t region_size_;
    std::vector<std::uint32_t> selectors_;
};

}  // namespace srcp
