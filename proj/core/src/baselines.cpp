#include "srcp/baselines.hpp"

#include <algorithm>

#include "srcp/error.hpp"

namespace srcp {

std::uint32_t lru_victim(ConstSetView set, WayRange range) {
    if (range.empty()) throw ConfigError("victim selection over an empty way range");
    for (std::uint32_t w = range.start; w < range.end; ++w)
        if (!set[w].valid) return w;
    std::uint32_t best = range.start;
    for (std::uint32_t w = range.start + 1; w < range.end; ++w)
        if (set[w].last_touch < set[best].last_touch) best = w;
    return best;
}

RripVictim rrip_victim(SetView set, WayRange range) {
    if (range.empty()) throw ConfigError("victim selection over an empty way range");
    for (std::uint32_t w = range.start; w < range.end; ++w)
        if (!set[w].valid) return {w, 0};
    for (std::uint32_t round = 0;; ++round) {
        for (std::uint32_t w = range.start; w < range.end; ++w)
            if (set[w].rrpv >= kRrpvMax) return {w, round};
        for (std::uint32_t w = range.start; w < range.end; ++w) ++set[w].rrpv;
    }
}

void rrip_update(LineState& line, RripEvent event, Rng& brrip_coin) {
    switch (event) {
        case RripEvent::Hit: line.rrpv = 0; break;
        case RripEvent::InsertSRRIP: line.rrpv = kRrpvMax - 1; break;
        case RripEvent::InsertBRRIP:
            line.rrpv = brrip_coin.one_in(kBrripLongOdds) ? kRrpvMax - 1 : kRrpvMax;
            break;
    }
}

DuelState::DuelState(std::uint32_t sets, std::uint32_t cores)
    : sets_(sets),
      cores_(cores),
      leaders_(std::min(kLeadersPerCamp, sets / (2 * cores))),
      region_size_(leaders_ == 0 ? 0 : sets / leaders_),
      selectors_(cores, kSelectorInit) {}

SetRole DuelState::role(std::uint32_t core, std::uint32_t set_index) const {
    if (leaders_ == 0 || set_index / region_size_ >= leaders_) return SetRole::Follower;
    const std::uint32_t offset = set_index % region_size_;
    if (offset == 2 * core) return SetRole::SrripLeader;
    if (offset == 2 * core + 1) return SetRole::BrripLeader;
    return SetRole::Follower;
}

RripEvent DuelState::insertion(std::uint32_t core, std::uint32_t set_index) const {
    switch (role(core, set_index)) {
        case SetRole::SrripLeader: return RripEvent::InsertSRRIP;
        case SetRole::BrripLeader: return RripEvent::InsertBRRIP;
        case SetRole::Follower: break;
    }
    return selectors_.at(core) < kSelectorMid ? RripEvent::InsertSRRIP : RripEvent::InsertBRRIP;
}

void DuelState::on_miss(std::uint32_t core, std::uint32_t set_index) {
    auto& sel = selectors_.at(core);
    switch (role(core, set_index)) {
        case SetRole::SrripLeader:
            if (sel < kSelectorMax) ++sel;
            break;
        case SetRole::BrripLeader:
            if (sel > 0) --sel;
            break;
        case SetRole::Follower: break;
    }
}

}  // namespace srcp
