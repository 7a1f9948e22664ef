#include "srcp/srcp_policy.hpp"

#include <bit>
#include <string>
#include <tuple>

#include "srcp/error.hpp"

namespace srcp {

std::string_view to_string(FreqClass c) { return c == FreqClass::FreqUsed ? "freq_used" : "less_freq_used"; }
std::string_view to_string(ShareClass c) { return c == ShareClass::Shared ? "shared" : "private"; }

std::string_view to_string(FillAction a) {
    switch (a) {
        case FillAction::FillL1: return "fill_l1";
        case FillAction::BypassL1: return "bypass_l1";
        case FillAction::WriteLLCDirect: return "write_llc_direct";
    }
    return "?";
}

std::uint32_t SrcpParams::threshold() const { return initial_afc(afc_bits); }

std::uint32_t default_gcount_bits(std::uint32_t cores) {
    return cores <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(cores - 1));
}

std::uint32_t initial_afc(std::uint32_t k) {
    if (k < 1 || k > 31) throw ConfigError("AFC width must lie in [1, 31], got " + std::to_string(k));
    const std::uint32_t max = (1u << k) - 1;
    return max / 2 + max % 2;
}

void on_fill(LineState& line, std::uint64_t tag, std::uint32_t requester, std::uint32_t owner, Op op,
             std::uint64_t now, const SrcpParams& params) {
    line = LineState{};
    line.valid = true;
    line.tag = tag;
    line.dirty = op == Op::Write;
    line.afc = params.threshold();
    line.gcount = 0;
    line.lc = requester == owner;
    line.last_touch = now;
    line.last_local_touch = requester == owner ? now : kNoStamp;
}

void on_hit(LineState& line, std::uint32_t requester, std::uint32_t owner, std::uint64_t now,
            const SrcpParams& params) {
    if (requester == owner) {
        if (line.afc < params.afc_max()) ++line.afc;
        line.lc = true;
        line.last_local_touch = now;
    } else if (line.gcount < params.gcount_max()) {
        ++line.gcount;
    }
    line.last_touch = now;
}

void age_partition(SetView set, WayRange range) {
    for (std::uint32_t w = range.start; w < range.end; ++w) {
        auto& line = set[w];
        if (!line.valid) continue;
        if (line.afc > 0) --line.afc;
        if (line.gcount > 0) --line.gcount;
    }
}

std::uint32_t select_victim(ConstSetView set, WayRange range) {
    if (range.empty()) throw ConfigError("victim selection over an empty way range");
    for (std::uint32_t w = range.start; w < range.end; ++w)
        if (!set[w].valid) return w;
    std::uint32_t best = range.start;
    auto key = [&](std::uint32_t w) { return std::tie(set[w].afc, set[w].gcount, set[w].last_local_touch); };
    for (std::uint32_t w = range.start + 1; w < range.end; ++w)
        if (key(w) < key(best)) best = w;
    return best;
}

FillAction l1_fill_decision(FreqClass freq, ShareClass share, Op op) {
    if (share == ShareClass::Shared && op == Op::Write) return FillAction::WriteLLCDirect;
    if (freq == FreqClass::LessFreqUsed) return FillAction::BypassL1;
    return FillAction::FillL1;
}

}  // namespace srcp
