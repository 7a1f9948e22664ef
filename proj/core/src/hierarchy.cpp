#include "srcp/hierarchy.hpp"

#include <string>

#include "srcp/error.hpp"

namespace srcp {

L1Cache::L1Cache(const Geometry& g) : geometry_(g), lines_(std::size_t{g.sets} * g.ways) {}

L1Cache::Line* L1Cache::find(std::uint64_t addr) {
    return const_cast<Line*>(static_cast<const L1Cache*>(this)->find(addr));
}

const L1Cache::Line* L1Cache::find(std::uint64_t addr) const {
    const auto st = decompose(addr, geometry_);
    const auto* base = lines_.data() + std::size_t{st.set} * geometry_.ways;
    for (std::uint32_t w = 0; w < geometry_.ways; ++w)
        if (base[w].valid && base[w].tag == st.tag) return base + w;
    return nullptr;
}

bool L1Cache::is_dirty(std::uint64_t addr) const {
    const auto* line = find(addr);
    return line != nullptr && line->dirty;
}

bool L1Cache::touch(std::uint64_t addr, std::uint64_t now, bool write) {
    auto* line = find(addr);
    if (line == nullptr) return false;
    line->last_touch = now;
    line->dirty = line->dirty || write;
    return true;
}

std::optional<L1Cache::Evicted> L1Cache::install(std::uint64_t addr, std::uint64_t now, bool dirty) {
    const auto st = decompose(addr, geometry_);
    auto* base = lines_.data() + std::size_t{st.set} * geometry_.ways;
    Line* victim = nullptr;
    for (std::uint32_t w = 0; w < geometry_.ways && victim == nullptr; ++w)
        if (!base[w].valid) victim = base + w;
    if (victim == nullptr) {
        victim = base;
        for (std::uint32_t w = 1; w < geometry_.ways; ++w)
            if (base[w].last_touch < victim->last_touch) victim = base + w;
    }
    std::optional<Evicted> evicted;
    if (victim->valid) evicted = Evicted{block_address({st.set, victim->tag}, geometry_), victim->dirty};
    *victim = Line{true, dirty, st.tag, now};
    return evicted;
}

std::optional<bool> L1Cache::invalidate(std::uint64_t addr) {
    auto* line = find(addr);
    if (line == nullptr) return std::nullopt;
    const bool dirty = line->dirty;
    *line = Line{};
    return dirty;
}

std::size_t L1Cache::valid_lines() const {
    std::size_t n = 0;
    for (const auto& l : lines_) n += l.valid ? 1 : 0;
    return n;
}

namespace {

// Resolves defaults so the stats echo states the widths actually used.
SimConfig validated(SimConfig cfg) {
    validate(cfg);
    cfg.gcount_bits = cfg.srcp_params().gcount_bits;
    return cfg;
}

}  // namespace

Simulator::Simulator(SimConfig cfg)
    : cfg_(validated(std::move(cfg))),
      params_(cfg_.srcp_params()),
      partitions_(PartitionMap::build(cfg_.llc.ways, cfg_.cores)),
      llc_(cfg_.llc),
      l1_(cfg_.cores, L1Cache(cfg_.l1_geometry())),
      duel_(cfg_.llc.sets, cfg_.cores),
      rng_(cfg_.seed),
      per_core_(cfg_.cores) {}

WayRange Simulator::victim_range(std::uint32_t core) const {
    return cfg_.partitioned ? partitions_.range(core) : WayRange{0, cfg_.llc.ways};
}

const LineState* Simulator::llc_line(std::uint64_t addr) const {
    const auto st = decompose(addr, cfg_.llc);
    const auto set = llc_.set(st.set);
    const auto way = probe(set, st.tag);
    return way ? &set[*way] : nullptr;
}

std::optional<std::uint32_t> Simulator::llc_way(std::uint64_t addr) const {
    const auto st = decompose(addr, cfg_.llc);
    return probe(llc_.set(st.set), st.tag);
}

std::uint32_t Simulator::l1_holders(std::uint64_t addr) const {
    std::uint32_t n = 0;
    for (const auto& l1 : l1_) n += l1.holds(addr) ? 1 : 0;
    return n;
}

void Simulator::mark_llc_dirty(std::uint64_t addr) {
    const auto st = decompose(addr, cfg_.llc);
    const auto set = llc_.set(st.set);
    const auto way = probe(set, st.tag);
    if (!way) throw InvariantError("L1 line without a backing LLC line");
    set[*way].dirty = true;
}

std::uint32_t Simulator::invalidate_l1_copies(std::uint64_t addr, std::optional<std::uint32_t> except_core) {
    std::uint32_t dropped = 0;
    for (std::uint32_t c = 0; c < cfg_.cores; ++c) {
        if (except_core && *except_core == c) continue;
        const auto dirty = l1_[c].invalidate(addr);
        if (!dirty) continue;
        ++dropped;
        if (*dirty) mark_llc_dirty(addr);
    }
    return dropped;
}

std::uint32_t Simulator::choose_victim(SetView set, std::uint32_t set_index, std::uint32_t core) {
    const WayRange range = victim_range(core);
    switch (cfg_.policy) {
        case Policy::Srcp:
            if (cfg_.aging == AgingScope::SetLocal) {
                age_partition(set, range);
            } else {
                for (std::uint32_t s = 0; s < cfg_.llc.sets; ++s) age_partition(llc_.set(s), range);
            }
            return select_victim(set, range);
        case Policy::Lru: return lru_victim(set, range);
        case Policy::TaDrrip:
            duel_.on_miss(core, set_index);
            return rrip_victim(set, range).way;
    }
    throw InvariantError("unknown policy");
}

void Simulator::install(LineState& line, std::uint64_t tag, std::uint32_t set_index, const MemRef& ref) {
    if (cfg_.policy == Policy::Srcp) {
        // Allocation is always into the requester's own ways.
        on_fill(line, tag, ref.core, ref.core, ref.op, clock_, params_);
        return;
    }
    line = LineState{};
    line.valid = true;
    line.tag = tag;
    line.dirty = ref.op == Op::Write;
    line.last_touch = clock_;
    if (cfg_.policy == Policy::TaDrrip) rrip_update(line, duel_.insertion(ref.core, set_index), rng_);
}

FillAction Simulator::handle_llc_hit(LineState& line, std::uint32_t way, const MemRef& ref) {
    switch (cfg_.policy) {
        case Policy::Srcp: {
            on_hit(line, ref.core, partitions_.owner_of(way), clock_, params_);
            return l1_fill_decision(classify_frequency(line.afc, params_.threshold()), classify_sharing(line.gcount),
                                    ref.op);
        }
        case Policy::Lru: line.last_touch = clock_; break;
        case Policy::TaDrrip:
            line.last_touch = clock_;
            rrip_update(line, RripEvent::Hit, rng_);
            break;
    }
    return FillAction::FillL1;
}

void Simulator::fill_l1(std::uint32_t core, std::uint64_t block, bool dirty, CoreStats& cs) {
    const auto evicted = l1_[core].install(block, clock_, dirty);
    if (evicted && evicted->dirty) {
        mark_llc_dirty(evicted->block_addr);
        ++cs.l1_writebacks;
    }
}

AccessOutcome Simulator::access(const MemRef& ref) {
    if (ref.core >= cfg_.cores)
        throw ValidationError("seq " + std::to_string(ref.seq) + ": core " + std::to_string(ref.core) +
                              " out of range for " + std::to_string(cfg_.cores) + " cores");
    ++clock_;
    auto& cs = per_core_[ref.core];
    ++cs.refs;
    const bool write = ref.op == Op::Write;
    const std::uint64_t block = ref.addr & ~std::uint64_t{cfg_.llc.block_size - 1};
    const auto st = decompose(block, cfg_.llc);
    auto set = llc_.set(st.set);
    auto& l1 = l1_[ref.core];
    AccessOutcome out;

    if (l1.holds(block)) {
        // A write to a line the LLC classifies as Shared may not complete in
        // L1: the private copy is dropped and the write goes to the LLC.
        bool to_llc = false;
        if (write && cfg_.policy == Policy::Srcp) {
            const auto way = probe(set, st.tag);
            if (!way) throw InvariantError("L1 line without a backing LLC line");
            to_llc = classify_sharing(set[*way].gcount) == ShareClass::Shared;
        }
        if (!to_llc) {
            l1.touch(block, clock_, write);
            if (write) out.invalidations = invalidate_l1_copies(block, ref.core);
            cs.l1_invalidations += out.invalidations;
            ++cs.l1_hits;
            out.level_hit = Level::L1;
            out.latency_cycles = cfg_.latency.l1_hit_cycles;
            if (self_check_) check_after(ref, out);
            return out;
        }
        if (*l1.invalidate(block)) mark_llc_dirty(block);
    }
    ++cs.l1_misses;

    FillAction action;
    if (const auto way = probe(set, st.tag)) {
        ++cs.llc_hits;
        out.level_hit = Level::LLC;
        out.latency_cycles = cfg_.latency.llc_hit_cycles;
        action = handle_llc_hit(set[*way], *way, ref);
        if (action != FillAction::FillL1 && write) set[*way].dirty = true;
    } else {
        ++cs.llc_misses;
        out.level_hit = Level::Memory;
        out.latency_cycles = cfg_.latency.mem_cycles;
        const std::uint32_t victim = choose_victim(set, st.set, ref.core);
        auto& line = set[victim];
        if (line.valid) {
            const std::uint64_t victim_block = block_address({st.set, line.tag}, cfg_.llc);
            for (auto& other : l1_) {
                const auto dirty = other.invalidate(victim_block);
                if (!dirty) continue;
                ++cs.back_invalidations;
                line.dirty = line.dirty || *dirty;
            }
            ++cs.llc_evictions;
            out.evicted = true;
            if (line.dirty) {
                ++cs.writebacks;
                out.victim_writeback = true;
            }
        }
        install(line, st.tag, st.set, ref);
        out.fill_way = victim;
        action = FillAction::FillL1;
        if (cfg_.policy == Policy::Srcp)
            action = l1_fill_decision(classify_frequency(line.afc, params_.threshold()), classify_sharing(line.gcount),
                                      ref.op);
    }

    out.action = action;
    switch (action) {
        case FillAction::FillL1:
            ++cs.fill_l1;
            fill_l1(ref.core, block, write, cs);
            break;
        case FillAction::BypassL1: ++cs.bypass_l1; break;
        case FillAction::WriteLLCDirect: ++cs.write_llc_direct; break;
    }
    if (write) out.invalidations = invalidate_l1_copies(block, ref.core);
    cs.l1_invalidations += out.invalidations;
    if (self_check_) check_after(ref, out);
    return out;
}

void Simulator::check_after(const MemRef& ref, const AccessOutcome& out) const {
    const std::uint64_t block = ref.addr & ~std::uint64_t{cfg_.llc.block_size - 1};
    auto fail = [&](const std::string& what) {
        throw InvariantError("seq " + std::to_string(ref.seq) + ": " + what);
    };
    if (out.fill_way && cfg_.partitioned && !partitions_.range(ref.core).contains(*out.fill_way))
        fail("core " + std::to_string(ref.core) + " evicted way " + std::to_string(*out.fill_way) +
             " outside its partition");
    const LineState* line = llc_line(block);
    if (l1_[ref.core].holds(block) && line == nullptr) fail("L1 line without a backing LLC line");
    if (ref.op == Op::Write) {
        if (cfg_.policy == Policy::Srcp && line != nullptr && classify_sharing(line->gcount) == ShareClass::Shared &&
            l1_holders(block) != 0)
            fail("L1 copy survives a write to a shared line");
        if (l1_holders(block) > (l1_[ref.core].holds(block) ? 1u : 0u)) fail("stale L1 copy after a write");
    }
    if (out.level_hit != Level::Memory && out.fill_way) fail("fill reported on a hit");
}

SimStats Simulator::stats(std::uint64_t trace_hash) const {
    SimStats s;
    s.policy = std::string(to_string(cfg_.policy));
    s.config = cfg_;
    s.trace_hash = trace_hash;
    s.experiment_hash = experiment_hash(trace_hash, cfg_);
    s.per_core = per_core_;
    for (auto& c : s.per_core) {
        c.estimated_cycles = estimated_cycles(c, cfg_.latency);
        s.total += c;
    }
    return s;
}

SimStats run(Simulator& sim, const Trace& trace) {
    const auto& cfg = sim.config();
    if (trace.header.cores != cfg.cores)
        throw ValidationError("trace declares " + std::to_string(trace.header.cores) + " cores but config has " +
                              std::to_string(cfg.cores));
    if (trace.header.block_size != cfg.llc.block_size)
        throw ValidationError("trace block size " + std::to_string(trace.header.block_size) +
                              " differs from config block size " + std::to_string(cfg.llc.block_size));
    for (std::size_t i = 0; i < trace.refs.size(); ++i) {
        const auto& ref = trace.refs[i];
        if (i > 0 && ref.seq <= trace.refs[i - 1].seq)
            throw ValidationError("seq " + std::to_string(ref.seq) + " does not increase");
        sim.access(ref);
    }
    auto s = sim.stats(trace_hash(trace));
    check_conservation(s);
    return s;
}

SimStats run(const SimConfig& cfg, const Trace& trace, bool self_check) {
    Simulator sim(cfg);
    sim.set_self_check(self_check);
    return run(sim, trace);
}

}  // namespace srcp
