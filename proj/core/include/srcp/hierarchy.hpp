#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srcp/baselines.hpp"
#include "srcp/cache_model.hpp"
#include "srcp/config.hpp"
#include "srcp/metrics.hpp"
#include "srcp/rng.hpp"
#include "srcp/srcp_policy.hpp"
#include "srcp/trace.hpp"

namespace srcp {

// Private write-back L1 with LRU replacement.
class L1Cache {
public:
    struct Line {
        bool valid = false;
        bool dirty = false;
        std::uint64_t tag = 0;
        std::uint64_t last_touch = kNoStamp;
    };
    struct Evicted {
        std::uint64_t block_addr;
        bool dirty;
    };

    explicit L1Cache(const Geometry& g);

    const Geometry& geometry() const { return geometry_; }
    bool holds(std::uint64_t addr) const { return find(addr) != nullptr; }
    bool is_dirty(std::uint64_t addr) const;

    // Returns true on a hit and refreshes recency.
    bool touch(std::uint64_t addr, std::uint64_t now, bool write);
    // Allocates addr (must be absent); returns the displaced valid line.
    std::optional<Evicted> install(std::uint64_t addr, std::uint64_t now, bool dirty);
    // Drops addr if present; returns its dirty flag.
    std::optional<bool> invalidate(std::uint64_t addr);

    std::size_t valid_lines() const;

private:
    Line* find(std::uint64_t addr);
    const Line* find(std::uint64_t addr) const;

    Geometry geometry_;
    std::vector<Line> lines_;
};

struct AccessOutcome {
    Level level_hit = Level::L1;
    // Empty for L1 hits.
    std::optional<FillAction> action;
    bool victim_writeback = false;
    // Other L1 copies dropped because of this access's write.
    std::uint32_t invalidations = 0;
    std::uint64_t latency_cycles = 0;
    // LLC way filled on a miss.
    std::optional<std::uint32_t> fill_way;
    // Whether the fill displaced a valid line.
    bool evicted = false;

    friend bool operator==(const AccessOutcome&, const AccessOutcome&) = default;
};

// Two-level hierarchy: one private L1 per core over a shared, way-partitioned
// LLC.
//
// Any core may hit on any LLC way, but a miss allocates only inside the
// requester's own partition. The LLC probe covers the whole set, so a block
// has at most one LLC copy. LLC evictions drop the block from every L1 (dirty
// copies merge into the victim first), which keeps every L1 line backed by
// an LLC line.
//
// Under SRCP the fill decision can bypass L1 or send a write straight to the
// LLC; a write to a Shared line leaves no L1 copy anywhere. Baselines always
// fill L1. For every policy, a write that completes in one L1 drops every
// other core's copy.
class Simulator {
public:
    // Throws ConfigError.
    explicit Simulator(SimConfig cfg);

    // Throws ValidationError for a core id outside the configuration and
    // InvariantError when self-check mode catches a simulator bug.
    AccessOutcome access(const MemRef& ref);

    // Drops every L1 copy of the block except the one in except_core's L1,
    // merging dirty copies into the LLC line. Returns the number dropped.
    std::uint32_t invalidate_l1_copies(std::uint64_t addr, std::optional<std::uint32_t> except_core);

    // Per-access invariant checks: partition isolation of every eviction,
    // single copy after shared writes, L1 lines backed by the LLC.
    void set_self_check(bool on) { self_check_ = on; }

    const SimConfig& config() const { return cfg_; }
    const PartitionMap& partitions() const { return partitions_; }
    const DuelState& duel() const { return duel_; }
    std::uint64_t clock() const { return clock_; }

    // Introspection.
    const LineState* llc_line(std::uint64_t addr) const;
    std::optional<std::uint32_t> llc_way(std::uint64_t addr) const;
    ConstSetView llc_set(std::uint32_t index) const { return llc_.set(index); }
    const L1Cache& l1(std::uint32_t core) const { return l1_.at(core); }
    std::uint32_t l1_holders(std::uint64_t addr) const;

    // Stats for everything processed so far.
    SimStats stats(std::uint64_t trace_hash = 0) const;

private:
    WayRange victim_range(std::uint32_t core) const;
    std::uint32_t choose_victim(SetView set, std::uint32_t set_index, std::uint32_t core);
    FillAction handle_llc_hit(LineState& line, std::uint32_t way, const MemRef& ref);
    void install(LineState& line, std::uint64_t tag, std::uint32_t set_index, const MemRef& ref);
    void fill_l1(std::uint32_t core, std::uint64_t block, bool dirty, CoreStats& cs);
    void mark_llc_dirty(std::uint64_t addr);
    void check_after(const MemRef& ref, const AccessOutcome& out) const;

    SimConfig cfg_;
    SrcpParams params_;
    PartitionMap partitions_;
    LineStore llc_;
    std::vector<L1Cache> l1_;
    DuelState duel_;
    Rng rng_;
    std::uint64_t clock_ = 0;
    std::vector<CoreStats> per_core_;
    bool self_check_ = false;
};

// Folds access over the trace. Throws ValidationError naming the seq of the
// first reference that does not fit the configuration.
SimStats run(Simulator& sim, const Trace& trace);
SimStats run(const SimConfig& cfg, const Trace& trace, bool self_check = false);

}  // namespace srcp
