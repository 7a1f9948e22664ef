#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srcp/config.hpp"

namespace srcp {

inline constexpr int kStatsSchemaVersion = 1;

enum class Level : std::uint8_t { L1, LLC, Memory };
std::string_view to_string(Level l);

// Event tallies for one core, or the sum over cores.
struct CoreStats {
    std::uint64_t refs = 0;
    std::uint64_t l1_hits = 0;
    std::uint64_t l1_misses = 0;
    std::uint64_t llc_hits = 0;
    std::uint64_t llc_misses = 0;
    // Action taken for every LLC-serviced access.
    std::uint64_t fill_l1 = 0;
    std::uint64_t bypass_l1 = 0;
    std::uint64_t write_llc_direct = 0;
    // Other cores' L1 copies dropped by this core's writes.
    std::uint64_t l1_invalidations = 0;
    // L1 copies dropped because their LLC line was evicted.
    std::uint64_t back_invalidations = 0;
    std::uint64_t llc_evictions = 0;
    // Dirty LLC victims written to memory.
    std::uint64_t writebacks = 0;
    // Dirty L1 victims written into the LLC.
    std::uint64_t l1_writebacks = 0;
    std::uint64_t estimated_cycles = 0;

    CoreStats& operator+=(const CoreStats& o);
    friend bool operator==(const CoreStats&, const CoreStats&) = default;
};

// l1_hits * l1 + llc_hits * llc + llc_misses * mem.
std::uint64_t estimated_cycles(const CoreStats& s, const LatencyModel& lm);

struct SimStats {
    std::string policy;
    SimConfig config;
    std::uint64_t trace_hash = 0;
    // Hash of the trace plus every config field that must agree for two runs
    // to be comparable (everything except policy and seed).
    std::uint64_t experiment_hash = 0;
    std::vector<CoreStats> per_core;
    CoreStats total;

    friend bool operator==(const SimStats&, const SimStats&) = default;
};

std::uint64_t experiment_hash(std::uint64_t trace_hash, const SimConfig& cfg);

// Throws InvariantError when per-core tallies break conservation
// (l1_hits + llc_hits + llc_misses == refs, etc.) or total != sum of cores.
void check_conservation(const SimStats& s);

/// Hit rate at one level: hits / (hits + misses).
/// Throws ValidationError when the level saw no accesses.
double hit_rate(const CoreStats& s, Level level);

// Shared-cache bound: every miss is inflated by the interference of the
// other n-1 cores, i.e. hits*L_hit + misses*L_miss*(1 + alpha*(n-1)).
// Throws ConfigError for n == 0 or negative alpha.
long double wcet_shared(std::uint64_t hits, std::uint64_t misses, std::uint64_t l_hit, std::uint64_t l_miss,
                        std::uint32_t cores, double alpha);
long double wcet_shared(std::uint64_t hits, std::uint64_t misses, const LatencyModel& lm, std::uint32_t cores);

// Partitioned bound: hits*L_hit + misses*L_miss.
long double wcet_srcp(std::uint64_t hits, std::uint64_t misses, std::uint64_t l_hit, std::uint64_t l_miss);
long double wcet_srcp(std::uint64_t hits, std::uint64_t misses, const LatencyModel& lm);

struct ComparisonRow {
    std::string scope;  // "total" or "core<N>"
    std::optional<double> base_llc_hit_rate;
    std::optional<double> cand_llc_hit_rate;
    // (cand - base) / base; empty when base rate is zero or undefined.
    std::optional<double> llc_hit_rate_rel_delta;
    std::uint64_t base_cycles = 0;
    std::uint64_t cand_cycles = 0;
    std::optional<double> cycles_rel_delta;
    std::optional<double> cycles_ratio;
};

struct Report {
    std::string base_policy;
    std::string cand_policy;
    std::vector<ComparisonRow> rows;  // total first, then per core
};

// Throws ComparisonError unless both runs share an experiment hash.
Report compare_runs(const SimStats& base, const SimStats& cand);

std::string stats_to_json(const SimStats& s);
// Throws ParseError/ValidationError on malformed or wrong-schema documents.
SimStats stats_from_json(std::string_view text);
SimStats load_stats(const std::string& path);

std::string report_csv_header();
std::string report_to_csv_rows(const Report& r);
std::string report_to_text(const Report& r);

}  // namespace srcp
