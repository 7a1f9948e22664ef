#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "srcp/cache_model.hpp"
#include "srcp/srcp_policy.hpp"

namespace srcp {

enum class Policy : std::uint8_t { Srcp, Lru, TaDrrip };

std::string_view to_string(Policy p);
// "srcp", "lru" or "tadrrip"; throws ConfigError otherwise.
Policy parse_policy(std::string_view name);

std::string_view to_string(AgingScope s);
AgingScope parse_aging_scope(std::string_view name);

// Cycles charged to an access by the level that serviced it.
struct LatencyModel {
    std::uint64_t l1_hit_cycles = 4;
    std::uint64_t llc_hit_cycles = 33;
    std::uint64_t mem_cycles = 308;
    // Per-contending-core miss inflation used by the shared-cache WCET bound.
    double interference_alpha = 1.0;

    friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

// Throws ConfigError unless l1 <= llc <= mem and alpha >= 0.
void validate(const LatencyModel& lm);

struct L1Geometry {
    std::uint32_t sets = 128;
    std::uint32_t ways = 4;

    friend bool operator==(const L1Geometry&, const L1Geometry&) = default;
};

struct SimConfig {
    std::uint32_t cores = 4;
    Geometry llc{4096, 16, 64};
    L1Geometry l1{};
    Policy policy = Policy::Srcp;
    std::uint32_t afc_bits = 8;
    // Defaults to ceil(log2(cores)) when unset.
    std::optional<std::uint32_t> gcount_bits;
    LatencyModel latency{};
    AgingScope aging = AgingScope::SetLocal;
    // Baselines may run over the whole set instead of the requester's ways.
    bool partitioned = true;
    std::uint64_t seed = 1;

    SrcpParams srcp_params() const {
        return {afc_bits, gcount_bits.value_or(default_gcount_bits(cores))};
    }
    Geometry l1_geometry() const { return {l1.sets, l1.ways, llc.block_size}; }

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Throws ConfigError on any inconsistency, including ways % cores != 0.
void validate(const SimConfig& cfg);

// JSON form of SimConfig. Missing keys keep their defaults; unknown keys are
// rejected. Throws ConfigError.
SimConfig config_from_json(std::string_view text);
SimConfig load_config(const std::string& path);
std::string config_to_json(const SimConfig& cfg);

}  // namespace srcp
