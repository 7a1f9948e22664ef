#include "srcp/config.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "srcp/config_json.hpp"
#include "srcp/error.hpp"

namespace srcp {

using nlohmann::json;

std::string_view to_string(Policy p) {
    switch (p) {
        case Policy::Srcp: return "srcp";
        case Policy::Lru: return "lru";
        case Policy::TaDrrip: return "tadrrip";
    }
    return "?";
}

Policy parse_policy(std::string_view name) {
    for (auto p : {Policy::Srcp, Policy::Lru, Policy::TaDrrip})
        if (to_string(p) == name) return p;
    throw ConfigError("unknown policy '" + std::string(name) + "' (expected srcp, lru or tadrrip)");
}

std::string_view to_string(AgingScope s) { return s == AgingScope::SetLocal ? "set-local" : "partition-global"; }

AgingScope parse_aging_scope(std::string_view name) {
    if (name == "set-local") return AgingScope::SetLocal;
    if (name == "partition-global") return AgingScope::PartitionGlobal;
    throw ConfigError("unknown aging scope '" + std::string(name) + "'");
}

void validate(const LatencyModel& lm) {
    if (!(lm.l1_hit_cycles <= lm.llc_hit_cycles && lm.llc_hit_cycles <= lm.mem_cycles))
        throw ConfigError("latencies must satisfy l1 <= llc <= mem");
    if (!(lm.interference_alpha >= 0.0)) throw ConfigError("interference alpha must be >= 0");
}

void validate(const SimConfig& cfg) {
    if (cfg.cores < 1) throw ConfigError("cores must be >= 1");
    validate(cfg.llc);
    validate(cfg.l1_geometry());
    PartitionMap::build(cfg.llc.ways, cfg.cores);
    if (cfg.afc_bits < 1 || cfg.afc_bits > 16) throw ConfigError("afc_bits must lie in [1, 16]");
    if (cfg.gcount_bits && *cfg.gcount_bits > 16) throw ConfigError("gcount_bits must lie in [0, 16]");
    if (cfg.policy == Policy::Srcp && !cfg.partitioned) throw ConfigError("srcp requires a partitioned LLC");
    validate(cfg.latency);
}

namespace {

const char* const kKnownKeys[] = {"cores", "llc", "l1", "policy", "afc_bits", "gcount_bits",
                                  "latency", "alpha", "aging", "partitioned", "seed"};

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json config_json(const SimConfig& cfg) {
    json j;
    j["cores"] = cfg.cores;
    j["llc"] = {{"sets", cfg.llc.sets}, {"ways", cfg.llc.ways}, {"block", cfg.llc.block_size}};
    j["l1"] = {{"sets", cfg.l1.sets}, {"ways", cfg.l1.ways}};
    j["policy"] = std::string(to_string(cfg.policy));
    j["afc_bits"] = cfg.afc_bits;
    j["gcount_bits"] = cfg.srcp_params().gcount_bits;
    j["latency"] = {{"l1", cfg.latency.l1_hit_cycles},
                    {"llc", cfg.latency.llc_hit_cycles},
                    {"mem", cfg.latency.mem_cycles}};
    j["alpha"] = cfg.latency.interference_alpha;
    j["aging"] = std::string(to_string(cfg.aging));
    j["partitioned"] = cfg.partitioned;
    j["seed"] = cfg.seed;
    return j;
}

SimConfig config_from_json_value(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys))
            throw ConfigError("unknown config key '" + key + "'");
    SimConfig cfg;
    try {
        read_if(j, "cores", cfg.cores);
        if (j.contains("llc")) {
            const auto& l = j.at("llc");
            read_if(l, "sets", cfg.llc.sets);
            read_if(l, "ways", cfg.llc.ways);
            read_if(l, "block", cfg.llc.block_size);
        }
        if (j.contains("l1")) {
            read_if(j.at("l1"), "sets", cfg.l1.sets);
            read_if(j.at("l1"), "ways", cfg.l1.ways);
        }
        if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy").get<std::string>());
        read_if(j, "afc_bits", cfg.afc_bits);
        if (j.contains("gcount_bits") && !j.at("gcount_bits").is_null())
            cfg.gcount_bits = j.at("gcount_bits").get<std::uint32_t>();
        if (j.contains("latency")) {
            const auto& l = j.at("latency");
            read_if(l, "l1", cfg.latency.l1_hit_cycles);
            read_if(l, "llc", cfg.latency.llc_hit_cycles);
            read_if(l, "mem", cfg.latency.mem_cycles);
        }
        read_if(j, "alpha", cfg.latency.interference_alpha);
        if (j.contains("aging")) cfg.aging = parse_aging_scope(j.at("aging").get<std::string>());
        read_if(j, "partitioned", cfg.partitioned);
        read_if(j, "seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

SimConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json_value(j);
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const SimConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

}  // namespace srcp
