#include "srcp/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "srcp/config_json.hpp"
#include "srcp/error.hpp"

namespace srcp {

using nlohmann::json;

std::string_view to_string(Level l) {
    switch (l) {
        case Level::L1: return "l1";
        case Level::LLC: return "llc";
        case Level::Memory: return "memory";
    }
    return "?";
}

CoreStats& CoreStats::operator+=(const CoreStats& o) {
    refs += o.refs;
    l1_hits += o.l1_hits;
    l1_misses += o.l1_misses;
    llc_hits += o.llc_hits;
    llc_misses += o.llc_misses;
    fill_l1 += o.fill_l1;
    bypass_l1 += o.bypass_l1;
    write_llc_direct += o.write_llc_direct;
    l1_invalidations += o.l1_invalidations;
    back_invalidations += o.back_invalidations;
    llc_evictions += o.llc_evictions;
    writebacks += o.writebacks;
    l1_writebacks += o.l1_writebacks;
    estimated_cycles += o.estimated_cycles;
    return *this;
}

std::uint64_t estimated_cycles(const CoreStats& s, const LatencyModel& lm) {
    return s.l1_hits * lm.l1_hit_cycles + s.llc_hits * lm.llc_hit_cycles + s.llc_misses * lm.mem_cycles;
}

std::uint64_t experiment_hash(std::uint64_t trace_hash, const SimConfig& cfg) {
    auto j = config_json(cfg);
    j.erase("policy");
    j.erase("seed");
    const std::string canon = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(trace_hash >> (8 * i)));
    for (char c : canon) mix(static_cast<unsigned char>(c));
    return h;
}

namespace {

void check_core(const CoreStats& c, const std::string& who) {
    auto fail = [&](const char* what) { throw InvariantError(who + ": " + what); };
    if (c.l1_hits + c.l1_misses != c.refs) fail("l1 hits + misses != refs");
    if (c.llc_hits + c.llc_misses != c.l1_misses) fail("llc hits + misses != l1 misses");
    if (c.l1_hits + c.llc_hits + c.llc_misses != c.refs) fail("l1 hits + llc hits + memory fetches != refs");
    if (c.fill_l1 + c.bypass_l1 + c.write_llc_direct != c.l1_misses) fail("fill actions != llc accesses");
    if (c.llc_evictions > c.llc_misses) fail("more evictions than misses");
    if (c.writebacks > c.llc_evictions) fail("more writebacks than evictions");
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(const json& j) {
    const auto s = j.get<std::string>();
    if (s.size() < 3 || s.rfind("0x", 0) != 0) throw ValidationError("bad hash string '" + s + "'");
    return std::stoull(s.substr(2), nullptr, 16);
}

json rate_or_null(const CoreStats& s, Level level) {
    const auto acc = level == Level::L1 ? s.l1_hits + s.l1_misses : s.llc_hits + s.llc_misses;
    return acc == 0 ? json(nullptr) : json(hit_rate(s, level));
}

json core_json(const CoreStats& c) {
    return json{{"refs", c.refs},
                {"l1_hits", c.l1_hits},
                {"l1_misses", c.l1_misses},
                {"llc_hits", c.llc_hits},
                {"llc_misses", c.llc_misses},
                {"fill_l1", c.fill_l1},
                {"bypass_l1", c.bypass_l1},
                {"write_llc_direct", c.write_llc_direct},
                {"l1_invalidations", c.l1_invalidations},
                {"back_invalidations", c.back_invalidations},
                {"llc_evictions", c.llc_evictions},
                {"writebacks", c.writebacks},
                {"l1_writebacks", c.l1_writebacks},
                {"estimated_cycles", c.estimated_cycles},
                {"l1_hit_rate", rate_or_null(c, Level::L1)},
                {"llc_hit_rate", rate_or_null(c, Level::LLC)}};
}

CoreStats core_from_json(const json& j) {
    CoreStats c;
    c.refs = j.at("refs").get<std::uint64_t>();
    c.l1_hits = j.at("l1_hits").get<std::uint64_t>();
    c.l1_misses = j.at("l1_misses").get<std::uint64_t>();
    c.llc_hits = j.at("llc_hits").get<std::uint64_t>();
    c.llc_misses = j.at("llc_misses").get<std::uint64_t>();
    c.fill_l1 = j.at("fill_l1").get<std::uint64_t>();
    c.bypass_l1 = j.at("bypass_l1").get<std::uint64_t>();
    c.write_llc_direct = j.at("write_llc_direct").get<std::uint64_t>();
    c.l1_invalidations = j.at("l1_invalidations").get<std::uint64_t>();
    c.back_invalidations = j.at("back_invalidations").get<std::uint64_t>();
    c.llc_evictions = j.at("llc_evictions").get<std::uint64_t>();
    c.writebacks = j.at("writebacks").get<std::uint64_t>();
    c.l1_writebacks = j.at("l1_writebacks").get<std::uint64_t>();
    c.estimated_cycles = j.at("estimated_cycles").get<std::uint64_t>();
    return c;
}

std::optional<double> rate_opt(const CoreStats& s) {
    if (s.llc_hits + s.llc_misses == 0) return std::nullopt;
    return hit_rate(s, Level::LLC);
}

ComparisonRow make_row(std::string scope, const CoreStats& base, const CoreStats& cand) {
    ComparisonRow row;
    row.scope = std::move(scope);
    row.base_llc_hit_rate = rate_opt(base);
    row.cand_llc_hit_rate = rate_opt(cand);
    if (row.base_llc_hit_rate && row.cand_llc_hit_rate && *row.base_llc_hit_rate > 0.0)
        row.llc_hit_rate_rel_delta = (*row.cand_llc_hit_rate - *row.base_llc_hit_rate) / *row.base_llc_hit_rate;
    row.base_cycles = base.estimated_cycles;
    row.cand_cycles = cand.estimated_cycles;
    if (base.estimated_cycles > 0) {
        const auto b = static_cast<double>(base.estimated_cycles);
        const auto c = static_cast<double>(cand.estimated_cycles);
        row.cycles_rel_delta = (c - b) / b;
        row.cycles_ratio = c / b;
    }
    return row;
}

std::string fmt_opt(const std::optional<double>& v, int precision = 6) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
    return buf;
}

std::string fmt_pct(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.3f%%", *v * 100.0);
    return buf;
}

}  // namespace

void check_conservation(const SimStats& s) {
    CoreStats sum;
    for (std::size_t i = 0; i < s.per_core.size(); ++i) {
        check_core(s.per_core[i], "core " + std::to_string(i));
        sum += s.per_core[i];
    }
    check_core(s.total, "total");
    if (!(sum == s.total)) throw InvariantError("total does not equal the sum of per-core stats");
    if (s.total.estimated_cycles != estimated_cycles(s.total, s.config.latency))
        throw InvariantError("estimated cycles do not match the latency model");
}

double hit_rate(const CoreStats& s, Level level) {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    switch (level) {
        case Level::L1:
            hits = s.l1_hits;
            misses = s.l1_misses;
            break;
        case Level::LLC:
            hits = s.llc_hits;
            misses = s.llc_misses;
            break;
        case Level::Memory: throw ValidationError("memory has no hit rate");
    }
    if (hits + misses == 0) throw ValidationError("hit rate undefined: no accesses at " + std::string(to_string(level)));
    return static_cast<double>(hits) / static_cast<double>(hits + misses);
}

long double wcet_shared(std::uint64_t hits, std::uint64_t misses, std::uint64_t l_hit, std::uint64_t l_miss,
                        std::uint32_t cores, double alpha) {
    if (cores == 0) throw ConfigError("WCET needs at least one core");
    if (!(alpha >= 0.0)) throw ConfigError("interference alpha must be >= 0");
    const long double inflation = 1.0L + static_cast<long double>(alpha) * (cores - 1);
    return wcet_srcp(hits, 0, l_hit, l_miss) +
           static_cast<long double>(misses) * static_cast<long double>(l_miss) * inflation;
}

long double wcet_shared(std::uint64_t hits, std::uint64_t misses, const LatencyModel& lm, std::uint32_t cores) {
    return wcet_shared(hits, misses, lm.llc_hit_cycles, lm.mem_cycles, cores, lm.interference_alpha);
}

long double wcet_srcp(std::uint64_t hits, std::uint64_t misses, std::uint64_t l_hit, std::uint64_t l_miss) {
    return static_cast<long double>(hits) * static_cast<long double>(l_hit) +
           static_cast<long double>(misses) * static_cast<long double>(l_miss);
}

long double wcet_srcp(std::uint64_t hits, std::uint64_t misses, const LatencyModel& lm) {
    return wcet_srcp(hits, misses, lm.llc_hit_cycles, lm.mem_cycles);
}

Report compare_runs(const SimStats& base, const SimStats& cand) {
    if (base.experiment_hash != cand.experiment_hash || base.trace_hash != cand.trace_hash)
        throw ComparisonError("runs are not comparable: trace or configuration differ (experiment hash " +
                              hex64(base.experiment_hash) + " vs " + hex64(cand.experiment_hash) + ")");
    if (base.per_core.size() != cand.per_core.size()) throw ComparisonError("core counts differ");
    Report r{base.policy, cand.policy, {}};
    r.rows.push_back(make_row("total", base.total, cand.total));
    for (std::size_t i = 0; i < base.per_core.size(); ++i)
        r.rows.push_back(make_row("core" + std::to_string(i), base.per_core[i], cand.per_core[i]));
    return r;
}

std::string stats_to_json(const SimStats& s) {
    json j;
    j["schema_version"] = kStatsSchemaVersion;
    j["policy"] = s.policy;
    j["performance_proxy"] = "estimated_cycles: access cycles from the latency model, not IPC";
    j["trace_hash"] = hex64(s.trace_hash);
    j["experiment_hash"] = hex64(s.experiment_hash);
    j["config"] = config_json(s.config);
    j["per_core"] = json::array();
    for (const auto& c : s.per_core) j["per_core"].push_back(core_json(c));
    j["total"] = core_json(s.total);
    const auto& t = s.total;
    j["wcet"] = {{"cores", s.config.cores},
                 {"llc_hits", t.llc_hits},
                 {"llc_misses", t.llc_misses},
                 {"shared_bound", static_cast<double>(wcet_shared(t.llc_hits, t.llc_misses, s.config.latency, s.config.cores))},
                 {"partitioned_bound", static_cast<double>(wcet_srcp(t.llc_hits, t.llc_misses, s.config.latency))}};
    return j.dump(2) + "\n";
}

SimStats stats_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("stats document is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kStatsSchemaVersion)
            throw ValidationError("unsupported stats schema_version " + j.at("schema_version").dump());
        SimStats s;
        s.policy = j.at("policy").get<std::string>();
        s.config = config_from_json_value(j.at("config"));
        s.trace_hash = parse_hex64(j.at("trace_hash"));
        s.experiment_hash = parse_hex64(j.at("experiment_hash"));
        for (const auto& c : j.at("per_core")) s.per_core.push_back(core_from_json(c));
        s.total = core_from_json(j.at("total"));
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed stats document: ") + e.what());
    }
}

SimStats load_stats(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open stats file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return stats_from_json(ss.str());
}

std::string report_csv_header() {
    return "base_policy,policy,scope,base_llc_hit_rate,llc_hit_rate,llc_hit_rate_rel_delta,"
           "base_estimated_cycles,estimated_cycles,cycles_rel_delta,cycles_ratio\n";
}

std::string report_to_csv_rows(const Report& r) {
    std::string out;
    for (const auto& row : r.rows) {
        out += r.base_policy + "," + r.cand_policy + "," + row.scope + "," + fmt_opt(row.base_llc_hit_rate) + "," +
               fmt_opt(row.cand_llc_hit_rate) + "," + fmt_opt(row.llc_hit_rate_rel_delta) + "," +
               std::to_string(row.base_cycles) + "," + std::to_string(row.cand_cycles) + "," +
               fmt_opt(row.cycles_rel_delta) + "," + fmt_opt(row.cycles_ratio) + "\n";
    }
    return out;
}

std::string report_to_text(const Report& r) {
    std::string out = r.cand_policy + " vs " + r.base_policy + " (estimated cycles are a latency-model proxy, not IPC)\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-8s %12s %12s %14s %14s\n", "scope", "llc hit", "base hit", "hit-rate rel",
                  "cycles rel");
    out += buf;
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "  %-8s %12s %12s %14s %14s\n", row.scope.c_str(),
                      fmt_opt(row.cand_llc_hit_rate, 4).c_str(), fmt_opt(row.base_llc_hit_rate, 4).c_str(),
                      fmt_pct(row.llc_hit_rate_rel_delta).c_str(), fmt_pct(row.cycles_rel_delta).c_str());
        out += buf;
    }
    return out;
}

}  // namespace srcp
