#include "srcp/trace.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "srcp/error.hpp"
#include "srcp/rng.hpp"

namespace srcp {
namespace {

constexpr std::uint64_t kRegionShift = 28;

template <typename T>
bool parse_uint(std::string_view s, T& out, int base = 10) {
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out, base);
    return ec == std::errc{} && ptr == end;
}

bool is_lower_hex(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

// Splits on single spaces; an empty field means doubled or edge spaces.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(' ', pos);
        out.push_back(line.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

// Returns true if the comment line carried a header.
bool parse_header_comment(std::string_view body, std::size_t lineno, TraceHeader& header) {
    bool saw_cores = false;
    bool saw_block = false;
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && body[pos] == ' ') ++pos;
        const auto end = std::min(body.find(' ', pos), body.size());
        const auto token = body.substr(pos, end - pos);
        pos = end;
        if (token.starts_with("cores=")) {
            if (!parse_uint(token.substr(6), header.cores) || header.cores == 0)
                throw ParseError(lineno, "bad cores value in header");
            saw_cores = true;
        } else if (token.starts_with("block=")) {
            if (!parse_uint(token.substr(6), header.block_size) || header.block_size == 0)
                throw ParseError(lineno, "bad block value in header");
            saw_block = true;
        }
    }
    if (saw_cores != saw_block) throw ParseError(lineno, "header needs both cores= and block=");
    return saw_cores;
}

void hash_bytes(std::uint64_t& h, std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        h ^= (value >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
}

// Inverse-CDF sampler over ranks [0, n) with weight 1/(rank+1)^s.
class ZipfTable {
public:
    ZipfTable(std::uint64_t n, double s) : cdf_(n) {
        double total = 0.0;
        for (std::uint64_t r = 0; r < n; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r + 1), s);
            cdf_[r] = total;
        }
        for (auto& c : cdf_) c /= total;
    }

    std::uint64_t sample(Rng& rng) const {
        const double u = rng.next_unit();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto idx = static_cast<std::uint64_t>(it - cdf_.begin());
        return std::min<std::uint64_t>(idx, cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

}  // namespace

Trace parse_trace(std::istream& in) {
    Trace trace;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (sv.starts_with('#')) {
            TraceHeader h;
            if (parse_header_comment(sv.substr(1), lineno, h)) {
                if (have_header) throw ParseError(lineno, "duplicate header");
                trace.header = h;
                have_header = true;
            }
            continue;
        }
        if (!have_header) throw ParseError(lineno, "data line before '# cores=<N> block=<bytes>' header");

        const auto fields = split_fields(sv);
        if (fields.size() != 4) throw ParseError(lineno, "expected 4 space-separated fields");
        MemRef ref;
        if (!parse_uint(fields[0], ref.seq)) throw ParseError(lineno, "bad sequence number");
        if (!parse_uint(fields[1], ref.core)) throw ParseError(lineno, "bad core id");
        if (fields[2] == "R") {
            ref.op = Op::Read;
        } else if (fields[2] == "W") {
            ref.op = Op::Write;
        } else {
            throw ParseError(lineno, "op must be R or W");
        }
        const auto addr = fields[3];
        if (!addr.starts_with("0x") || !is_lower_hex(addr.substr(2)) || !parse_uint(addr.substr(2), ref.addr, 16))
            throw ParseError(lineno, "address must be lowercase hex with 0x prefix");

        if (ref.core >= trace.header.cores)
            throw ValidationError("line " + std::to_string(lineno) + ": core " + std::to_string(ref.core) +
                                  " out of range for cores=" + std::to_string(trace.header.cores));
        if (!trace.refs.empty() && ref.seq <= trace.refs.back().seq)
            throw ValidationError("line " + std::to_string(lineno) + ": sequence number " +
                                  std::to_string(ref.seq) + " does not increase");
        trace.refs.push_back(ref);
    }
    if (in.bad()) throw Error("read failure");
    if (!have_header) throw ParseError(lineno, "missing '# cores=<N> block=<bytes>' header");
    return trace;
}

Trace parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open trace file " + path);
    return parse_trace(in);
}

void emit_trace(const TraceHeader& header, const std::vector<MemRef>& refs, std::ostream& out) {
    out << "# cores=" << header.cores << " block=" << header.block_size << '\n';
    char buf[64];
    for (const auto& r : refs) {
        const int n = std::snprintf(buf, sizeof buf, "%llu %u %c 0x%llx\n", static_cast<unsigned long long>(r.seq),
                                    r.core, r.op == Op::Write ? 'W' : 'R', static_cast<unsigned long long>(r.addr));
        out.write(buf, n);
    }
    if (!out) throw Error("trace write failure");
}

void emit_trace_file(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    emit_trace(trace.header, trace.refs, out);
    out.flush();
    if (!out) throw Error("write failure on " + path);
}

void validate_trace(const Trace& trace) {
    for (std::size_t i = 0; i < trace.refs.size(); ++i) {
        const auto& r = trace.refs[i];
        if (r.core >= trace.header.cores)
            throw ValidationError("seq " + std::to_string(r.seq) + ": core " + std::to_string(r.core) +
                                  " out of range for cores=" + std::to_string(trace.header.cores));
        if (i > 0 && r.seq <= trace.refs[i - 1].seq)
            throw ValidationError("seq " + std::to_string(r.seq) + " does not increase");
    }
}

std::uint64_t trace_hash(const Trace& trace) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_bytes(h, trace.header.cores, 4);
    hash_bytes(h, trace.header.block_size, 4);
    for (const auto& r : trace.refs) {
        hash_bytes(h, r.seq, 8);
        hash_bytes(h, r.core, 4);
        hash_bytes(h, r.op == Op::Write ? 1 : 0, 1);
        hash_bytes(h, r.addr, 8);
    }
    return h;
}

std::string_view to_string(Pattern p) {
    switch (p) {
        case Pattern::PrivateStream: return "private-stream";
        case Pattern::SharedZipf: return "shared-zipf";
        case Pattern::PingPong: return "ping-pong";
        case Pattern::Mixed: return "mixed";
    }
    return "?";
}

Pattern parse_pattern(std::string_view name) {
    for (auto p : {Pattern::PrivateStream, Pattern::SharedZipf, Pattern::PingPong, Pattern::Mixed})
        if (to_string(p) == name) return p;
    throw ConfigError("unknown pattern '" + std::string(name) + "'");
}

void validate_workload(const WorkloadSpec& spec) {
    if (spec.cores < 1) throw ConfigError("cores must be >= 1");
    if (spec.refs == 0) throw ConfigError("refs must be > 0");
    if (!(spec.shared_fraction >= 0.0 && spec.shared_fraction <= 1.0))
        throw ConfigError("shared_fraction must lie in [0,1]");
    if (!(spec.write_fraction >= 0.0 && spec.write_fraction <= 1.0))
        throw ConfigError("write_fraction must lie in [0,1]");
    if (!(spec.zipf_s >= 0.0) || !std::isfinite(spec.zipf_s)) throw ConfigError("zipf_s must be >= 0");
    if (spec.footprint_blocks == 0 || spec.footprint_blocks > (1ULL << kRegionShift))
        throw ConfigError("footprint_blocks must lie in [1, 2^28]");
    if (spec.block_size == 0 || (spec.block_size & (spec.block_size - 1)) != 0)
        throw ConfigError("block size must be a power of two");
    if (spec.pattern == Pattern::PingPong && spec.cores < 2) throw ConfigError("ping-pong needs at least 2 cores");
    // Highest region id must still fit in a 64-bit byte address.
    const std::uint64_t regions = 1ULL + spec.cores + spec.cores / 2;
    const int block_bits = std::countr_zero(spec.block_size);
    if (std::bit_width(regions) + kRegionShift + block_bits > 64) throw ConfigError("too many cores for address layout");
}

std::vector<MemRef> gen_synthetic(const WorkloadSpec& spec) {
    validate_workload(spec);
    Rng rng(spec.seed);
    const ZipfTable zipf(spec.footprint_blocks, spec.zipf_s);
    const std::uint64_t n = spec.footprint_blocks;

    auto addr_of = [&](std::uint64_t region, std::uint64_t block) {
        return ((region << kRegionShift) + block) * spec.block_size;
    };
    auto private_region = [](std::uint32_t core) { return 1ULL + core; };
    auto draw_op = [&] { return rng.next_unit() < spec.write_fraction ? Op::Write : Op::Read; };

    std::vector<std::uint64_t> stream_pos(spec.cores, 0);
    std::vector<std::uint64_t> step(spec.cores, 0);

    auto next_ref = [&](std::uint32_t core) -> std::pair<Op, std::uint64_t> {
        switch (spec.pattern) {
            case Pattern::PrivateStream: {
                const auto blk = stream_pos[core]++ % n;
                return {draw_op(), addr_of(private_region(core), blk)};
            }
            case Pattern::SharedZipf: {
                const bool shared = rng.next_unit() < spec.shared_fraction;
                const auto blk = zipf.sample(rng);
                return {draw_op(), addr_of(shared ? 0 : private_region(core), blk)};
            }
            case Pattern::PingPong: {
                const std::uint32_t pair = core / 2;
                if (pair * 2 + 1 >= spec.cores) {
                    // Unpaired last core streams privately.
                    const auto blk = stream_pos[core]++ % n;
                    return {draw_op(), addr_of(private_region(core), blk)};
                }
                const std::uint64_t t = step[core]++;
                const std::uint32_t role = core % 2;
                const Op op = (t + role) % 2 == 0 ? Op::Write : Op::Read;
                return {op, addr_of(1ULL + spec.cores + pair, (t / 2) % n)};
            }
            case Pattern::Mixed: {
                const double u = rng.next_unit();
                if (u < spec.shared_fraction) return {draw_op(), addr_of(0, zipf.sample(rng))};
                if (rng.next_below(2) == 0) {
                    const auto blk = stream_pos[core]++ % n;
                    return {draw_op(), addr_of(private_region(core), blk)};
                }
                return {draw_op(), addr_of(private_region(core), zipf.sample(rng))};
            }
        }
        throw ConfigError("unknown pattern");
    };

    std::vector<MemRef> refs;
    refs.reserve(spec.refs);
    std::uint64_t seq = 0;
    while (refs.size() < spec.refs) {
        for (std::uint32_t core = 0; core < spec.cores && refs.size() < spec.refs; ++core) {
            const auto burst = 1 + rng.next_below(3);
            for (std::uint64_t b = 0; b < burst && refs.size() < spec.refs; ++b) {
                const auto [op, addr] = next_ref(core);
                refs.push_back(MemRef{seq++, core, op, addr});
            }
        }
    }
    return refs;
}

double sharing_ratio(const std::vector<MemRef>& refs, std::uint32_t block_size) {
    if (refs.empty()) return 0.0;
    // Per block: first core seen, or UINT32_MAX once a second core shows up.
    std::unordered_map<std::uint64_t, std::uint32_t> owner;
    for (const auto& r : refs) {
        auto [it, inserted] = owner.try_emplace(r.addr / block_size, r.core);
        if (!inserted && it->second != r.core) it->second = UINT32_MAX;
    }
    std::uint64_t shared = 0;
    for (const auto& r : refs)
        if (owner[r.addr / block_size] == UINT32_MAX) ++shared;
    return static_cast<double>(shared) / static_cast<double>(refs.size());
}

}  // namespace srcp
