#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace srcp {

enum class Op : std::uint8_t { Read, Write };

// One memory access event.
struct MemRef {
    std::uint64_t seq = 0;
    std::uint32_t core = 0;
    Op op = Op::Read;
    std::uint64_t addr = 0;

    friend bool operator==(const MemRef&, const MemRef&) = default;
};

struct TraceHeader {
    std::uint32_t cores = 1;
    std::uint32_t block_size = 64;

    friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
    TraceHeader header;
    std::vector<MemRef> refs;

    friend bool operator==(const Trace&, const Trace&) = default;
};

// Text trace format:
//
//   # cores=<N> block=<bytes>
//   <seq> <core> <R|W> <0xhexaddr>
//
// Lines starting with '#' are comments; exactly one of them must carry the
// cores=/block= header, and it must precede the first data line. Fields are
// separated by single spaces, addresses are lowercase hex with a 0x prefix.
//
// Throws ParseError for malformed lines and ValidationError when a record
// breaks a trace invariant (core out of range, non-increasing seq).
Trace parse_trace(std::istream& in);
Trace parse_trace_file(const std::string& path);

void emit_trace(const TraceHeader& header, const std::vector<MemRef>& refs, std::ostream& out);
void emit_trace_file(const Trace& trace, const std::string& path);

// Checks the MemRef invariants against a header. Throws ValidationError.
void validate_trace(const Trace& trace);

// FNV-1a over the canonical binary form of the trace (header then records).
std::uint64_t trace_hash(const Trace& trace);

enum class Pattern { PrivateStream, SharedZipf, PingPong, Mixed };

std::string_view to_string(Pattern p);
// Accepts the CLI spellings: private-stream, shared-zipf, ping-pong, mixed.
Pattern parse_pattern(std::string_view name);

struct WorkloadSpec {
    Pattern pattern = Pattern::SharedZipf;
    std::uint32_t cores = 4;
    std::uint64_t refs = 100000;
    double shared_fraction = 0.5;
    // Blocks per region (the shared region, each private region, and each
    // ping-pong pair region all have this many blocks).
    std::uint64_t footprint_blocks = 4096;
    double zipf_s = 1.0;
    double write_fraction = 0.2;
    std::uint64_t seed = 1;
    std::uint32_t block_size = 64;
};

// Throws ConfigError when the spec is inconsistent.
void validate_workload(const WorkloadSpec& spec);

// Seeded synthetic multithreaded workload. Cores are interleaved round-robin;
// each turn a core issues a burst of 1..3 references (the jitter). Address
// layout, in blocks: region 0 is shared, region 1+c is private to core c,
// region 1+cores+p is the common region of ping-pong pair p. Regions are
// 2^28 blocks apart.
std::vector<MemRef> gen_synthetic(const WorkloadSpec& spec);

// Fraction of references whose block is touched by two or more cores over
// the whole trace.
double sharing_ratio(const std::vector<MemRef>& refs, std::uint32_t block_size);

}  // namespace srcp
