#pragma once

#include "specht/spectra.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Command layer behind the `specht` binary. Kept as a library so tests can
// drive the exact code path the executable runs, streams included.

namespace specht::cli {

/// Number formatting used in all emitted JSON: %.12g, negative zero folded
/// to "0". Twelve significant digits round-trip every figure we report while
/// keeping the output stable across runs.
std::string format_double(double x);

/// Parse a job config (JSON). Graph paths inside the config resolve relative
/// to the config file's own directory, so a job directory can be moved as a
/// unit. Throws Error with kind Io or Parse.
HProductJob load_job(const std::string& file);

struct BenchTrial {
    double structured_ms;
    double oracle_ms;
};

/// Timing comparison on a seed-determined job: random pattern graph on l
/// vertices, random circulant factors of order n (circulants of equal order
/// commute, so the structured path always applies). Times are best-of-trials;
/// the agreement figure comes from the first trial and depends only on the
/// seed.
struct BenchResult {
    Index n;
    Index l;
    Index trials;
    std::uint64_t seed;
    double structured_ms;
    double oracle_ms;
    double ratio;  // oracle_ms / structured_ms
    double max_abs_diff;
    std::vector<BenchTrial> detail;
};

/// pre: n >= 2, l >= 1, trials >= 1, n*l <= 4096 (dense oracle memory cap).
BenchResult run_bench(Index n, Index l, Index trials, std::uint64_t seed);

/// Entry point; args excludes argv[0]. Writes reports to `out`, a single
/// "error:<kind>: <detail>" line to `err` on failure. Exit codes: 0 success,
/// 1 usage/config/file errors, 2 violated computation preconditions,
/// 3 structured and oracle spectra disagree beyond tolerance.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specht::cli
