#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

namespace punch {

// ---------------------------------------------------------------------------
// Error taxonomy. CLI exit codes: 2 usage, 3 data, 4 numeric divergence.
// ---------------------------------------------------------------------------

/// Bad arguments or malformed configuration.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Arguments that are well-formed but outside the supported regime.
struct UnsupportedInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input files that exist but cannot be parsed or fail validation.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical blow-up in the forward solver.
struct SolverDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// NaN loss during optimization; message names the epoch and term.
struct TrainingDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic RNG utilities
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a master seed and a label,
/// so parallel execution order never affects per-case results.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
    std::uint64_t h = mix64(master);
    for (unsigned char c : label) h = mix64(h ^ c);
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    return mix64(mix64(master) ^ mix64(salt));
}

// ---------------------------------------------------------------------------
// Number formatting: 17 significant digits round-trip exactly in binary64.
// ---------------------------------------------------------------------------

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// FNV-1a over a byte string; used for config hashes in run records.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace punch
