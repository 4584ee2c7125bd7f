#pragma once

#include <cstdint>

namespace glscov {

// Every data-parallel kernel takes an execution policy. The serial path is the
// reference implementation; the OpenMP path must reproduce it bit-for-bit.
enum class Exec { serial, parallel };

// SplitMix64 finalizer. Used to derive independent per-task seeds from a single
// master seed so that results do not depend on scheduling or thread count.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed for task (a, b) under a master seed
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// Applies GLSCOV_THREADS (if set and positive) as the OpenMP thread cap.
void configure_threads_from_env();

int max_threads();

}  // namespace glscov
