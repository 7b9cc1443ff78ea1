#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ragkit {

// FNV-1a, fixed parameters. Used wherever a stable, platform-independent
// hash is needed (scripted-provider keys, hash embedder buckets, run-dir
// names). std::hash is deliberately avoided: it may differ across stdlibs.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

}  // namespace ragkit
