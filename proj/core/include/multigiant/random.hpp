#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace multigiant {

using Rng = std::mt19937_64;

/// Derive an independent 64-bit seed for the stream named `label` under
/// `master`. Pure function of its inputs, so streams can be created in any
/// order (or on any thread) and still reproduce.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

inline Rng child_stream(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}

} // namespace multigiant
