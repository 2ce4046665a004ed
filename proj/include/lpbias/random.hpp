#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lpbias {

using Rng = std::mt19937_64;

/// Derives an independent substream seed from a master seed and a stage name.
/// The mapping is fixed (FNV-1a over the name, then splitmix64 finalization) so
/// that manifests stay meaningful across builds.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);

/// Same as above with an additional integer salt (run index, pass number...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t salt);

/// Generator for a seed. The seed is expanded through splitmix64 into a
/// seed_seq, so nearby seeds (0, 1, 2, ...) give unrelated streams.
Rng make_rng(std::uint64_t seed);

}  // namespace lpbias
