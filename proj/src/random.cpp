#include "lpbias/random.hpp"

namespace lpbias {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  return splitmix64(splitmix64(master) ^ fnv1a(stage));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t salt) {
  return splitmix64(derive_seed(master, stage) ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t seed) {
  std::uint32_t words[8];
  std::uint64_t x = seed;
  for (int i = 0; i < 8; i += 2) {
    x = splitmix64(x);
    words[i] = static_cast<std::uint32_t>(x);
    words[i + 1] = static_cast<std::uint32_t>(x >> 32);
  }
  std::seed_seq seq(std::begin(words), std::end(words));
  return Rng(seq);
}

}  // namespace lpbias
