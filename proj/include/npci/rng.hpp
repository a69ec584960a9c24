#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace npci {

using RngStream = std::mt19937_64;

// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the child stream reached from `root` along `path`. Distinct paths
// give unrelated seeds, so work items can draw from their own streams in any
// order.
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline RngStream make_stream(std::uint64_t root,
                             std::initializer_list<std::uint64_t> path) {
  return RngStream(derive_seed(root, path));
}

}  // namespace npci
