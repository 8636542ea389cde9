#pragma once

// Deterministic randomness: every random stream is seeded from the user seed
// mixed with a few small integers, so results do not depend on scheduling or
// on which other methods run.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace gaitrec {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t s = splitmix64(seed);
  for (auto p : parts) s = splitmix64(s ^ splitmix64(p));
  return s;
}

// FNV-1a, for mixing method ids into seeds.
inline std::uint64_t hash_id(std::string_view id) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

using Rng = std::mt19937_64;

// Uniform index in [0, n); modulo reduction keeps results identical across
// standard libraries, unlike std::uniform_int_distribution.
inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Fisher-Yates with uniform_index.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace gaitrec
