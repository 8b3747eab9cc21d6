#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sclink {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a base seed and a role tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view role, std::uint64_t index = 0) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the role
  for (char c : role) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (h ^ (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace sclink
