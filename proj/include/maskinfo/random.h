/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MASKINFO_RANDOM_H_
#define MASKINFO_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace maskinfo {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for an independent substream keyed by (seed, k0, k1, ...). Work units
// draw from their own substream so results never depend on scheduling.
inline std::uint64_t SubstreamSeed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t k : keys) h = SplitMix64(h ^ SplitMix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng MakeRng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(SubstreamSeed(seed, keys));
}

}  // namespace maskinfo

#endif  // MASKINFO_RANDOM_H_
