// Copyright 2026 The kzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace kzsim {

/// SplitMix64 finalizer. Bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of two 64-bit words into a new key.
constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t value) noexcept {
  return mix64(key ^ mix64(value + 0x632be59bd9b4e019ULL));
}

/// Counter-based random stream.
///
/// The stream is stateless: draw k is a pure function of (key, k), so any
/// draw can be reached without generating its predecessors.
///
///   bits(k)    = mix64(mix64(key) ^ (k * 0xd1b54a32d192ed03))
///   uniform(k) = ((bits(k) >> 11) + 1) * 2^-53            in (0, 1]
///   normal(k)  = sqrt(-2 ln uniform(2k)) * cos(2 pi uniform(2k+1))
///
/// The normal transform is Box-Muller using the cosine branch only, so
/// each normal variate consumes the two uniforms at counters 2k and 2k+1.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  /// Derive an independent child stream.
  [[nodiscard]] constexpr CounterRng split(std::uint64_t tag) const noexcept {
    return CounterRng(hash_combine(key_, tag));
  }

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ (counter * 0xd1b54a32d192ed03ULL));
  }

  [[nodiscard]] double uniform(std::uint64_t counter) const noexcept;
  [[nodiscard]] double normal(std::uint64_t counter) const noexcept;

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace kzsim
