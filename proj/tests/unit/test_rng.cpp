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


#include <doctest.h>

#include <cmath>
#include <set>

#include "kzsim/rng.hpp"

using kzsim::CounterRng;

TEST_SUITE("rng") {
  TEST_CASE("bits are a pure function of key and counter") {
    const CounterRng a(42);
    const CounterRng b(42);
    for (std::uint64_t k = 0; k < 100; ++k) CHECK(a.bits(k) == b.bits(k));
    CHECK(CounterRng(42).bits(0) != CounterRng(43).bits(0));
  }

  TEST_CASE("split streams differ from each other and from the parent") {
    const CounterRng root(7);
    std::set<std::uint64_t> firsts{root.bits(0)};
    for (std::uint64_t tag = 0; tag < 64; ++tag) firsts.insert(root.split(tag).bits(0));
    CHECK(firsts.size() == 65);
  }

  TEST_CASE("uniform lies in (0, 1]") {
    const CounterRng rng(1);
    double lo = 1.0;
    double hi = 0.0;
    for (std::uint64_t k = 0; k < 100000; ++k) {
      const double u = rng.uniform(k);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi <= 1.0);
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
  }

  TEST_CASE("normal variates have unit variance and zero mean") {
    const CounterRng rng(2024);
    const std::size_t n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = rng.normal(k);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sd - 1.0) < 0.01);
  }

  TEST_CASE("mix64 is usable at compile time") {
    static_assert(kzsim::mix64(0) != kzsim::mix64(1));
    static_assert(kzsim::hash_combine(1, 2) != kzsim::hash_combine(2, 1));
    CHECK(true);
  }
}
