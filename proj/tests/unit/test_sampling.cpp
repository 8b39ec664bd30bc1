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
#include <map>
#include <sstream>

#include "../support/oracle.hpp"
#include "kzsim/sampling.hpp"
#include "kzsim/types.hpp"

using namespace kzsim;

TEST_SUITE("sampling") {
  TEST_CASE("GHZ samples are all-0 or all-1 in equal measure") {
    std::vector<Complex> amp(std::size_t{1} << 5, 0.0);
    amp.front() = amp.back() = 1.0 / std::sqrt(2.0);
    const DenseState ghz(5, amp);
    const auto samples = sample_bitstrings(ghz, 20000, 11);
    std::map<Bitstring, int> counts;
    for (const auto& s : samples) ++counts[s];
    REQUIRE(counts.size() == 2);
    const double frac = counts["00000"] / 20000.0;
    CHECK(frac == doctest::Approx(0.5).epsilon(0.03));
    CHECK(counts["11111"] + counts["00000"] == 20000);
  }

  TEST_CASE("basis state samples deterministically") {
    for (const auto& s : sample_bitstrings(DenseState::basis_state("00001111"), 100, 4)) CHECK(s == "00001111");
  }

  TEST_CASE("plus state gives half defects") {
    const auto samples = sample_bitstrings(DenseState::plus_state(8), 4096, 5);
    const DefectEstimate est = defect_density_from_bitstrings(samples);
    CHECK(std::abs(est.d - 0.5) < 4.0 * est.std_error);
    CHECK(est.shots == 4096);
  }

  TEST_CASE("density matrix and pure state sample the same distribution") {
    const DenseState psi = apply_circuit_statevector(DenseState::plus_state(3),
                                                     testing::make_perturbed(3, 4, 0.0, 0.0, 1));
    CHECK(sample_bitstrings(psi, 50, 9) == sample_bitstrings(DensityMatrix::from_state(psi), 50, 9));
    CHECK(sample_bitstrings(psi, 50, 9) == sample_bitstrings(psi, 50, 9));
    CHECK(sample_bitstrings(psi, 50, 9) != sample_bitstrings(psi, 50, 10));
  }

  TEST_CASE("estimator examples") {
    CHECK(defect_density_from_bitstrings(std::vector<Bitstring>{"00001111"}).d == doctest::Approx(1.0 / 7.0));
    CHECK(defect_density_from_bitstrings(std::vector<Bitstring>{"000000"}).d == 0.0);
    CHECK(defect_density_from_bitstrings(std::vector<Bitstring>{"010101"}).d == 1.0);
    const DefectEstimate two = defect_density_from_bitstrings(std::vector<Bitstring>{"000", "010"});
    CHECK(two.d == doctest::Approx(0.5));
    CHECK(two.std_error == doctest::Approx(std::sqrt(0.5 / 2.0)));
  }

  TEST_CASE("estimator rejects bad input") {
    CHECK_THROWS_AS((void)defect_density_from_bitstrings(std::vector<Bitstring>{}), DataError);
    CHECK_THROWS_AS((void)defect_density_from_bitstrings(std::vector<Bitstring>{"0101", "010"}), DataError);
    CHECK_THROWS_AS((void)defect_density_from_bitstrings(std::vector<Bitstring>{"0", "1"}), DataError);
    CHECK_THROWS_AS((void)defect_density_from_bitstrings(std::vector<Bitstring>{"01x1"}), DataError);
  }

  TEST_CASE("finite-shot estimator is unbiased") {
    const DenseState psi = apply_circuit_statevector(DenseState::plus_state(6),
                                                     testing::make_perturbed(6, 5, 0.1, 0.0, 2));
    const double exact = defect_density(psi);
    double sum = 0.0;
    double sum_sq = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
      const double d = defect_density_from_bitstrings(sample_bitstrings(psi, 256, static_cast<std::uint64_t>(s))).d;
      sum += d;
      sum_sq += d * d;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sum_sq / seeds - mean * mean) / (seeds - 1));
    CHECK(std::abs(mean - exact) < 4.0 * se);
  }

  TEST_CASE("bitstring file round trip") {
    const std::vector<Bitstring> samples{"0101", "1111", "0000"};
    std::stringstream io;
    write_bitstrings(io, samples);
    CHECK(io.str() == "0101\n1111\n0000\n");
    CHECK(read_bitstrings(io) == samples);
    std::stringstream bad("01\n0a\n");
    CHECK_THROWS_AS((void)read_bitstrings(bad), DataError);
  }

  TEST_CASE("domain-wall generator hits its wall probability") {
    const auto samples = sample_domain_wall_bitstrings(6, 0.3, 8192, 17);
    const DefectEstimate est = defect_density_from_bitstrings(samples);
    CHECK(std::abs(est.d - 0.3) < 4.0 * est.std_error);
    CHECK(samples == sample_domain_wall_bitstrings(6, 0.3, 8192, 17));
    CHECK_THROWS_AS((void)sample_domain_wall_bitstrings(6, 1.2, 1, 1), ConfigError);
  }
}
