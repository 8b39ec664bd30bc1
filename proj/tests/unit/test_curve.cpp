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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kzsim/curve.hpp"
#include "kzsim/types.hpp"

using namespace kzsim;

namespace {

DefectCurve sample_curve() {
  DefectCurve c;
  c.points = {{1, 0.5, 0.01, 10}, {4, 0.1 + 1e-17, 0.0, 10}, {9, 1.0 / 3.0, 2.5e-3, 10}};
  c.metadata = {6, 0.01, 0.02, "statevector", 99};
  return c;
}

}  // namespace

TEST_SUITE("curve") {
  TEST_CASE("csv round trip is exact") {
    const DefectCurve c = sample_curve();
    std::stringstream io;
    write_curve_csv(io, c);
    CHECK(io.str().rfind("N,d,err,n_realizations\n", 0) == 0);
    const auto back = read_curve_csv(io);
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(back[k].n_steps == c.points[k].n_steps);
      CHECK(back[k].d == c.points[k].d);
      CHECK(back[k].err == c.points[k].err);
    }
  }

  TEST_CASE("save and load with metadata sidecar") {
    const auto dir = std::filesystem::temp_directory_path() / "kzsim_curve_test";
    std::filesystem::create_directories(dir);
    save_curve(dir / "c", sample_curve());
    CHECK(std::filesystem::exists(dir / "c.csv"));
    CHECK(std::filesystem::exists(dir / "c.json"));
    const DefectCurve back = load_curve(dir / "c");
    CHECK(back.metadata.n_qubits == 6);
    CHECK(back.metadata.engine == "statevector");
    CHECK(back.metadata.seed == 99);
    CHECK(back.points.size() == 3);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("invariants are enforced") {
    DefectCurve c = sample_curve();
    c.points[1].n_steps = 1;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = sample_curve();
    c.points[0].d = 1.5;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = sample_curve();
    c.points[0].err = -1.0;
    CHECK_THROWS_AS(c.validate(), DataError);
  }

  TEST_CASE("malformed csv") {
    std::stringstream bad_header("n,d\n");
    CHECK_THROWS_AS((void)read_curve_csv(bad_header), DataError);
    std::stringstream bad_row("N,d,err,n_realizations\n1,0.5,x,1\n");
    CHECK_THROWS_AS((void)read_curve_csv(bad_row), DataError);
    std::stringstream short_row("N,d,err,n_realizations\n1,0.5\n");
    CHECK_THROWS_AS((void)read_curve_csv(short_row), DataError);
  }

  TEST_CASE("lookup and columns") {
    const DefectCurve c = sample_curve();
    REQUIRE(c.find(4) != nullptr);
    CHECK(c.find(5) == nullptr);
    CHECK(c.steps() == std::vector<double>{1, 4, 9});
  }

  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.0, 123456789.125}) {
      CHECK(std::stod(format_double(v)) == v);
    }
  }
}
