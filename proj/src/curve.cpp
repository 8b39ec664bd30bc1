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


#include "kzsim/curve.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kzsim/types.hpp"

namespace kzsim {

void DefectCurve::validate() const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    const CurvePoint& p = points[k];
    if (k > 0 && p.n_steps <= points[k - 1].n_steps) {
      throw DataError("curve: N must be strictly increasing");
    }
    if (!(p.d >= 0.0 && p.d <= 1.0)) throw DataError("curve: d outside [0, 1]");
    if (!(p.err >= 0.0)) throw DataError("curve: negative or NaN error");
    if (p.n_realizations < 0) throw DataError("curve: negative realization count");
  }
}

const CurvePoint* DefectCurve::find(std::int64_t n_steps) const {
  for (const CurvePoint& p : points) {
    if (p.n_steps == n_steps) return &p;
  }
  return nullptr;
}

std::vector<double> DefectCurve::steps() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const CurvePoint& p : points) out.push_back(static_cast<double>(p.n_steps));
  return out;
}

std::vector<double> DefectCurve::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const CurvePoint& p : points) out.push_back(p.d);
  return out;
}

std::vector<double> DefectCurve::errors() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const CurvePoint& p : points) out.push_back(p.err);
  return out;
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const DefectCurve& curve) {
  out << "N,d,err,n_realizations\n";
  for (const CurvePoint& p : curve.points) {
    out << p.n_steps << ',' << format_double(p.d) << ',' << format_double(p.err) << ',' << p.n_realizations
        << '\n';
  }
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw DataError("curve csv line " + std::to_string(line) + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<CurvePoint> read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("curve csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "N,d,err,n_realizations") throw DataError("curve csv: unexpected header '" + line + "'");
  std::vector<CurvePoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw DataError("curve csv line " + std::to_string(line_no) + ": expected 4 fields");
    CurvePoint p;
    p.n_steps = parse_field<std::int64_t>(fields[0], line_no);
    p.d = parse_field<double>(fields[1], line_no);
    p.err = parse_field<double>(fields[2], line_no);
    p.n_realizations = parse_field<std::int64_t>(fields[3], line_no);
    points.push_back(p);
  }
  return points;
}

void to_json(nlohmann::json& j, const CurveMetadata& m) {
  j = nlohmann::json{{"L", m.n_qubits},
                     {"sigma_noise", m.sigma_noise},
                     {"sigma_disorder", m.sigma_disorder},
                     {"engine", m.engine},
                     {"seed", m.seed}};
}

void from_json(const nlohmann::json& j, CurveMetadata& m) {
  j.at("L").get_to(m.n_qubits);
  j.at("sigma_noise").get_to(m.sigma_noise);
  j.at("sigma_disorder").get_to(m.sigma_disorder);
  j.at("engine").get_to(m.engine);
  j.at("seed").get_to(m.seed);
}

void save_curve(const std::filesystem::path& stem, const DefectCurve& curve) {
  curve.validate();
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path sidecar = stem;
  sidecar += ".json";
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw DataError("cannot write " + csv.string());
  write_curve_csv(out, curve);
  std::ofstream meta(sidecar, std::ios::binary);
  if (!meta) throw DataError("cannot write " + sidecar.string());
  meta << nlohmann::json(curve.metadata).dump(2) << '\n';
}

DefectCurve load_curve(const std::filesystem::path& stem) {
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path sidecar = stem;
  sidecar += ".json";
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw DataError("cannot read " + csv.string());
  DefectCurve curve;
  curve.points = read_curve_csv(in);
  std::ifstream meta(sidecar, std::ios::binary);
  if (!meta) throw DataError("cannot read " + sidecar.string());
  try {
    curve.metadata = nlohmann::json::parse(meta).get<CurveMetadata>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("curve metadata: ") + e.what());
  }
  curve.validate();
  return curve;
}

}  // namespace kzsim
