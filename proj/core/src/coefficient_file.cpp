// Copyright 2026 The klmtele Authors
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
#include "klmtele/coefficient_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "klmtele/errors.hpp"

namespace klmtele {

using nlohmann::json;

ResourceCoefficients parse_coefficient_json(const std::string& text, bool renormalize) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("coefficient file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("c")) {
    throw InvalidArgument("coefficient file: expected an object with keys \"n\" and \"c\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw InvalidArgument("coefficient file: \"n\" must be an integer >= 1");
  }
  const auto n = doc["n"].get<long long>();
  const json& c = doc["c"];
  if (!c.is_array() || static_cast<long long>(c.size()) != n + 1) {
    throw InvalidArgument("coefficient file: \"c\" must list n+1 = " + std::to_string(n + 1) +
                          " coefficients");
  }
  std::vector<Complex> coeffs;
  coeffs.reserve(c.size());
  for (const auto& entry : c) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
      throw InvalidArgument("coefficient file: each coefficient must be [re, im]");
    }
    coeffs.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  double s = 0.0;
  for (const auto& v : coeffs) s += std::norm(v);
  if (!renormalize && !(std::abs(s - 1.0) <= kCoefficientFileTolerance)) {
    throw InvalidArgument("coefficient file: sum |c_i|^2 = " + std::to_string(s) +
                          " (pass --renormalize to rescale)");
  }
  return ResourceCoefficients::normalized(std::move(coeffs));
}

ResourceCoefficients load_coefficient_file(const std::filesystem::path& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open coefficient file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coefficient_json(buf.str(), renormalize);
}

std::string to_coefficient_json(const ResourceCoefficients& rc) {
  json doc;
  doc["n"] = rc.n();
  doc["c"] = json::array();
  for (const auto& v : rc.coefficients()) doc["c"].push_back({v.real(), v.imag()});
  return doc.dump();
}

}  // namespace klmtele
