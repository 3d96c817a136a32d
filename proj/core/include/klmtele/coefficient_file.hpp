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
#pragma once

#include <filesystem>
#include <string>

#include "klmtele/teleport.hpp"

namespace klmtele {

/// Tolerance on sum |c_i|^2 - 1 accepted from files without renormalization.
inline constexpr double kCoefficientFileTolerance = 1e-9;

/// Parses {"n": <int>, "c": [[re, im], ...]}. Without renormalize the
/// coefficients must be normalized within kCoefficientFileTolerance.
/// Throws InvalidArgument on any schema or value error.
ResourceCoefficients parse_coefficient_json(const std::string& text, bool renormalize = false);
ResourceCoefficients load_coefficient_file(const std::filesystem::path& path,
                                           bool renormalize = false);

std::string to_coefficient_json(const ResourceCoefficients& rc);

}  // namespace klmtele
