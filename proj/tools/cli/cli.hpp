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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "klmtele/fock.hpp"
#include "klmtele/optimize.hpp"
#include "klmtele/teleport.hpp"

namespace klmtele::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kConsistencyError = 3 };

enum class OutputFormat { Json, Csv };

/// Fully validated command configuration.
struct RunConfig {
  std::string subcommand;
  std::optional<ResourceCoefficients> coefficients;
  std::optional<QubitAmplitudes> qubit;
  bool oracle = false;
  int oracleLimit = 4;
  int n = 0;
  int nMin = 1;
  int nMax = 8;
  int trials = 1;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t budget = 2'000'000;
  int restarts = 32;
  double tolerance = 1e-10;
  Objective objective = Objective::Success;
  FailureConvention convention = FailureConvention::CollapseToBasis;
  OutputFormat format = OutputFormat::Csv;
  std::string outPath;  // empty: stdout
  // psuccess with a random source re-draws per trial from this seed.
  std::optional<std::uint64_t> randomCoefficientSeed;
};

/// Coefficient source: "uniform", "inline:v0,v1,...", "random:<seed>", or a
/// JSON file path. squared treats inline values as |c_i|^2.
ResourceCoefficients resolve_coefficients(const std::string& source, std::optional<int> n,
                                          bool squared, bool renormalize);

/// Qubit spec "re,im+re,im" or "random:<seed>".
QubitAmplitudes parse_qubit(const std::string& spec);

/// Uniformly random point on the probability simplex (flat Dirichlet).
std::vector<double> random_simplex_weights(int n, std::uint64_t seed);

/// Runs the command line (arguments without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klmtele::cli
