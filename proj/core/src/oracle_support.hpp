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

#include <span>
#include <string>
#include <vector>

#include "klmtele/fock.hpp"
#include "klmtele/teleport.hpp"

namespace klmtele::detail {

/// Split of a conditional state into (qubit on qubitSlots) x (spectators).
struct QubitFactor {
  Complex zero;                 // amplitude of logical 0, dominant spectator column
  Complex one;                  // amplitude of logical 1
  FockBasisState spectator;     // dominant spectator configuration
  std::size_t spectatorCount = 0;
  double residual = 0.0;        // squared second singular value (Schmidt weight)
};

/// Throws ConsistencyError if qubit slots hold anything other than the two
/// logical occupation patterns.
QubitFactor factor_qubit(const PureState& conditional, std::span<const int> qubitSlots,
                         const std::vector<int>& zeroOccupation,
                         const std::vector<int>& oneOccupation);

/// Compares a measured conditional qubit against the closed form after phase
/// correction; returns the largest deviation and fills corrected with the
/// globally aligned result.
double reconcile_qubit(const QubitFactor& factor, Complex correctivePhase,
                       const QubitAmplitudes& expected, QubitAmplitudes& corrected);

/// Shared bookkeeping for the Fock oracles: per-pattern outcomes in, aggregated
/// per-m outcomes and probability deviations out.
double aggregate_outcomes(const std::vector<TeleportOutcome>& patterns,
                          const std::vector<TeleportOutcome>& analytic,
                          std::vector<TeleportOutcome>& aggregated,
                          bool& phaseDependsOnlyOnM);

/// Short scientific rendering for diagnostics, e.g. 1.2e-09.
std::string format_deviation(double value);

}  // namespace klmtele::detail
