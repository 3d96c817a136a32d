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
#include "oracle_support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "klmtele/errors.hpp"

namespace klmtele::detail {

QubitFactor factor_qubit(const PureState& conditional, std::span<const int> qubitSlots,
                         const std::vector<int>& zeroOccupation,
                         const std::vector<int>& oneOccupation) {
  const auto modes = static_cast<int>(conditional.mode_count());
  std::vector<int> spectatorSlots;
  for (int k = 0; k < modes; ++k) {
    if (std::find(qubitSlots.begin(), qubitSlots.end(), k) == qubitSlots.end()) {
      spectatorSlots.push_back(k);
    }
  }

  std::map<FockBasisState, std::pair<Complex, Complex>> columns;
  for (const auto& [basis, amp] : conditional.amplitudes()) {
    const FockBasisState q = basis.select(qubitSlots);
    auto& col = columns[basis.select(spectatorSlots)];
    if (q.occupations() == zeroOccupation) {
      col.first += amp;
    } else if (q.occupations() == oneOccupation) {
      col.second += amp;
    } else {
      throw ConsistencyError("conditional state leaves " + q.to_string() +
                             " in the qubit mode; expected a logical qubit");
    }
  }
  if (columns.empty()) throw ConsistencyError("empty conditional state");

  // 2 x K amplitude matrix; rank one iff the smaller Gram eigenvalue vanishes.
  double g00 = 0.0, g11 = 0.0;
  Complex g01{};
  const std::pair<const FockBasisState, std::pair<Complex, Complex>>* best = nullptr;
  double bestNorm = -1.0;
  for (const auto& entry : columns) {
    const auto& [a0, a1] = entry.second;
    g00 += std::norm(a0);
    g11 += std::norm(a1);
    g01 += std::conj(a0) * a1;
    const double w = std::norm(a0) + std::norm(a1);
    if (w > bestNorm) {
      bestNorm = w;
      best = &entry;
    }
  }
  const double tr = g00 + g11;
  const double det = g00 * g11 - std::norm(g01);
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  const double large = (tr + disc) / 2.0;
  const double small = large > 0.0 ? std::max(det / large, 0.0) : 0.0;

  QubitFactor f;
  f.zero = best->second.first;
  f.one = best->second.second;
  f.spectator = best->first;
  f.spectatorCount = columns.size();
  f.residual = small;
  return f;
}

double reconcile_qubit(const QubitFactor& factor, Complex correctivePhase,
                       const QubitAmplitudes& expected, QubitAmplitudes& corrected) {
  const QubitAmplitudes raw = QubitAmplitudes::normalize(factor.zero, factor.one);
  double dev = std::max(std::abs(std::abs(raw.alpha) - std::abs(expected.alpha)),
                        std::abs(std::abs(raw.beta) - std::abs(expected.beta)));

  QubitAmplitudes c{raw.alpha, raw.beta * std::conj(correctivePhase)};
  const Complex overlap = std::conj(c.alpha) * expected.alpha + std::conj(c.beta) * expected.beta;
  if (std::abs(overlap) > 0.0) {
    const Complex g = overlap / std::abs(overlap);
    c.alpha *= g;
    c.beta *= g;
  }
  dev = std::max({dev, std::abs(c.alpha - expected.alpha), std::abs(c.beta - expected.beta),
                  1.0 - fidelity(c, expected)});
  corrected = c;
  return dev;
}

double aggregate_outcomes(const std::vector<TeleportOutcome>& patterns,
                          const std::vector<TeleportOutcome>& analytic,
                          std::vector<TeleportOutcome>& aggregated,
                          bool& phaseDependsOnlyOnM) {
  aggregated.clear();
  phaseDependsOnlyOnM = true;
  double dev = 0.0;
  for (const auto& ref : analytic) {
    TeleportOutcome agg = ref;
    agg.probability = 0.0;
    agg.conditionalQubit.reset();
    agg.pattern.reset();
    bool first = true;
    for (const auto& p : patterns) {
      if (p.m != ref.m) continue;
      agg.probability += p.probability;
      if (first) {
        agg.conditionalQubit = p.conditionalQubit;
        agg.correctivePhase = p.correctivePhase;
        first = false;
      } else if (std::abs(p.correctivePhase - agg.correctivePhase) > 1e-9) {
        phaseDependsOnlyOnM = false;
      }
    }
    dev = std::max(dev, std::abs(agg.probability - ref.probability));
    aggregated.push_back(std::move(agg));
  }
  return dev;
}

std::string format_deviation(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

}  // namespace klmtele::detail
