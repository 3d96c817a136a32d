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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "klmtele/teleport.hpp"

namespace klmtele {

/// Two-outcome generalized measurement {E_S, E_F} that undoes the coefficient
/// imbalance of outcome m.
struct KrausPair {
  Eigen::Matrix2cd eS;
  Eigen::Matrix2cd eF;
  int m = 0;

  /// max |E_S^dagger E_S + E_F^dagger E_F - I|
  double completeness_error() const;
};

/// Kraus pair for outcome m (1 <= m <= n). The smaller of |c_{m-1}|, |c_m|
/// fixes which logical branch is attenuated; complex ratios are kept as is.
KrausPair kraus_for(int m, const ResourceCoefficients& rc);

enum class CorrectionFlag { Success, Failure };

struct CorrectionResult {
  CorrectionFlag flag = CorrectionFlag::Failure;
  QubitAmplitudes postState;
  double successProbability = 0.0;  // <psi_m| E_S^dagger E_S |psi_m>
};

/// Samples the Kraus measurement on a success-class outcome. Deterministic for
/// a given seed.
CorrectionResult apply_correction(const TeleportOutcome& outcome, const ResourceCoefficients& rc,
                                  std::uint64_t seed);

/// min(|c_{m-1}|^2, |c_m|^2) / p(m). Throws InvalidArgument when p(m) = 0.
double p_success_given_m(int m, const ResourceCoefficients& rc, const QubitAmplitudes& q);

/// Joint probability p(S, m) = min(|c_{m-1}|^2, |c_m|^2); independent of the input.
double p_success_joint(int m, const ResourceCoefficients& rc);

/// Sum over m of the pairwise minima of adjacent squared moduli.
double p_success_total_brute(std::span<const double> weights);
double p_success_total_brute(const ResourceCoefficients& rc);

struct ExtremaClassification {
  std::vector<int> maximaIndices;          // endpoints included
  std::vector<int> interiorMinimaIndices;  // m != 0, m != n
  bool strict = true;                      // no two adjacent values equal
};

/// Local extrema of the squared-moduli sequence. For non-strict sequences the
/// classification runs on plateau-compressed values and reports the first
/// index of each plateau; it is informational only.
ExtremaClassification classify_extrema(std::span<const double> weights);
ExtremaClassification classify_extrema(const ResourceCoefficients& rc);

/// 1 - sum(maxima) + sum(interior minima). Returns nullopt for non-strict
/// sequences, where the extrema bookkeeping is not defined.
std::optional<double> p_success_closed_form(std::span<const double> weights);
std::optional<double> p_success_closed_form(const ResourceCoefficients& rc);

}  // namespace klmtele
