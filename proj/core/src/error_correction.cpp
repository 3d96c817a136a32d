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
#include "klmtele/error_correction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "klmtele/errors.hpp"

namespace klmtele {

double KrausPair::completeness_error() const {
  const Eigen::Matrix2cd sum = eS.adjoint() * eS + eF.adjoint() * eF;
  return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

KrausPair kraus_for(int m, const ResourceCoefficients& rc) {
  if (m < 1 || m > rc.n()) {
    throw InvalidArgument("kraus_for: m = " + std::to_string(m) + " outside 1..n");
  }
  const Complex prev = rc[m - 1];
  const Complex cur = rc[m];
  if (prev == Complex{} && cur == Complex{}) {
    throw InvalidArgument("kraus_for: c_{m-1} = c_m = 0, outcome cannot occur");
  }
  KrausPair k;
  k.m = m;
  k.eS.setZero();
  k.eF.setZero();
  if (std::norm(prev) <= std::norm(cur)) {
    const Complex r = prev / cur;
    k.eS(0, 0) = r;
    k.eS(1, 1) = 1.0;
    k.eF(0, 0) = std::sqrt(std::max(0.0, 1.0 - std::norm(r)));
  } else {
    const Complex r = cur / prev;
    k.eS(0, 0) = 1.0;
    k.eS(1, 1) = r;
    k.eF(1, 1) = std::sqrt(std::max(0.0, 1.0 - std::norm(r)));
  }
  return k;
}

CorrectionResult apply_correction(const TeleportOutcome& outcome, const ResourceCoefficients& rc,
                                  std::uint64_t seed) {
  if (!outcome.is_success_class(rc.n())) {
    throw InvalidArgument("apply_correction: outcome m = " + std::to_string(outcome.m) +
                          " is a failure outcome");
  }
  if (!outcome.conditionalQubit) {
    throw InvalidArgument("apply_correction: outcome carries no conditional qubit");
  }
  const KrausPair k = kraus_for(outcome.m, rc);
  const Eigen::Vector2cd psi(outcome.conditionalQubit->alpha, outcome.conditionalQubit->beta);
  const Eigen::Vector2cd s = k.eS * psi;
  const Eigen::Vector2cd f = k.eF * psi;

  CorrectionResult r;
  r.successProbability = s.squaredNorm();
  std::mt19937_64 rng(seed);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < r.successProbability) {
    r.flag = CorrectionFlag::Success;
    r.postState = QubitAmplitudes::normalize(s(0), s(1));
  } else {
    r.flag = CorrectionFlag::Failure;
    r.postState = QubitAmplitudes::normalize(f(0), f(1));
  }
  return r;
}

double p_success_joint(int m, const ResourceCoefficients& rc) {
  if (m < 1 || m > rc.n()) return 0.0;
  return std::min(rc.weight(m - 1), rc.weight(m));
}

double p_success_given_m(int m, const ResourceCoefficients& rc, const QubitAmplitudes& q) {
  if (m < 1 || m > rc.n()) {
    throw InvalidArgument("p_success_given_m: m = " + std::to_string(m) + " outside 1..n");
  }
  const double pm = std::norm(q.alpha * rc[m]) + std::norm(q.beta * rc[m - 1]);
  if (pm == 0.0) {
    throw InvalidArgument("p_success_given_m: outcome m = " + std::to_string(m) +
                          " has zero probability");
  }
  return std::min(rc.weight(m - 1), rc.weight(m)) / pm;
}

double p_success_total_brute(std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t m = 1; m < weights.size(); ++m) sum += std::min(weights[m - 1], weights[m]);
  return sum;
}

double p_success_total_brute(const ResourceCoefficients& rc) {
  const auto w = rc.weights();
  return p_success_total_brute(w);
}

ExtremaClassification classify_extrema(std::span<const double> weights) {
  struct Run {
    int start;
    double value;
  };
  ExtremaClassification out;
  std::vector<Run> runs;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!runs.empty() && runs.back().value == weights[i]) {
      out.strict = false;
      continue;
    }
    runs.push_back({static_cast<int>(i), weights[i]});
  }
  if (runs.size() < 2) return out;

  for (std::size_t r = 0; r < runs.size(); ++r) {
    const bool hasLeft = r > 0;
    const bool hasRight = r + 1 < runs.size();
    const double v = runs[r].value;
    const bool aboveLeft = !hasLeft || runs[r - 1].value < v;
    const bool aboveRight = !hasRight || runs[r + 1].value < v;
    if (aboveLeft && aboveRight) {
      out.maximaIndices.push_back(runs[r].start);
    } else if (hasLeft && hasRight && runs[r - 1].value > v && runs[r + 1].value > v) {
      out.interiorMinimaIndices.push_back(runs[r].start);
    }
  }
  return out;
}

ExtremaClassification classify_extrema(const ResourceCoefficients& rc) {
  const auto w = rc.weights();
  return classify_extrema(w);
}

std::optional<double> p_success_closed_form(std::span<const double> weights) {
  const auto ex = classify_extrema(weights);
  if (!ex.strict) return std::nullopt;
  double p = 1.0;
  for (int i : ex.maximaIndices) p -= weights[static_cast<std::size_t>(i)];
  for (int i : ex.interiorMinimaIndices) p += weights[static_cast<std::size_t>(i)];
  return p;
}

std::optional<double> p_success_closed_form(const ResourceCoefficients& rc) {
  const auto w = rc.weights();
  return p_success_closed_form(w);
}

}  // namespace klmtele
