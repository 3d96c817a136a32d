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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace klmtele {

/// Squared moduli |c_0|^2..|c_n|^2 of a resource state; nonnegative, sum 1.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> weights, double tol = 1e-12);
  static SimplexPoint uniform(int n);

  int n() const { return static_cast<int>(weights_.size()) - 1; }
  const std::vector<double>& weights() const { return weights_; }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<double> weights_;
};

/// Probability of unit-fidelity teleportation after error correction.
double objective_success(const SimplexPoint& p);

/// What the receiver holds after a failure outcome (m = 0 or m = n+1).
enum class FailureConvention {
  CollapseToBasis,  // logical 0 for m = 0, logical 1 for m = n+1 (default)
  MaximallyMixed,   // fidelity 1/2 regardless of input
};

/// Haar-average fidelity without error correction, every outcome accepted.
/// Exact: 2/3 + (1/3) sum_m sqrt(w_{m-1} w_m) for the collapse convention.
double avg_fidelity_closed_form(const SimplexPoint& p,
                                FailureConvention convention = FailureConvention::CollapseToBasis);

struct AvgFidelityEstimate {
  double monteCarlo = 0.0;
  double standardError = 0.0;
  double closedForm = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate over Haar-random input qubits, cross-checked against
/// avg_fidelity_closed_form. Throws ConsistencyError if the two differ by more
/// than three standard errors.
AvgFidelityEstimate objective_avg_fidelity(
    const SimplexPoint& p, std::size_t samples, std::uint64_t seed,
    FailureConvention convention = FailureConvention::CollapseToBasis);

/// Paired Monte-Carlo difference F(a) - F(b) on shared input draws.
struct FidelityComparison {
  double difference = 0.0;
  double standardError = 0.0;
  AvgFidelityEstimate a;
  AvgFidelityEstimate b;
};
FidelityComparison compare_avg_fidelity(
    const SimplexPoint& a, const SimplexPoint& b, std::size_t samples, std::uint64_t seed,
    FailureConvention convention = FailureConvention::CollapseToBasis);

enum class Objective { Success, AvgFidelity };

std::string to_string(Objective objective);
std::string to_string(FailureConvention convention);

struct CertificateCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct MaximizeOptions {
  int restarts = 32;                 // raised to 32 if smaller
  std::size_t budget = 2'000'000;    // objective evaluations
  std::uint64_t seed = 0;
  double gridStep = 0.05;
  int gridMaxN = 3;                  // exhaustive grid floor up to this n
  std::size_t samples = 0;           // Monte-Carlo certification samples (0: skip)
  FailureConvention convention = FailureConvention::CollapseToBasis;
};

struct OptimizationReport {
  Objective objective = Objective::Success;
  SimplexPoint bestPoint = SimplexPoint::uniform(1);
  double bestValue = 0.0;
  std::string method;
  std::size_t evaluations = 0;
  bool budgetExhausted = false;
  std::vector<CertificateCheck> certificate;
};

/// Deterministic objective used by the search.
double evaluate(Objective objective, const SimplexPoint& p,
                FailureConvention convention = FailureConvention::CollapseToBasis);

/// Multi-start Nelder-Mead over softmax logits, plus an exhaustive grid for
/// small n. Ties go to the lexicographically smallest point.
OptimizationReport maximize(Objective objective, int n, const MaximizeOptions& options = {});

struct KlmCertificate {
  bool applicable = false;      // false for plateau (including uniform) sequences
  int largestMaximumIndex = -1;
  double largestMaximum = 0.0;
  double threshold = 0.0;       // 1/(n+1)
  bool maximumAboveThreshold = false;
  double pairingSlack = 0.0;    // sum of other maxima minus interior minima
  bool slackNonnegative = false;
  double pSuccess = 0.0;
  double klmValue = 0.0;        // n/(n+1)
  bool belowKlm = false;

  bool all_passed() const {
    return applicable && maximumAboveThreshold && slackNonnegative && belowKlm;
  }
};

/// Checks the chain of bounds showing that a sequence with a strict maximum
/// teleports worse than the uniform state.
KlmCertificate certify_klm_bound(const SimplexPoint& p);

}  // namespace klmtele
