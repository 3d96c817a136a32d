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

#include <optional>
#include <span>
#include <vector>

#include "klmtele/fock.hpp"

namespace klmtele {

/// Coefficients c_0..c_n of the 2n-mode entangled resource state.
/// Indexing outside 0..n yields 0.
class ResourceCoefficients {
 public:
  /// Requires n = c.size() - 1 >= 1 and sum |c_i|^2 = 1 within tol.
  explicit ResourceCoefficients(std::vector<Complex> c, double tol = 1e-12);

  /// Rescales c to unit norm; rejects the zero vector.
  static ResourceCoefficients normalized(std::vector<Complex> c);
  /// Equal moduli, c_i = 1/sqrt(n+1).
  static ResourceCoefficients uniform(int n);
  /// Real nonnegative c_i = sqrt(w_i) from squared moduli w.
  static ResourceCoefficients from_weights(std::span<const double> weights, double tol = 1e-12);

  int n() const { return static_cast<int>(c_.size()) - 1; }
  Complex operator[](int i) const {
    return (i < 0 || i > n()) ? Complex{} : c_[static_cast<std::size_t>(i)];
  }
  double weight(int i) const { return std::norm((*this)[i]); }
  std::vector<double> weights() const;
  const std::vector<Complex>& coefficients() const { return c_; }

 private:
  std::vector<Complex> c_;
};

/// One measurement outcome of the number-encoded (or polarization) protocol.
struct TeleportOutcome {
  int m = 0;                               // photons detected in total (V photons for polarization)
  std::optional<FockBasisState> pattern;   // detection pattern, oracle path only
  double probability = 0.0;
  std::optional<int> qubitMode;            // n + m for success-class outcomes
  std::optional<QubitAmplitudes> conditionalQubit;
  std::optional<int> collapsedLogical;     // 0 for m = 0, 1 for m = n + 1
  Complex correctivePhase{1.0, 0.0};       // e^{i phi}; oracle path only

  bool is_success_class(int n) const { return m >= 1 && m <= n; }
};

/// |t_n> on 2n modes: term i puts one photon in modes 1..i of the first half
/// and in modes i+1..n of the second half.
PureState build_resource_state(const ResourceCoefficients& rc);

/// Closed-form outcomes for m = 0..n+1. A success-class outcome with zero
/// probability carries no conditional qubit.
std::vector<TeleportOutcome> run_analytic(const ResourceCoefficients& rc,
                                          const QubitAmplitudes& q);

struct OracleOptions {
  int maxN = 4;
  double tolerance = 1e-10;
};

struct OracleRun {
  /// One entry per detection pattern, ordered by m then pattern.
  std::vector<TeleportOutcome> patterns;
  /// Patterns merged by m = 0..n+1; conditional qubits are phase corrected and
  /// aligned to the closed-form global phase.
  std::vector<TeleportOutcome> aggregated;
  double maxDeviation = 0.0;
  /// Whether every pattern with the same m needed the same corrective phase.
  bool phaseDependsOnlyOnM = true;
};

/// Full Fock-space simulation of the protocol, reconciled against run_analytic.
/// Throws ConsistencyError if the two disagree beyond options.tolerance and
/// InvalidArgument if n exceeds options.maxN.
OracleRun run_oracle(const ResourceCoefficients& rc, const QubitAmplitudes& q,
                     const OracleOptions& options = {});

/// e^{i phi} such that diag(1, e^{-i phi}) maps the qubit left in mode n+m by
/// detection pattern onto the closed-form conditional qubit. Returns 1 when one
/// branch of the qubit is empty.
Complex derive_phase_correction(const FockBasisState& pattern, int m,
                                const ResourceCoefficients& rc, const QubitAmplitudes& q);

}  // namespace klmtele
