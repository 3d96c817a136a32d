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
#include <vector>

#include <Eigen/Dense>

#include "klmtele/fock.hpp"

namespace klmtele {

using ComplexMatrix = Eigen::MatrixXcd;

/// Unitary acting on creation operators: a_k^dagger -> sum_l U(l,k) a_l^dagger.
class ModeUnitary {
 public:
  /// Throws InvalidArgument unless matrix is square and U^dagger U = I within tol.
  explicit ModeUnitary(ComplexMatrix matrix, double tol = 1e-12);

  static ModeUnitary identity(int dimension);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  /// Matrix product; (u * v) applies v first.
  friend ModeUnitary operator*(const ModeUnitary& u, const ModeUnitary& v);

 private:
  ComplexMatrix matrix_;
};

/// Discrete Fourier transform over points modes, entry (l,k) = w^(kl)/sqrt(points)
/// with w = exp(2 pi i / points).
ModeUnitary fourier_unitary(int points);

/// Places u on targetModes (in that order) of a totalModes identity.
ModeUnitary embed(const ModeUnitary& u, std::span<const int> targetModes, int totalModes);

/// Ryser's formula with Gray-code subset order. O(2^k k); per(0x0) = 1.
Complex permanent(const ComplexMatrix& m);

/// <out| U |in> for Fock basis states with equal photon number.
Complex transition_amplitude(const ModeUnitary& u, const FockBasisState& in,
                             const FockBasisState& out);

/// Amplitudes below this magnitude are dropped after apply().
inline constexpr double kPruneThreshold = 1e-15;

/// Action of the mode unitary on a multimode Fock state.
PureState apply(const ModeUnitary& u, const PureState& state);

}  // namespace klmtele
