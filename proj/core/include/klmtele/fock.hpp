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

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace klmtele {

using Complex = std::complex<double>;

/// Photon occupation numbers over a fixed list of modes.
///
/// Ordering is lexicographic over the occupation list, which fixes the
/// iteration order of every state and measurement table in the library.
class FockBasisState {
 public:
  FockBasisState() = default;
  explicit FockBasisState(std::vector<int> occupations);
  FockBasisState(std::initializer_list<int> occupations);

  static FockBasisState vacuum(std::size_t modes);

  std::size_t mode_count() const { return occupations_.size(); }
  int operator[](std::size_t mode) const { return occupations_[mode]; }
  const std::vector<int>& occupations() const { return occupations_; }
  int total_photons() const;

  /// Occupations of *this followed by those of other.
  FockBasisState concat(const FockBasisState& other) const;
  /// Occupations restricted to the listed modes, in the listed order.
  FockBasisState select(std::span<const int> modes) const;

  std::string to_string() const;

  friend auto operator<=>(const FockBasisState&, const FockBasisState&) = default;
  friend bool operator==(const FockBasisState&, const FockBasisState&) = default;

 private:
  std::vector<int> occupations_;
};

/// Sparse multimode pure state. Entries with zero amplitude are never stored.
class PureState {
 public:
  using AmplitudeMap = std::map<FockBasisState, Complex>;

  PureState() = default;
  explicit PureState(std::size_t modeCount);
  PureState(std::size_t modeCount, AmplitudeMap amplitudes);

  static PureState basis(const FockBasisState& occupations);

  std::size_t mode_count() const { return modeCount_; }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }
  bool empty() const { return amplitudes_.empty(); }

  Complex amplitude(const FockBasisState& basis) const;

  /// Adds to the amplitude of basis; drops the entry if the result is exactly 0.
  void add(const FockBasisState& basis, Complex amplitude);

  double norm_squared() const;
  bool is_normalized(double tol = 1e-9) const;
  PureState normalized() const;
  PureState scaled(Complex factor) const;

  /// Removes entries with |amplitude| below threshold.
  void prune(double threshold);

  /// <this|other>
  Complex inner(const PureState& other) const;

 private:
  std::size_t modeCount_ = 0;
  AmplitudeMap amplitudes_;
};

/// Logical qubit alpha|0> + beta|1>.
struct QubitAmplitudes {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  /// Validates |alpha|^2 + |beta|^2 = 1 within tol and rescales exactly.
  static QubitAmplitudes make(Complex alpha, Complex beta, double tol = 1e-9);
  /// Normalizes any nonzero pair.
  static QubitAmplitudes normalize(Complex alpha, Complex beta);

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
};

/// |<a|b>|^2
double fidelity(const QubitAmplitudes& a, const QubitAmplitudes& b);

/// All compositions of totalPhotons into modes parts, lexicographically sorted.
std::vector<FockBasisState> enumerate_basis(int modes, int totalPhotons);

PureState tensor(const PureState& a, const PureState& b);

struct MeasurementBranch {
  FockBasisState pattern;   // occupations of the measured modes, ascending
  double probability = 0.0;
  PureState conditional;    // normalized state of the unmeasured modes
};

/// Patterns below this probability are omitted from measurement results.
inline constexpr double kMeasurementCutoff = 1e-15;

/// Projective photon counting on measuredModes. Branches are returned in
/// lexicographic pattern order; unmeasured modes keep ascending order.
std::vector<MeasurementBranch> measure_photon_counts(
    const PureState& state, std::span<const int> measuredModes);

}  // namespace klmtele
