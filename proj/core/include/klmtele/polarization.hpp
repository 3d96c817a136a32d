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

#include <array>
#include <optional>
#include <vector>

#include "klmtele/fock.hpp"
#include "klmtele/teleport.hpp"

namespace klmtele {

enum class Polarization { H = 0, V = 1 };

/// Slot index of (spatial mode, polarization) in the dual-rail Fock layout.
constexpr int polarization_slot(int mode, Polarization p) {
  return 2 * mode + static_cast<int>(p);
}

/// Photons over spatial modes that each carry independent H and V occupations.
class PolarizedPhotonState {
 public:
  /// slots must have 2 * spatialModes modes and be normalized within 1e-12.
  PolarizedPhotonState(int spatialModes, PureState slots);

  static PolarizedPhotonState single_photon(int spatialModes, int mode, Complex h, Complex v);

  int spatial_modes() const { return spatialModes_; }
  const PureState& slots() const { return slots_; }
  bool is_single_photon() const;
  /// Amplitude of one photon in (mode, p); zero outside the single-photon sector.
  Complex single_photon_amplitude(int mode, Polarization p) const;

 private:
  int spatialModes_;
  PureState slots_;
};

/// Polarizing beam splitter whose reflected polarization is
/// H' = cos(theta) H - sin(theta) V and transmitted polarization is
/// V' = sin(theta) H + cos(theta) V.
struct RotatedPBS {
  double theta = 0.0;
  int inputMode = 0;
  int reflectMode = 0;
  int transmitMode = 0;

  /// (H, V) components of H' and V'.
  std::array<double, 2> reflected() const;
  std::array<double, 2> transmitted() const;
  /// max deviation of {H', V'} from an orthonormal pair.
  double orthogonality_error() const;
};

/// Same outcome structure as run_analytic with logical 0/1 carried by H/V.
std::vector<TeleportOutcome> run_analytic_polarization(const ResourceCoefficients& rc,
                                                       const QubitAmplitudes& q);

struct PolarizationPattern {
  TeleportOutcome outcome;  // outcome.m counts V photons
  int hCount = 0;
  int vCount = 0;
};

struct PolarizationOracleRun {
  std::vector<PolarizationPattern> patterns;
  std::vector<TeleportOutcome> aggregated;
  double maxDeviation = 0.0;
  bool phaseDependsOnlyOnM = true;
};

/// Full Fock simulation over 2(2n+1) mode/polarization slots with the Fourier
/// transform acting identically on H and V. Throws ConsistencyError when the
/// result disagrees with run_analytic_polarization.
PolarizationOracleRun run_oracle_polarization(const ResourceCoefficients& rc,
                                              const QubitAmplitudes& q,
                                              const OracleOptions& options = {.maxN = 3});

/// Corrective phase for a detection pattern over the 2(n+1) measured slots.
Complex derive_phase_correction_polarization(const FockBasisState& pattern, int m,
                                             const ResourceCoefficients& rc,
                                             const QubitAmplitudes& q);

/// Teleported single photon (one spatial mode) for success-class outcome m.
PolarizedPhotonState teleported_photon(int m, const ResourceCoefficients& rc,
                                       const QubitAmplitudes& q);

enum class CorrectedArm { None, Horizontal, Vertical };

struct Fig2Result {
  double pSuccess = 0.0;                    // 1 - P(detector click)
  std::optional<QubitAmplitudes> recovered; // empty when pSuccess = 0
  double theta = 0.0;                       // arccos |smaller / larger coefficient|
  CorrectedArm arm = CorrectedArm::None;
  RotatedPBS pbs;
  Complex failureAmplitude{};               // <H'| amplitude at the detector (mode 3)
  double normBeforeDetector = 0.0;
};

/// Single-photon simulation of the polarization correction circuit: a PBS
/// splits H (mode 1) from V (mode 2), a rotated PBS on the stronger arm routes
/// the excess to a detector (mode 3) and the kept part to mode 4, then a phase
/// plate and a polarization rotation on mode 4 restore the input qubit.
Fig2Result fig2_circuit(int m, const ResourceCoefficients& rc,
                        const PolarizedPhotonState& teleported);

}  // namespace klmtele
