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
#include "klmtele/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "klmtele/errors.hpp"
#include "klmtele/linear_optics.hpp"
#include "oracle_support.hpp"

namespace klmtele {
namespace {

constexpr auto H = Polarization::H;
constexpr auto V = Polarization::V;

// Slot occupations for the n+1 measured spatial modes before the Fourier
// transform: input photon polarization, then the first half of resource term i.
FockBasisState measured_slots(int n, Polarization input, int i) {
  std::vector<int> occ(static_cast<std::size_t>(2 * (n + 1)), 0);
  occ[static_cast<std::size_t>(polarization_slot(0, input))] = 1;
  for (int j = 1; j <= n; ++j) {
    occ[static_cast<std::size_t>(polarization_slot(j, j <= i ? V : H))] = 1;
  }
  return FockBasisState(std::move(occ));
}

PureState resource_state_polarization(const ResourceCoefficients& rc) {
  const int n = rc.n();
  PureState out(static_cast<std::size_t>(4 * n));
  for (int i = 0; i <= n; ++i) {
    std::vector<int> occ(static_cast<std::size_t>(4 * n), 0);
    for (int j = 1; j <= n; ++j) {
      occ[static_cast<std::size_t>(polarization_slot(j - 1, j <= i ? V : H))] = 1;
      occ[static_cast<std::size_t>(polarization_slot(n + j - 1, j <= i ? H : V))] = 1;
    }
    out.add(FockBasisState(std::move(occ)), rc[i]);
  }
  return out;
}

ModeUnitary fourier_on_both_polarizations(int points) {
  const ModeUnitary f = fourier_unitary(points);
  ComplexMatrix m = ComplexMatrix::Zero(2 * points, 2 * points);
  for (int l = 0; l < points; ++l) {
    for (int k = 0; k < points; ++k) {
      m(polarization_slot(l, H), polarization_slot(k, H)) = f(l, k);
      m(polarization_slot(l, V), polarization_slot(k, V)) = f(l, k);
    }
  }
  return ModeUnitary(std::move(m));
}

// Occupations of the second-half spatial modes other than the qubit mode n+m.
std::vector<int> expected_spectators(int n, int m) {
  std::vector<int> occ;
  for (int j = 1; j <= n; ++j) {
    if (j == m) continue;
    occ.push_back(j < m ? 1 : 0);
    occ.push_back(j < m ? 0 : 1);
  }
  return occ;
}

using Vec8 = Eigen::Matrix<Complex, 8, 1>;
using Mat8 = Eigen::Matrix<Complex, 8, 8>;

// Circuit modes 1..4 are stored at indices 0..3.
int cslot(int circuitMode, Polarization p) { return polarization_slot(circuitMode - 1, p); }

std::array<double, 2> rotate_to(const std::array<double, 2>& v, double targetAngle,
                                double sourceAngle) {
  const double a = targetAngle - sourceAngle;
  return {std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1]};
}

}  // namespace

PolarizedPhotonState::PolarizedPhotonState(int spatialModes, PureState slots)
    : spatialModes_(spatialModes), slots_(std::move(slots)) {
  if (spatialModes < 1) throw InvalidArgument("PolarizedPhotonState: need at least one mode");
  if (static_cast<int>(slots_.mode_count()) != 2 * spatialModes) {
    throw InvalidArgument("PolarizedPhotonState: slot count must be twice the spatial modes");
  }
  if (!slots_.is_normalized(1e-12)) {
    throw InvalidArgument("PolarizedPhotonState: state is not normalized");
  }
}

PolarizedPhotonState PolarizedPhotonState::single_photon(int spatialModes, int mode, Complex h,
                                                         Complex v) {
  if (mode < 0 || mode >= spatialModes) {
    throw InvalidArgument("single_photon: mode out of range");
  }
  const QubitAmplitudes q = QubitAmplitudes::normalize(h, v);
  PureState s(static_cast<std::size_t>(2 * spatialModes));
  auto basis = [&](Polarization p) {
    std::vector<int> occ(static_cast<std::size_t>(2 * spatialModes), 0);
    occ[static_cast<std::size_t>(polarization_slot(mode, p))] = 1;
    return FockBasisState(std::move(occ));
  };
  s.add(basis(H), q.alpha);
  s.add(basis(V), q.beta);
  return PolarizedPhotonState(spatialModes, std::move(s));
}

bool PolarizedPhotonState::is_single_photon() const {
  return std::all_of(slots_.amplitudes().begin(), slots_.amplitudes().end(),
                     [](const auto& e) { return e.first.total_photons() == 1; });
}

Complex PolarizedPhotonState::single_photon_amplitude(int mode, Polarization p) const {
  std::vector<int> occ(slots_.mode_count(), 0);
  occ.at(static_cast<std::size_t>(polarization_slot(mode, p))) = 1;
  return slots_.amplitude(FockBasisState(std::move(occ)));
}

std::array<double, 2> RotatedPBS::reflected() const {
  return {std::cos(theta), -std::sin(theta)};
}

std::array<double, 2> RotatedPBS::transmitted() const {
  return {std::sin(theta), std::cos(theta)};
}

double RotatedPBS::orthogonality_error() const {
  const auto r = reflected();
  const auto t = transmitted();
  return std::max({std::abs(r[0] * r[0] + r[1] * r[1] - 1.0),
                   std::abs(t[0] * t[0] + t[1] * t[1] - 1.0), std::abs(r[0] * t[0] + r[1] * t[1])});
}

std::vector<TeleportOutcome> run_analytic_polarization(const ResourceCoefficients& rc,
                                                       const QubitAmplitudes& q) {
  return run_analytic(rc, q);
}

Complex derive_phase_correction_polarization(const FockBasisState& pattern, int m,
                                             const ResourceCoefficients& rc,
                                             const QubitAmplitudes& q) {
  const int n = rc.n();
  if (m < 1 || m > n) throw InvalidArgument("derive_phase_correction_polarization: m outside 1..n");
  if (static_cast<int>(pattern.mode_count()) != 2 * (n + 1) ||
      pattern.total_photons() != n + 1) {
    throw InvalidArgument("derive_phase_correction_polarization: malformed pattern " +
                          pattern.to_string());
  }
  const ModeUnitary f = fourier_on_both_polarizations(n + 1);
  const Complex z0 = transition_amplitude(f, measured_slots(n, H, m), pattern);
  const Complex z1 = transition_amplitude(f, measured_slots(n, V, m - 1), pattern);
  if (q.alpha * rc[m] == Complex{} || q.beta * rc[m - 1] == Complex{}) return {1.0, 0.0};
  if (std::abs(z0) < kMeasurementCutoff && std::abs(z1) < kMeasurementCutoff) {
    throw InvalidArgument("derive_phase_correction_polarization: pattern has zero probability");
  }
  if (std::abs(std::abs(z0) - std::abs(z1)) > 1e-10) {
    throw ConsistencyError("pattern " + pattern.to_string() +
                           " distorts qubit magnitudes; no phase correction exists");
  }
  const Complex r = z1 / z0;
  return r / std::abs(r);
}

PolarizationOracleRun run_oracle_polarization(const ResourceCoefficients& rc,
                                              const QubitAmplitudes& q,
                                              const OracleOptions& options) {
  const int n = rc.n();
  if (n > options.maxN) {
    throw InvalidArgument("polarization oracle limited to n <= " + std::to_string(options.maxN) +
                          " (requested n = " + std::to_string(n) + ")");
  }
  const int slots = 2 * (2 * n + 1);

  PureState input(2);
  input.add(FockBasisState{1, 0}, q.alpha);
  input.add(FockBasisState{0, 1}, q.beta);
  const PureState full = tensor(input, resource_state_polarization(rc));

  std::vector<int> measured(static_cast<std::size_t>(2 * (n + 1)));
  std::iota(measured.begin(), measured.end(), 0);
  const PureState evolved =
      apply(embed(fourier_on_both_polarizations(n + 1), measured, slots), full);
  auto branches = measure_photon_counts(evolved, measured);

  auto vCount = [](const FockBasisState& p) {
    int v = 0;
    for (std::size_t k = 1; k < p.mode_count(); k += 2) v += p[k];
    return v;
  };
  std::stable_sort(branches.begin(), branches.end(), [&](const auto& a, const auto& b) {
    return vCount(a.pattern) < vCount(b.pattern);
  });

  const auto analytic = run_analytic_polarization(rc, q);
  PolarizationOracleRun run;
  std::vector<TeleportOutcome> flat;
  double dev = 0.0;
  for (const auto& br : branches) {
    PolarizationPattern pp;
    pp.vCount = vCount(br.pattern);
    pp.hCount = br.pattern.total_photons() - pp.vCount;
    TeleportOutcome& o = pp.outcome;
    o.m = pp.vCount;
    o.pattern = br.pattern;
    o.probability = br.probability;
    if (pp.hCount != n + 1 - pp.vCount) {
      throw ConsistencyError("pattern " + br.pattern.to_string() + " does not hold n+1 photons");
    }
    const auto& ref = analytic[static_cast<std::size_t>(o.m)];
    o.collapsedLogical = ref.collapsedLogical;
    o.qubitMode = ref.qubitMode;

    if (!o.is_success_class(n)) {
      std::vector<int> expected;
      for (int j = 1; j <= n; ++j) {
        expected.push_back(o.m == 0 ? 0 : 1);
        expected.push_back(o.m == 0 ? 1 : 0);
      }
      const double weight = std::norm(br.conditional.amplitude(FockBasisState(expected)));
      dev = std::max(dev, 1.0 - weight);
    } else if (!ref.conditionalQubit) {
      dev = std::max(dev, br.probability);
    } else {
      const int local = o.m - 1;
      const std::vector<int> qslots{polarization_slot(local, H), polarization_slot(local, V)};
      const auto factor = detail::factor_qubit(br.conditional, qslots, {1, 0}, {0, 1});
      dev = std::max(dev, factor.residual);
      if (factor.spectatorCount != 1 ||
          factor.spectator.occupations() != expected_spectators(n, o.m)) {
        throw ConsistencyError("pattern " + br.pattern.to_string() +
                               " leaves unexpected spectator modes " + factor.spectator.to_string());
      }
      o.correctivePhase = derive_phase_correction_polarization(br.pattern, o.m, rc, q);
      QubitAmplitudes corrected;
      dev = std::max(dev, detail::reconcile_qubit(factor, o.correctivePhase,
                                                  *ref.conditionalQubit, corrected));
      o.conditionalQubit = corrected;
    }
    flat.push_back(o);
    run.patterns.push_back(std::move(pp));
  }

  dev = std::max(dev, detail::aggregate_outcomes(flat, analytic, run.aggregated,
                                                 run.phaseDependsOnlyOnM));
  run.maxDeviation = dev;
  if (!(dev <= options.tolerance)) {
    throw ConsistencyError("polarization oracle disagrees with closed form: max deviation " +
                           detail::format_deviation(dev));
  }
  return run;
}

PolarizedPhotonState teleported_photon(int m, const ResourceCoefficients& rc,
                                       const QubitAmplitudes& q) {
  if (m < 1 || m > rc.n()) throw InvalidArgument("teleported_photon: m outside 1..n");
  const auto outcomes = run_analytic_polarization(rc, q);
  const auto& o = outcomes[static_cast<std::size_t>(m)];
  if (!o.conditionalQubit) throw InvalidArgument("teleported_photon: outcome has zero probability");
  return PolarizedPhotonState::single_photon(1, 0, o.conditionalQubit->alpha,
                                             o.conditionalQubit->beta);
}

Fig2Result fig2_circuit(int m, const ResourceCoefficients& rc,
                        const PolarizedPhotonState& teleported) {
  if (m < 1 || m > rc.n()) throw InvalidArgument("fig2_circuit: m outside 1..n");
  if (teleported.spatial_modes() != 1 || !teleported.is_single_photon()) {
    throw InvalidArgument("fig2_circuit: expects a single photon in one spatial mode");
  }
  const Complex cPrev = rc[m - 1];
  const Complex cCur = rc[m];
  if (cPrev == Complex{} && cCur == Complex{}) {
    throw InvalidArgument("fig2_circuit: c_{m-1} = c_m = 0");
  }

  Fig2Result res;
  Vec8 psi = Vec8::Zero();
  psi(cslot(1, H)) = teleported.single_photon_amplitude(0, H);
  psi(cslot(1, V)) = teleported.single_photon_amplitude(0, V);

  // PBS1: H stays in mode 1, V is transmitted into mode 2.
  Mat8 pbs1 = Mat8::Identity();
  pbs1(cslot(1, V), cslot(1, V)) = 0.0;
  pbs1(cslot(2, V), cslot(2, V)) = 0.0;
  pbs1(cslot(2, V), cslot(1, V)) = 1.0;
  pbs1(cslot(1, V), cslot(2, V)) = 1.0;
  psi = pbs1 * psi;

  // The rotated PBS sits on the arm carrying the larger coefficient. Its
  // transmitted polarization keeps |smaller/larger| of that arm's amplitude.
  const bool vArm = std::norm(cCur) <= std::norm(cPrev);
  const double ratio = vArm ? std::abs(cCur) / std::abs(cPrev) : std::abs(cPrev) / std::abs(cCur);
  res.theta = std::acos(std::clamp(ratio, 0.0, 1.0));
  res.arm = vArm ? CorrectedArm::Vertical : CorrectedArm::Horizontal;
  const int armMode = vArm ? 2 : 1;
  const Polarization armPol = vArm ? V : H;
  // For the H arm the element is turned so that V' lies theta away from H.
  res.pbs = RotatedPBS{vArm ? res.theta : std::numbers::pi / 2 - res.theta, armMode, 3, 4};

  const auto hp = res.pbs.reflected();
  const auto vp = res.pbs.transmitted();
  // |arm,H'> <-> |3,H'>, |arm,V'> <-> |4,V'>; |3,V'> and |4,H'> are left alone.
  Mat8 rot = Mat8::Identity();
  for (int mode : {armMode, 3, 4}) {
    for (auto p : {H, V}) {
      for (auto p2 : {H, V}) rot(cslot(mode, p), cslot(mode, p2)) = 0.0;
    }
  }
  auto addOuter = [&](int outMode, const std::array<double, 2>& outPol, int inMode,
                      const std::array<double, 2>& inPol) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        rot(cslot(outMode, static_cast<Polarization>(a)), cslot(inMode, static_cast<Polarization>(b))) +=
            outPol[static_cast<std::size_t>(a)] * inPol[static_cast<std::size_t>(b)];
      }
    }
  };
  addOuter(3, hp, armMode, hp);
  addOuter(4, vp, armMode, vp);
  addOuter(armMode, hp, 3, hp);
  addOuter(armMode, vp, 4, vp);
  addOuter(3, vp, 3, vp);
  addOuter(4, hp, 4, hp);
  const double unitarityError = (rot.adjoint() * rot - Mat8::Identity()).cwiseAbs().maxCoeff();
  if (unitarityError > 1e-12) {
    throw ConsistencyError("rotated PBS is not unitary: " +
                           detail::format_deviation(unitarityError));
  }
  psi = rot * psi;
  res.normBeforeDetector = psi.squaredNorm();

  const Complex detH = psi(cslot(3, H));
  const Complex detV = psi(cslot(3, V));
  res.failureAmplitude = hp[0] * detH + hp[1] * detV;
  const double pClick = std::norm(detH) + std::norm(detV);
  res.pSuccess = std::max(0.0, res.normBeforeDetector - pClick);

  // No click: drop mode 3.
  psi(cslot(3, H)) = 0.0;
  psi(cslot(3, V)) = 0.0;
  if (res.pSuccess <= 0.0) return res;

  // Phase plate on mode 4 aligns the kept branch with the untouched one.
  const double phase = vArm ? std::arg(cCur) - std::arg(cPrev) : std::arg(cPrev) - std::arg(cCur);
  const Complex plate = std::polar(1.0, phase);
  psi(cslot(4, H)) *= plate;
  psi(cslot(4, V)) *= plate;

  // Recovery rotation on mode 4: V' back onto the arm's logical polarization.
  const double vpAngle = std::atan2(vp[1], vp[0]);
  const double targetAngle = armPol == V ? std::numbers::pi / 2 : 0.0;
  const auto eH = rotate_to({1.0, 0.0}, targetAngle, vpAngle);
  const auto eV = rotate_to({0.0, 1.0}, targetAngle, vpAngle);
  const Complex a4h = psi(cslot(4, H));
  const Complex a4v = psi(cslot(4, V));
  psi(cslot(4, H)) = eH[0] * a4h + eV[0] * a4v;
  psi(cslot(4, V)) = eH[1] * a4h + eV[1] * a4v;

  const Complex zero = vArm ? psi(cslot(1, H)) : psi(cslot(4, H));
  const Complex one = vArm ? psi(cslot(4, V)) : psi(cslot(2, V));
  const double leaked = psi.squaredNorm() - std::norm(zero) - std::norm(one);
  if (leaked > 1e-12) {
    throw ConsistencyError("correction circuit leaves amplitude outside the logical slots");
  }
  res.recovered = QubitAmplitudes::normalize(zero, one);
  return res;
}

}  // namespace klmtele
