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
#include "klmtele/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "klmtele/errors.hpp"
#include "klmtele/linear_optics.hpp"
#include "oracle_support.hpp"

namespace klmtele {
namespace {

double sum_norm(const std::vector<Complex>& c) {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return s;
}

// Occupations of the n+1 measured modes before the Fourier transform, for the
// branch where the input mode holds inputPhotons and i resource photons
// remain in the first half.
FockBasisState measured_input(int n, int inputPhotons, int i) {
  std::vector<int> occ(static_cast<std::size_t>(n + 1), 0);
  occ[0] = inputPhotons;
  for (int j = 1; j <= i; ++j) occ[static_cast<std::size_t>(j)] = 1;
  return FockBasisState(std::move(occ));
}

// Second-half occupations (modes n+1..2n) left over when m photons are
// detected, excluding the qubit mode n+m.
std::vector<int> expected_spectators(int n, int m) {
  std::vector<int> occ;
  for (int j = 1; j <= n; ++j) {
    if (j == m) continue;
    occ.push_back(j > m ? 1 : 0);
  }
  return occ;
}

}  // namespace

ResourceCoefficients::ResourceCoefficients(std::vector<Complex> c, double tol)
    : c_(std::move(c)) {
  if (c_.size() < 2) throw InvalidArgument("resource coefficients need n >= 1 (at least 2 entries)");
  for (const auto& v : c_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidArgument("resource coefficients must be finite");
    }
  }
  const double s = sum_norm(c_);
  if (!(std::abs(s - 1.0) <= tol)) {
    throw InvalidArgument("resource coefficients are not normalized (sum |c_i|^2 = " +
                          std::to_string(s) + ")");
  }
}

ResourceCoefficients ResourceCoefficients::normalized(std::vector<Complex> c) {
  const double s = sum_norm(c);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("resource coefficients must be finite and not all zero");
  }
  const double scale = 1.0 / std::sqrt(s);
  for (auto& v : c) v *= scale;
  return ResourceCoefficients(std::move(c), 1e-12);
}

ResourceCoefficients ResourceCoefficients::uniform(int n) {
  if (n < 1) throw InvalidArgument("uniform resource needs n >= 1");
  const double v = 1.0 / std::sqrt(static_cast<double>(n + 1));
  return ResourceCoefficients(std::vector<Complex>(static_cast<std::size_t>(n + 1), Complex{v, 0.0}),
                              1e-12);
}

ResourceCoefficients ResourceCoefficients::from_weights(std::span<const double> weights,
                                                        double tol) {
  std::vector<Complex> c;
  c.reserve(weights.size());
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("squared moduli must be nonnegative");
    c.emplace_back(std::sqrt(w), 0.0);
  }
  return ResourceCoefficients(std::move(c), tol);
}

std::vector<double> ResourceCoefficients::weights() const {
  std::vector<double> w;
  w.reserve(c_.size());
  for (const auto& v : c_) w.push_back(std::norm(v));
  return w;
}

PureState build_resource_state(const ResourceCoefficients& rc) {
  const int n = rc.n();
  PureState out(static_cast<std::size_t>(2 * n));
  for (int i = 0; i <= n; ++i) {
    std::vector<int> occ(static_cast<std::size_t>(2 * n), 0);
    for (int j = 1; j <= n; ++j) {
      occ[static_cast<std::size_t>(j - 1)] = j <= i ? 1 : 0;
      occ[static_cast<std::size_t>(n + j - 1)] = j > i ? 1 : 0;
    }
    out.add(FockBasisState(std::move(occ)), rc[i]);
  }
  return out;
}

std::vector<TeleportOutcome> run_analytic(const ResourceCoefficients& rc,
                                          const QubitAmplitudes& q) {
  const int n = rc.n();
  std::vector<TeleportOutcome> out;
  out.reserve(static_cast<std::size_t>(n + 2));
  for (int m = 0; m <= n + 1; ++m) {
    TeleportOutcome o;
    o.m = m;
    const Complex a0 = q.alpha * rc[m];
    const Complex a1 = q.beta * rc[m - 1];
    o.probability = std::norm(a0) + std::norm(a1);
    if (m == 0) {
      o.collapsedLogical = 0;
    } else if (m == n + 1) {
      o.collapsedLogical = 1;
    } else {
      o.qubitMode = n + m;
      if (o.probability > 0.0) o.conditionalQubit = QubitAmplitudes::normalize(a0, a1);
    }
    out.push_back(std::move(o));
  }
  return out;
}

Complex derive_phase_correction(const FockBasisState& pattern, int m,
                                const ResourceCoefficients& rc, const QubitAmplitudes& q) {
  const int n = rc.n();
  if (m < 1 || m > n) throw InvalidArgument("derive_phase_correction: m must lie in 1..n");
  if (static_cast<int>(pattern.mode_count()) != n + 1 || pattern.total_photons() != m) {
    throw InvalidArgument("derive_phase_correction: pattern " + pattern.to_string() +
                          " is not an m-photon pattern on n+1 modes");
  }
  const ModeUnitary f = fourier_unitary(n + 1);
  const Complex z0 = transition_amplitude(f, measured_input(n, 0, m), pattern);
  const Complex z1 = transition_amplitude(f, measured_input(n, 1, m - 1), pattern);
  const bool zeroBranch = q.alpha * rc[m] != Complex{};
  const bool oneBranch = q.beta * rc[m - 1] != Complex{};
  if (!zeroBranch || !oneBranch) return {1.0, 0.0};
  if (std::abs(z0) < kMeasurementCutoff && std::abs(z1) < kMeasurementCutoff) {
    throw InvalidArgument("derive_phase_correction: pattern has zero probability");
  }
  if (std::abs(std::abs(z0) - std::abs(z1)) > 1e-10) {
    throw ConsistencyError("pattern " + pattern.to_string() +
                           " distorts qubit magnitudes; no phase correction exists");
  }
  const Complex r = z1 / z0;
  return r / std::abs(r);
}

OracleRun run_oracle(const ResourceCoefficients& rc, const QubitAmplitudes& q,
                     const OracleOptions& options) {
  const int n = rc.n();
  if (n > options.maxN) {
    throw InvalidArgument("oracle limited to n <= " + std::to_string(options.maxN) +
                          " (requested n = " + std::to_string(n) + ")");
  }
  const int modes = 2 * n + 1;

  PureState input(1);
  input.add(FockBasisState{0}, q.alpha);
  input.add(FockBasisState{1}, q.beta);
  const PureState full = tensor(input, build_resource_state(rc));

  std::vector<int> measured(static_cast<std::size_t>(n + 1));
  std::iota(measured.begin(), measured.end(), 0);
  const PureState evolved = apply(embed(fourier_unitary(n + 1), measured, modes), full);
  auto branches = measure_photon_counts(evolved, measured);
  std::stable_sort(branches.begin(), branches.end(), [](const auto& a, const auto& b) {
    return a.pattern.total_photons() < b.pattern.total_photons();
  });

  const auto analytic = run_analytic(rc, q);
  OracleRun run;
  double dev = 0.0;
  for (const auto& br : branches) {
    TeleportOutcome o;
    o.m = br.pattern.total_photons();
    o.pattern = br.pattern;
    o.probability = br.probability;
    const auto& ref = analytic[static_cast<std::size_t>(o.m)];
    o.collapsedLogical = ref.collapsedLogical;
    o.qubitMode = ref.qubitMode;

    if (!o.is_success_class(n)) {
      // Failure: the second half must be left in a definite Fock state.
      const std::vector<int> expected(static_cast<std::size_t>(n), o.m == 0 ? 1 : 0);
      const double weight = std::norm(br.conditional.amplitude(FockBasisState(expected)));
      dev = std::max(dev, 1.0 - weight);
    } else if (!ref.conditionalQubit) {
      dev = std::max(dev, br.probability);
    } else {
      const int local = o.m - 1;
      const std::vector<int> slots{local};
      const auto factor = detail::factor_qubit(br.conditional, slots, {0}, {1});
      dev = std::max(dev, factor.residual);
      if (factor.spectatorCount != 1 ||
          factor.spectator.occupations() != expected_spectators(n, o.m)) {
        throw ConsistencyError("pattern " + br.pattern.to_string() +
                               " leaves unexpected spectator modes " + factor.spectator.to_string());
      }
      o.correctivePhase = derive_phase_correction(br.pattern, o.m, rc, q);
      QubitAmplitudes corrected;
      dev = std::max(dev, detail::reconcile_qubit(factor, o.correctivePhase,
                                                  *ref.conditionalQubit, corrected));
      o.conditionalQubit = corrected;
    }
    run.patterns.push_back(std::move(o));
  }

  dev = std::max(dev, detail::aggregate_outcomes(run.patterns, analytic, run.aggregated,
                                                 run.phaseDependsOnlyOnM));
  run.maxDeviation = dev;
  if (!(dev <= options.tolerance)) {
    throw ConsistencyError("Fock oracle disagrees with closed form: max deviation " +
                           detail::format_deviation(dev));
  }
  return run;
}

}  // namespace klmtele
