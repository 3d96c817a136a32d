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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "klmtele/error_correction.hpp"
#include "klmtele/errors.hpp"
#include "test_support.hpp"

using namespace klmtele;

namespace {

QubitAmplitudes qubit(Complex a, Complex b) { return QubitAmplitudes::normalize(a, b); }

ResourceCoefficients from_w(std::vector<double> w) { return ResourceCoefficients::from_weights(w); }

}  // namespace

TEST(PolarizationSlot, layout) {
  EXPECT_EQ(polarization_slot(0, Polarization::H), 0);
  EXPECT_EQ(polarization_slot(0, Polarization::V), 1);
  EXPECT_EQ(polarization_slot(3, Polarization::V), 7);
}

TEST(PolarizedPhotonState, single_photon_accessors) {
  const auto s = PolarizedPhotonState::single_photon(2, 1, 0.6, Complex(0.0, 0.8));
  EXPECT_TRUE(s.is_single_photon());
  EXPECT_EQ(s.single_photon_amplitude(1, Polarization::H), Complex(0.6));
  EXPECT_EQ(s.single_photon_amplitude(1, Polarization::V), Complex(0.0, 0.8));
  EXPECT_EQ(s.single_photon_amplitude(0, Polarization::H), Complex{});
  EXPECT_THROW(PolarizedPhotonState::single_photon(2, 2, 1.0, 0.0), InvalidArgument);
  PureState unnormalized(2);
  unnormalized.add({1, 0}, 2.0);
  EXPECT_THROW(PolarizedPhotonState(1, unnormalized), InvalidArgument);
}

TEST(RunAnalyticPolarization, matches_number_encoding) {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 6; ++n) {
    const ResourceCoefficients rc(klmtele::testing::random_coefficients(n, rng));
    const auto [a, b] = klmtele::testing::random_qubit(rng);
    const auto q = qubit(a, b);
    const auto p = run_analytic_polarization(rc, q);
    const auto f = run_analytic(rc, q);
    ASSERT_EQ(p.size(), f.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
      EXPECT_NEAR(p[m].probability, f[m].probability, 1e-15);
      EXPECT_EQ(p[m].conditionalQubit.has_value(), f[m].conditionalQubit.has_value());
    }
  }
}

TEST(RunAnalyticPolarization, examples) {
  const auto q = qubit({0.3, 0.1}, {-0.5, 0.2});
  for (const auto& o : run_analytic_polarization(ResourceCoefficients::uniform(4), q)) {
    if (o.is_success_class(4)) EXPECT_NEAR(fidelity(*o.conditionalQubit, q), 1.0, 1e-12);
  }
  const auto one = run_analytic_polarization(ResourceCoefficients::uniform(1), qubit(1.0, 0.0));
  EXPECT_NEAR(one[1].probability, 0.5, 1e-15);
  EXPECT_NEAR(std::norm(one[1].conditionalQubit->alpha), 1.0, 1e-15);
  const auto w = run_analytic_polarization(from_w({0.5, 0.3, 0.2}), qubit(0.6, 0.8));
  EXPECT_NEAR(fidelity(*w[1].conditionalQubit, qubit(0.6 * std::sqrt(0.3), 0.8 * std::sqrt(0.5))), 1.0,
              1e-15);
}

TEST(RunOraclePolarization, smallest_protocol_counts) {
  const auto q = qubit(0.6, Complex(0.0, 0.8));
  const auto run = run_oracle_polarization(ResourceCoefficients::uniform(1), q);
  double total = 0.0;
  for (const auto& p : run.patterns) {
    total += p.outcome.probability;
    if (p.outcome.m == 1) {
      EXPECT_EQ(p.hCount, 1);
      EXPECT_EQ(p.vCount, 1);
      EXPECT_NEAR(fidelity(*p.outcome.conditionalQubit, q), 1.0, 1e-10);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(RunOraclePolarization, logical_zero_input) {
  const auto run = run_oracle_polarization(ResourceCoefficients::uniform(1), qubit(1.0, 0.0));
  EXPECT_NEAR(run.aggregated[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(run.aggregated[2].probability, 0.0, 1e-12);
}

TEST(RunOraclePolarization, detected_counts_and_analytic_agreement) {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 3; ++n) {
    for (int t = 0; t < 3; ++t) {
      const ResourceCoefficients rc(klmtele::testing::random_coefficients(n, rng));
      const auto [a, b] = klmtele::testing::random_qubit(rng);
      const auto q = qubit(a, b);
      const auto run = run_oracle_polarization(rc, q);
      const auto ref = run_analytic_polarization(rc, q);
      EXPECT_LE(run.maxDeviation, 1e-10);
      double total = 0.0;
      for (const auto& p : run.patterns) {
        total += p.outcome.probability;
        EXPECT_EQ(p.vCount, p.outcome.m);
        EXPECT_EQ(p.hCount, n + 1 - p.outcome.m);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (std::size_t m = 0; m < ref.size(); ++m) {
        EXPECT_NEAR(run.aggregated[m].probability, ref[m].probability, 1e-10);
        if (ref[m].conditionalQubit) {
          EXPECT_NEAR(fidelity(*run.aggregated[m].conditionalQubit, *ref[m].conditionalQubit), 1.0, 1e-10);
        }
      }
    }
  }
  EXPECT_THROW(run_oracle_polarization(ResourceCoefficients::uniform(4), qubit(1.0, 0.0)),
               InvalidArgument);
}

TEST(DerivePhaseCorrectionPolarization, unit_modulus_on_success_patterns) {
  const auto rc = ResourceCoefficients::uniform(2);
  const auto q = qubit(0.6, 0.8);
  const auto run = run_oracle_polarization(rc, q);
  for (const auto& p : run.patterns) {
    if (!p.outcome.is_success_class(2)) continue;
    const Complex ph = derive_phase_correction_polarization(*p.outcome.pattern, p.outcome.m, rc, q);
    EXPECT_NEAR(std::abs(ph), 1.0, 1e-12);
  }
  EXPECT_THROW(derive_phase_correction_polarization(FockBasisState{1, 0}, 1, rc, q), InvalidArgument);
}

TEST(RotatedPBS, orthonormal_pair) {
  for (double theta : {0.0, 0.3, 0.6847, 1.2, std::numbers::pi / 2}) {
    const RotatedPBS pbs{theta, 2, 3, 4};
    EXPECT_LT(pbs.orthogonality_error(), 1e-12);
    EXPECT_NEAR(pbs.reflected()[0], std::cos(theta), 1e-15);
    EXPECT_NEAR(pbs.reflected()[1], -std::sin(theta), 1e-15);
    EXPECT_NEAR(pbs.transmitted()[0], std::sin(theta), 1e-15);
    EXPECT_NEAR(pbs.transmitted()[1], std::cos(theta), 1e-15);
  }
}

TEST(CorrectionCircuit, equal_coefficients_need_no_detector) {
  const auto rc = ResourceCoefficients::uniform(3);
  const auto q = qubit({0.1, 0.2}, {0.3, -0.9});
  for (int m = 1; m <= 3; ++m) {
    const auto r = fig2_circuit(m, rc, teleported_photon(m, rc, q));
    EXPECT_NEAR(r.theta, 0.0, 1e-12);
    EXPECT_NEAR(r.pSuccess, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(r.failureAmplitude), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(*r.recovered, q), 1.0, 1e-12);
  }
}

TEST(CorrectionCircuit, stronger_previous_coefficient) {
  const auto rc = from_w({0.5, 0.3, 0.2});
  const auto q = qubit(1.0, 1.0);
  const auto r = fig2_circuit(1, rc, teleported_photon(1, rc, q));
  EXPECT_EQ(r.arm, CorrectedArm::Vertical);
  EXPECT_NEAR(r.theta, std::acos(std::sqrt(0.6)), 1e-12);
  EXPECT_NEAR(r.theta, 0.6847, 1e-4);
  EXPECT_NEAR(r.pSuccess, 0.75, 1e-12);
  const double pm = 0.5 * 0.3 + 0.5 * 0.5;
  const Complex expected = -q.beta * rc[0] * std::sin(r.theta) / std::sqrt(pm);
  EXPECT_NEAR(std::abs(r.failureAmplitude - expected), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(*r.recovered, q), 1.0, 1e-12);
  EXPECT_NEAR(r.normBeforeDetector, 1.0, 1e-12);
}

TEST(CorrectionCircuit, stronger_current_coefficient_uses_horizontal_arm) {
  const auto rc = from_w({0.2, 0.8});
  const auto q = qubit(0.6, Complex(0.0, 0.8));
  const auto r = fig2_circuit(1, rc, teleported_photon(1, rc, q));
  EXPECT_EQ(r.arm, CorrectedArm::Horizontal);
  EXPECT_NEAR(std::cos(r.theta), 0.5, 1e-12);
  EXPECT_NEAR(r.pSuccess, p_success_given_m(1, rc, q), 1e-12);
  EXPECT_NEAR(fidelity(*r.recovered, q), 1.0, 1e-12);
}

TEST(CorrectionCircuit, rejects_bad_inputs) {
  const auto rc = ResourceCoefficients::uniform(2);
  const auto ok = teleported_photon(1, rc, qubit(0.6, 0.8));
  EXPECT_THROW(fig2_circuit(0, rc, ok), InvalidArgument);
  EXPECT_THROW(fig2_circuit(3, rc, ok), InvalidArgument);
  PureState twoPhotons(2);
  twoPhotons.add({1, 1}, 1.0);
  EXPECT_THROW(fig2_circuit(1, rc, PolarizedPhotonState(1, twoPhotons)), InvalidArgument);
  EXPECT_THROW(fig2_circuit(1, rc, PolarizedPhotonState::single_photon(2, 0, 0.6, 0.8)), InvalidArgument);
}

TEST(CorrectionCircuit, agrees_with_kraus_operators) {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> nd(1, 6);
  for (int t = 0; t < 100; ++t) {
    const int n = nd(rng);
    const ResourceCoefficients rc(klmtele::testing::random_coefficients(n, rng));
    const auto [a, b] = klmtele::testing::random_qubit(rng);
    const auto q = qubit(a, b);
    const int m = std::uniform_int_distribution<int>(1, n)(rng);
    const auto r = fig2_circuit(m, rc, teleported_photon(m, rc, q));
    EXPECT_NEAR(r.normBeforeDetector, 1.0, 1e-12);
    EXPECT_NEAR(r.pSuccess, p_success_given_m(m, rc, q), 1e-10);
    const double pm = std::norm(q.alpha * rc[m]) + std::norm(q.beta * rc[m - 1]);
    EXPECT_NEAR(r.pSuccess, std::min(rc.weight(m - 1), rc.weight(m)) / pm, 1e-10);

    const auto cond = run_analytic(rc, q)[static_cast<std::size_t>(m)].conditionalQubit;
    const auto k = kraus_for(m, rc);
    const Eigen::Vector2cd s = k.eS * Eigen::Vector2cd(cond->alpha, cond->beta);
    EXPECT_NEAR(fidelity(*r.recovered, qubit(s(0), s(1))), 1.0, 1e-10);
    EXPECT_NEAR(fidelity(*r.recovered, q), 1.0, 1e-10);
  }
}
