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
#include "klmtele/fock.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "klmtele/errors.hpp"
#include "klmtele/teleport.hpp"
#include "test_support.hpp"

using namespace klmtele;
using klmtele::testing::binomial;

namespace {

PureState random_state(int modes, int photons, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  PureState s(static_cast<std::size_t>(modes));
  for (const auto& b : enumerate_basis(modes, photons)) s.add(b, Complex{g(rng), g(rng)});
  return s.normalized();
}

// Inserts pattern occupations at the measured positions of rest.
FockBasisState merge(const FockBasisState& pattern, const std::vector<int>& measured,
                     const FockBasisState& rest) {
  std::vector<int> occ(pattern.mode_count() + rest.mode_count());
  std::size_t p = 0, r = 0;
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (p < measured.size() && measured[p] == static_cast<int>(k)) {
      occ[k] = pattern[p++];
    } else {
      occ[k] = rest[r++];
    }
  }
  return FockBasisState(occ);
}

}  // namespace

TEST(FockBasisState, rejects_negative_occupation) {
  EXPECT_THROW(FockBasisState({1, -1}), InvalidArgument);
}

TEST(FockBasisState, lexicographic_order_and_total) {
  const FockBasisState a{0, 2, 1};
  const FockBasisState b{1, 0, 0};
  EXPECT_LT(a, b);
  EXPECT_EQ(a.total_photons(), 3);
  EXPECT_EQ(a.concat(b), (FockBasisState{0, 2, 1, 1, 0, 0}));
  const std::vector<int> sel{2, 0};
  EXPECT_EQ(a.select(sel), (FockBasisState{1, 0}));
}

TEST(EnumerateBasis, single_mode) {
  const auto b = enumerate_basis(1, 3);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], FockBasisState{3});
}

TEST(EnumerateBasis, vacuum_only) {
  const auto b = enumerate_basis(2, 0);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], (FockBasisState{0, 0}));
}

TEST(EnumerateBasis, three_modes_two_photons) {
  const std::vector<FockBasisState> expected{{0, 0, 2}, {0, 1, 1}, {0, 2, 0},
                                             {1, 0, 1}, {1, 1, 0}, {2, 0, 0}};
  EXPECT_EQ(enumerate_basis(3, 2), expected);
}

TEST(EnumerateBasis, rejects_zero_modes) {
  EXPECT_THROW(enumerate_basis(0, 1), InvalidArgument);
  EXPECT_THROW(enumerate_basis(2, -1), InvalidArgument);
}

TEST(EnumerateBasis, count_matches_stars_and_bars) {
  for (int modes = 1; modes <= 8; ++modes) {
    for (int photons = 0; photons <= 8; ++photons) {
      const auto b = enumerate_basis(modes, photons);
      EXPECT_EQ(static_cast<double>(b.size()), binomial(photons + modes - 1, modes - 1))
          << modes << " modes, " << photons << " photons";
      EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
      EXPECT_EQ(std::adjacent_find(b.begin(), b.end()), b.end());
      for (const auto& s : b) EXPECT_EQ(s.total_photons(), photons);
    }
  }
}

TEST(PureState, drops_zero_amplitudes_and_checks_modes) {
  PureState s(2);
  s.add({1, 0}, 0.5);
  s.add({1, 0}, -0.5);
  EXPECT_TRUE(s.empty());
  EXPECT_THROW(s.add({1}, 1.0), InvalidArgument);
  EXPECT_THROW(PureState(2, {{FockBasisState{1, 0, 0}, Complex{1.0}}}), InvalidArgument);
}

TEST(PureState, normalize_gives_unit_norm) {
  PureState s(1);
  s.add({0}, {3.0, 0.0});
  s.add({1}, {0.0, 4.0});
  EXPECT_NEAR(s.normalized().norm_squared(), 1.0, 1e-12);
  EXPECT_THROW(PureState(1).normalized(), InvalidArgument);
}

TEST(Tensor, basis_product) {
  const auto t = tensor(PureState::basis({1}), PureState::basis({0}));
  ASSERT_EQ(t.mode_count(), 2u);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.amplitude({1, 0}), Complex(1.0));
}

TEST(Tensor, distributes_over_superposition) {
  PureState plus(1);
  plus.add({0}, 1 / std::sqrt(2.0));
  plus.add({1}, 1 / std::sqrt(2.0));
  const auto t = tensor(plus, PureState::basis({1}));
  EXPECT_NEAR(std::abs(t.amplitude({0, 1}) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitude({1, 1}) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(t.size(), 2u);
}

TEST(Tensor, qubit_with_smallest_resource) {
  const auto rc = ResourceCoefficients::uniform(1);
  PureState q(1);
  q.add({0}, 0.6);
  q.add({1}, 0.8);
  const auto t = tensor(q, build_resource_state(rc));
  EXPECT_EQ(t.mode_count(), 3u);
  EXPECT_EQ(t.size(), 4u);
  EXPECT_NEAR(t.norm_squared(), 1.0, 1e-12);
}

TEST(Tensor, rejects_unnormalized) {
  PureState s(1);
  s.add({0}, 2.0);
  EXPECT_THROW(tensor(s, PureState::basis({0})), InvalidArgument);
}

TEST(Measure, two_mode_single_photon) {
  PureState s(2);
  s.add({0, 1}, 1 / std::sqrt(2.0));
  s.add({1, 0}, 1 / std::sqrt(2.0));
  const std::vector<int> modes{0, 1};
  const auto br = measure_photon_counts(s, modes);
  ASSERT_EQ(br.size(), 2u);
  EXPECT_EQ(br[0].pattern, (FockBasisState{0, 1}));
  EXPECT_EQ(br[1].pattern, (FockBasisState{1, 0}));
  EXPECT_NEAR(br[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(br[1].probability, 0.5, 1e-15);
  EXPECT_EQ(br[0].conditional.mode_count(), 0u);
}

TEST(Measure, product_state_leaves_qubit_untouched) {
  PureState q(1);
  q.add({0}, Complex{0.6, 0.0});
  q.add({1}, Complex{0.0, 0.8});
  const auto s = tensor(PureState::basis({1}), q);
  const std::vector<int> modes{0};
  const auto br = measure_photon_counts(s, modes);
  ASSERT_EQ(br.size(), 1u);
  EXPECT_EQ(br[0].pattern, FockBasisState{1});
  EXPECT_NEAR(br[0].probability, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(br[0].conditional.inner(q)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(br[0].conditional.amplitude({1}) - Complex(0.0, 0.8)), 0.0, 1e-15);
}

TEST(Measure, rejects_bad_mode_lists) {
  const auto s = PureState::basis({1, 0});
  const std::vector<int> outOfRange{2};
  const std::vector<int> dup{0, 0};
  const std::vector<int> none;
  EXPECT_THROW(measure_photon_counts(s, outOfRange), InvalidArgument);
  EXPECT_THROW(measure_photon_counts(s, dup), InvalidArgument);
  EXPECT_THROW(measure_photon_counts(s, none), InvalidArgument);
}

TEST(MeasureProperty, completeness_reconstruction_and_phase_invariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int modes = 2 + trial % 4;
    const int photons = trial % 4;
    const auto s = random_state(modes, photons, rng);
    std::vector<int> measured;
    for (int k = 0; k < modes; ++k) {
      if ((trial >> (k % 3)) & 1 || k == modes - 1) measured.push_back(k);
    }
    const auto br = measure_photon_counts(s, measured);
    double total = 0.0;
    PureState rebuilt(s.mode_count());
    for (const auto& b : br) {
      total += b.probability;
      EXPECT_NEAR(b.conditional.norm_squared(), 1.0, 1e-12);
      for (const auto& [rest, amp] : b.conditional.amplitudes()) {
        rebuilt.add(merge(b.pattern, measured, rest), std::sqrt(b.probability) * amp);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (const auto& [basis, amp] : s.amplitudes()) {
      EXPECT_NEAR(std::abs(rebuilt.amplitude(basis) - amp), 0.0, 1e-10);
    }

    const auto rotated = measure_photon_counts(s.scaled(std::polar(1.0, 0.7 + trial)), measured);
    ASSERT_EQ(rotated.size(), br.size());
    for (std::size_t i = 0; i < br.size(); ++i) {
      EXPECT_NEAR(rotated[i].probability, br[i].probability, 1e-14);
    }
  }
}
