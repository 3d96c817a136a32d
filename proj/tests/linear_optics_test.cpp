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
#include "klmtele/linear_optics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "klmtele/errors.hpp"
#include "test_support.hpp"

using namespace klmtele;
using klmtele::testing::naive_permanent;
using klmtele::testing::random_complex_matrix;
using klmtele::testing::random_unitary;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState random_state(int modes, int photons, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  PureState s(static_cast<std::size_t>(modes));
  for (const auto& b : enumerate_basis(modes, photons)) s.add(b, Complex{g(rng), g(rng)});
  return s.normalized();
}

double distance(const PureState& a, const PureState& b) {
  double d = 0.0;
  for (const auto& [basis, amp] : a.amplitudes()) d = std::max(d, std::abs(amp - b.amplitude(basis)));
  for (const auto& [basis, amp] : b.amplitudes()) d = std::max(d, std::abs(amp - a.amplitude(basis)));
  return d;
}

}  // namespace

TEST(ModeUnitary, rejects_non_unitary_and_non_square) {
  EXPECT_THROW(ModeUnitary(ComplexMatrix::Ones(2, 2)), InvalidArgument);
  EXPECT_THROW(ModeUnitary(ComplexMatrix::Identity(2, 3)), InvalidArgument);
}

TEST(Fourier, one_point_is_identity) {
  const auto f = fourier_unitary(1);
  EXPECT_EQ(f.dimension(), 1);
  EXPECT_NEAR(std::abs(f(0, 0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(Fourier, two_point_is_balanced_beam_splitter) {
  const auto f = fourier_unitary(2);
  EXPECT_NEAR(std::abs(f(0, 0) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(0, 1) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(1, 0) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(1, 1) + kInvSqrt2), 0.0, 1e-15);
}

TEST(Fourier, three_point_entries) {
  const auto f = fourier_unitary(3);
  const double s = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(f(0, k) - s), 0.0, 1e-15);
  const Complex omega{-0.5, std::sqrt(3.0) / 2.0};
  EXPECT_NEAR(std::abs(f(1, 1) - omega * s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f(2, 2) - omega * s), 0.0, 1e-15);  // w^4 = w
  EXPECT_NEAR(std::abs(f(1, 2) - std::conj(omega) * s), 0.0, 1e-15);
}

TEST(Fourier, unitary_for_many_sizes) {
  for (int p = 1; p <= 16; ++p) {
    const ComplexMatrix m = fourier_unitary(p).matrix();
    EXPECT_LE((m.adjoint() * m - ComplexMatrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(fourier_unitary(0), InvalidArgument);
}

TEST(Embed, identity_anywhere) {
  const std::vector<int> target{2};
  const auto e = embed(ModeUnitary::identity(1), target, 4);
  EXPECT_TRUE(e.matrix().isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(Embed, block_placement) {
  const std::vector<int> target{0, 1};
  const auto e = embed(fourier_unitary(2), target, 3);
  EXPECT_NEAR(std::abs(e(2, 2) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(1, 1) + kInvSqrt2), 0.0, 1e-15);
  EXPECT_EQ(e(0, 2), Complex{});
}

TEST(Embed, permuted_targets) {
  const std::vector<int> target{2, 0};
  const auto e = embed(fourier_unitary(2), target, 3);
  // Local index 0 -> mode 2, local index 1 -> mode 0.
  EXPECT_NEAR(std::abs(e(2, 2) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(2, 0) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(0, 2) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(0, 0) + kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(1, 1) - Complex(1.0)), 0.0, 1e-15);
  const auto& m = e.matrix();
  EXPECT_LE((m.adjoint() * m - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Embed, rejects_bad_targets) {
  const std::vector<int> dup{1, 1};
  const std::vector<int> far{0, 3};
  const std::vector<int> shortList{0};
  EXPECT_THROW(embed(fourier_unitary(2), dup, 3), InvalidArgument);
  EXPECT_THROW(embed(fourier_unitary(2), far, 3), InvalidArgument);
  EXPECT_THROW(embed(fourier_unitary(2), shortList, 3), InvalidArgument);
}

TEST(Permanent, examples) {
  EXPECT_NEAR(std::abs(permanent(ComplexMatrix::Identity(2, 2)) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(permanent(ComplexMatrix::Ones(3, 3)) - Complex(6.0)), 0.0, 1e-13);
  ComplexMatrix hom(2, 2);
  hom << 1, 1, 1, -1;
  EXPECT_NEAR(std::abs(permanent(hom)), 0.0, 1e-15);
  EXPECT_EQ(permanent(ComplexMatrix(0, 0)), Complex(1.0));
  EXPECT_THROW(permanent(ComplexMatrix::Ones(2, 3)), InvalidArgument);
}

TEST(Permanent, matches_permutation_sum) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    const int k = 1 + trial % 6;
    const auto m = random_complex_matrix(k, rng);
    EXPECT_NEAR(std::abs(permanent(m) - naive_permanent(m)), 0.0, 1e-10) << "k = " << k;
  }
}

TEST(Apply, identity_leaves_state_unchanged) {
  std::mt19937_64 rng(2);
  const auto s = random_state(3, 2, rng);
  EXPECT_LE(distance(apply(ModeUnitary::identity(3), s), s), 1e-15);
}

TEST(Apply, single_photon_through_beam_splitter) {
  const auto out = apply(fourier_unitary(2), PureState::basis({1, 0}));
  EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_EQ(out.size(), 2u);
}

TEST(Apply, hong_ou_mandel) {
  const auto out = apply(fourier_unitary(2), PureState::basis({1, 1}));
  EXPECT_NEAR(std::abs(out.amplitude({2, 0}) - kInvSqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude({0, 2}) + kInvSqrt2), 0.0, 1e-15);
  EXPECT_EQ(out.amplitude({1, 1}), Complex{});
}

TEST(Apply, rejects_dimension_mismatch) {
  EXPECT_THROW(apply(fourier_unitary(3), PureState::basis({1, 0})), InvalidArgument);
}

TEST(ApplyProperty, norm_preservation_and_composition) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const int photons = trial % 5;
    const ModeUnitary u(random_unitary(d, rng), 1e-10);
    const ModeUnitary v(random_unitary(d, rng), 1e-10);
    const auto s = random_state(d, photons, rng);
    const auto us = apply(u, s);
    EXPECT_NEAR(us.norm_squared(), 1.0, 1e-10);
    for (const auto& [b, a] : us.amplitudes()) EXPECT_EQ(b.total_photons(), photons);
    EXPECT_LE(distance(apply(u * v, s), apply(u, apply(v, s))), 1e-9);
  }
}

TEST(ApplyProperty, single_photon_sector_is_matrix_vector_product) {
  std::mt19937_64 rng(23);
  for (int d = 1; d <= 5; ++d) {
    const ModeUnitary u(random_unitary(d, rng), 1e-10);
    const auto s = random_state(d, 1, rng);
    Eigen::VectorXcd v(d);
    for (int k = 0; k < d; ++k) {
      std::vector<int> occ(static_cast<std::size_t>(d), 0);
      occ[static_cast<std::size_t>(k)] = 1;
      v(k) = s.amplitude(FockBasisState(occ));
    }
    const Eigen::VectorXcd w = u.matrix() * v;
    const auto out = apply(u, s);
    for (int k = 0; k < d; ++k) {
      std::vector<int> occ(static_cast<std::size_t>(d), 0);
      occ[static_cast<std::size_t>(k)] = 1;
      EXPECT_NEAR(std::abs(out.amplitude(FockBasisState(occ)) - w(k)), 0.0, 1e-12);
    }
  }
}

TEST(TransitionAmplitude, agrees_with_apply) {
  std::mt19937_64 rng(31);
  const ModeUnitary u(random_unitary(3, rng), 1e-10);
  const FockBasisState in{2, 0, 1};
  const auto out = apply(u, PureState::basis(in));
  for (const auto& t : enumerate_basis(3, 3)) {
    EXPECT_NEAR(std::abs(transition_amplitude(u, in, t) - out.amplitude(t)), 0.0, 1e-12);
  }
  EXPECT_EQ(transition_amplitude(u, in, FockBasisState{1, 0, 0}), Complex{});
}
