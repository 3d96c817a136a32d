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

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <unordered_map>

#include "klmtele/errors.hpp"

namespace klmtele {
namespace {

constexpr int kMaxFactorial = 64;

const std::array<double, kMaxFactorial + 1>& factorials() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

double factorial(int k) {
  if (k < 0 || k > kMaxFactorial) {
    throw InvalidArgument("photon number " + std::to_string(k) + " outside factorial table");
  }
  return factorials()[static_cast<std::size_t>(k)];
}

bool is_unit_column(const ComplexMatrix& m, int k) {
  for (int l = 0; l < m.rows(); ++l) {
    if (m(l, k) != (l == k ? Complex{1.0, 0.0} : Complex{})) return false;
  }
  return true;
}

// Builds U[S,T]: column k repeated in[k] times, row l repeated out[l] times,
// restricted to the listed modes.
ComplexMatrix repeated_submatrix(const ComplexMatrix& u, std::span<const int> modes,
                                 const std::vector<int>& in, const std::vector<int>& out,
                                 int photons) {
  ComplexMatrix sub(photons, photons);
  std::vector<int> rows, cols;
  rows.reserve(static_cast<std::size_t>(photons));
  cols.reserve(static_cast<std::size_t>(photons));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (int r = 0; r < out[i]; ++r) rows.push_back(modes[i]);
    for (int c = 0; c < in[i]; ++c) cols.push_back(modes[i]);
  }
  for (int i = 0; i < photons; ++i) {
    for (int j = 0; j < photons; ++j) sub(i, j) = u(rows[static_cast<std::size_t>(i)],
                                                    cols[static_cast<std::size_t>(j)]);
  }
  return sub;
}

}  // namespace

ModeUnitary::ModeUnitary(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvalidArgument("ModeUnitary: matrix must be square");
  }
  const auto n = matrix_.rows();
  const double err =
      (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (n > 0 && !(err <= tol)) {
    throw InvalidArgument("ModeUnitary: matrix is not unitary (max |U^dagger U - I| = " +
                          std::to_string(err) + ")");
  }
}

ModeUnitary ModeUnitary::identity(int dimension) {
  if (dimension < 0) throw InvalidArgument("ModeUnitary::identity: negative dimension");
  return ModeUnitary(ComplexMatrix::Identity(dimension, dimension));
}

ModeUnitary operator*(const ModeUnitary& u, const ModeUnitary& v) {
  if (u.dimension() != v.dimension()) {
    throw InvalidArgument("ModeUnitary product: dimension mismatch");
  }
  return ModeUnitary(u.matrix_ * v.matrix_, 1e-10);
}

ModeUnitary fourier_unitary(int points) {
  if (points < 1) throw InvalidArgument("fourier_unitary: points must be >= 1");
  ComplexMatrix f(points, points);
  const double scale = 1.0 / std::sqrt(static_cast<double>(points));
  for (int l = 0; l < points; ++l) {
    for (int k = 0; k < points; ++k) {
      // Reduce the exponent first so large kl does not cost accuracy.
      const int e = (k * l) % points;
      const double angle = 2.0 * std::numbers::pi * e / points;
      f(l, k) = std::polar(scale, angle);
    }
  }
  return ModeUnitary(std::move(f));
}

ModeUnitary embed(const ModeUnitary& u, std::span<const int> targetModes, int totalModes) {
  if (static_cast<int>(targetModes.size()) != u.dimension()) {
    throw InvalidArgument("embed: target mode count does not match unitary dimension");
  }
  std::vector<bool> seen(static_cast<std::size_t>(std::max(totalModes, 0)), false);
  for (int t : targetModes) {
    if (t < 0 || t >= totalModes) throw InvalidArgument("embed: target mode out of range");
    if (seen[static_cast<std::size_t>(t)]) throw InvalidArgument("embed: duplicate target mode");
    seen[static_cast<std::size_t>(t)] = true;
  }
  ComplexMatrix m = ComplexMatrix::Identity(totalModes, totalModes);
  for (int i = 0; i < u.dimension(); ++i) {
    for (int j = 0; j < u.dimension(); ++j) {
      m(targetModes[static_cast<std::size_t>(i)], targetModes[static_cast<std::size_t>(j)]) =
          u(i, j);
    }
  }
  return ModeUnitary(std::move(m));
}

Complex permanent(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("permanent: matrix must be square");
  const int k = static_cast<int>(m.rows());
  if (k == 0) return {1.0, 0.0};
  if (k > 40) throw InvalidArgument("permanent: dimension too large for Ryser evaluation");

  // per(A) = (-1)^k sum_S (-1)^|S| prod_i sum_{j in S} a_ij, visiting subsets
  // in Gray-code order so each step adds or removes one column.
  std::vector<Complex> rowSums(static_cast<std::size_t>(k), Complex{});
  Complex total{};
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << k;
  for (std::uint64_t i = 1; i < subsets; ++i) {
    const int j = std::countr_zero(i);
    const std::uint64_t bit = std::uint64_t{1} << j;
    gray ^= bit;
    if (gray & bit) {
      for (int r = 0; r < k; ++r) rowSums[static_cast<std::size_t>(r)] += m(r, j);
    } else {
      for (int r = 0; r < k; ++r) rowSums[static_cast<std::size_t>(r)] -= m(r, j);
    }
    Complex prod = rowSums[0];
    for (int r = 1; r < k; ++r) prod *= rowSums[static_cast<std::size_t>(r)];
    if ((k - std::popcount(gray)) % 2 == 0) {
      total += prod;
    } else {
      total -= prod;
    }
  }
  return total;
}

Complex transition_amplitude(const ModeUnitary& u, const FockBasisState& in,
                             const FockBasisState& out) {
  const auto d = static_cast<std::size_t>(u.dimension());
  if (in.mode_count() != d || out.mode_count() != d) {
    throw InvalidArgument("transition_amplitude: mode count mismatch");
  }
  const int photons = in.total_photons();
  if (out.total_photons() != photons) return {};
  std::vector<int> modes(d);
  double norm = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    modes[k] = static_cast<int>(k);
    norm *= factorial(in[k]) * factorial(out[k]);
  }
  const ComplexMatrix sub =
      repeated_submatrix(u.matrix(), modes, in.occupations(), out.occupations(), photons);
  return permanent(sub) / std::sqrt(norm);
}

PureState apply(const ModeUnitary& u, const PureState& state) {
  if (static_cast<int>(state.mode_count()) != u.dimension()) {
    throw InvalidArgument("apply: unitary dimension does not match state mode count");
  }
  if (!state.is_normalized()) throw InvalidArgument("apply: state must be normalized");

  const ComplexMatrix& m = u.matrix();
  std::vector<int> active;
  for (int k = 0; k < u.dimension(); ++k) {
    if (!is_unit_column(m, k)) active.push_back(k);
  }

  PureState out(state.mode_count());
  if (active.empty()) return state;

  // Photons on untouched modes stay put; only the active-mode occupations
  // are redistributed, and only within the same photon number.
  std::unordered_map<int, std::vector<FockBasisState>> outputsByPhotons;
  const int activeCount = static_cast<int>(active.size());
  std::vector<int> inActive(active.size());

  for (const auto& [basis, amp] : state.amplitudes()) {
    int photons = 0;
    double inNorm = 1.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      inActive[i] = basis[static_cast<std::size_t>(active[i])];
      photons += inActive[i];
      inNorm *= factorial(inActive[i]);
    }
    auto [it, inserted] = outputsByPhotons.try_emplace(photons);
    if (inserted) it->second = enumerate_basis(activeCount, photons);

    std::vector<int> occ = basis.occupations();
    for (const auto& target : it->second) {
      double outNorm = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) outNorm *= factorial(target[i]);
      const ComplexMatrix sub =
          repeated_submatrix(m, active, inActive, target.occupations(), photons);
      const Complex a = permanent(sub) / std::sqrt(inNorm * outNorm);
      if (a == Complex{}) continue;
      for (std::size_t i = 0; i < active.size(); ++i) {
        occ[static_cast<std::size_t>(active[i])] = target[i];
      }
      out.add(FockBasisState(occ), amp * a);
    }
  }
  out.prune(kPruneThreshold);
  return out;
}

}  // namespace klmtele
