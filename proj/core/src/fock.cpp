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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "klmtele/errors.hpp"

namespace klmtele {

FockBasisState::FockBasisState(std::vector<int> occupations)
    : occupations_(std::move(occupations)) {
  for (int k : occupations_) {
    if (k < 0) throw InvalidArgument("FockBasisState: negative occupation");
  }
}

FockBasisState::FockBasisState(std::initializer_list<int> occupations)
    : FockBasisState(std::vector<int>(occupations)) {}

FockBasisState FockBasisState::vacuum(std::size_t modes) {
  return FockBasisState(std::vector<int>(modes, 0));
}

int FockBasisState::total_photons() const {
  return std::accumulate(occupations_.begin(), occupations_.end(), 0);
}

FockBasisState FockBasisState::concat(const FockBasisState& other) const {
  std::vector<int> out;
  out.reserve(occupations_.size() + other.occupations_.size());
  out.insert(out.end(), occupations_.begin(), occupations_.end());
  out.insert(out.end(), other.occupations_.begin(), other.occupations_.end());
  FockBasisState result;
  result.occupations_ = std::move(out);
  return result;
}

FockBasisState FockBasisState::select(std::span<const int> modes) const {
  std::vector<int> out;
  out.reserve(modes.size());
  for (int m : modes) out.push_back(occupations_.at(static_cast<std::size_t>(m)));
  FockBasisState result;
  result.occupations_ = std::move(out);
  return result;
}

std::string FockBasisState::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < occupations_.size(); ++i) {
    if (i) os << ',';
    os << occupations_[i];
  }
  os << ')';
  return os.str();
}

PureState::PureState(std::size_t modeCount) : modeCount_(modeCount) {}

PureState::PureState(std::size_t modeCount, AmplitudeMap amplitudes)
    : modeCount_(modeCount) {
  for (auto& [basis, amp] : amplitudes) {
    if (basis.mode_count() != modeCount) {
      throw InvalidArgument("PureState: basis state " + basis.to_string() +
                            " does not have " + std::to_string(modeCount) + " modes");
    }
    if (amp != Complex{}) amplitudes_.emplace(basis, amp);
  }
}

PureState PureState::basis(const FockBasisState& occupations) {
  PureState s(occupations.mode_count());
  s.amplitudes_.emplace(occupations, Complex{1.0, 0.0});
  return s;
}

Complex PureState::amplitude(const FockBasisState& basis) const {
  auto it = amplitudes_.find(basis);
  return it == amplitudes_.end() ? Complex{} : it->second;
}

void PureState::add(const FockBasisState& basis, Complex amplitude) {
  if (basis.mode_count() != modeCount_) {
    throw InvalidArgument("PureState::add: mode count mismatch");
  }
  auto [it, inserted] = amplitudes_.try_emplace(basis, amplitude);
  if (!inserted) it->second += amplitude;
  if (it->second == Complex{}) amplitudes_.erase(it);
}

double PureState::norm_squared() const {
  double sum = 0.0;
  for (const auto& [basis, amp] : amplitudes_) sum += std::norm(amp);
  return sum;
}

bool PureState::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

PureState PureState::normalized() const {
  const double n2 = norm_squared();
  if (n2 == 0.0) throw InvalidArgument("PureState::normalized: zero state");
  return scaled(Complex{1.0 / std::sqrt(n2), 0.0});
}

PureState PureState::scaled(Complex factor) const {
  PureState out(modeCount_);
  for (const auto& [basis, amp] : amplitudes_) {
    const Complex v = amp * factor;
    if (v != Complex{}) out.amplitudes_.emplace_hint(out.amplitudes_.end(), basis, v);
  }
  return out;
}

void PureState::prune(double threshold) {
  std::erase_if(amplitudes_, [threshold](const auto& entry) {
    return std::abs(entry.second) < threshold;
  });
}

Complex PureState::inner(const PureState& other) const {
  if (other.modeCount_ != modeCount_) {
    throw InvalidArgument("PureState::inner: mode count mismatch");
  }
  Complex sum{};
  for (const auto& [basis, amp] : amplitudes_) {
    sum += std::conj(amp) * other.amplitude(basis);
  }
  return sum;
}

QubitAmplitudes QubitAmplitudes::make(Complex alpha, Complex beta, double tol) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (!(std::abs(n2 - 1.0) <= tol)) {
    throw InvalidArgument("qubit amplitudes are not normalized (|alpha|^2+|beta|^2 = " +
                          std::to_string(n2) + ")");
  }
  return normalize(alpha, beta);
}

QubitAmplitudes QubitAmplitudes::normalize(Complex alpha, Complex beta) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw InvalidArgument("qubit amplitudes must be finite and not both zero");
  }
  const double s = 1.0 / std::sqrt(n2);
  return {alpha * s, beta * s};
}

double fidelity(const QubitAmplitudes& a, const QubitAmplitudes& b) {
  return std::norm(std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta);
}

namespace {

void compose(int modesLeft, int photonsLeft, std::vector<int>& prefix,
             std::vector<FockBasisState>& out) {
  if (modesLeft == 1) {
    prefix.push_back(photonsLeft);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = 0; k <= photonsLeft; ++k) {
    prefix.push_back(k);
    compose(modesLeft - 1, photonsLeft - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<FockBasisState> enumerate_basis(int modes, int totalPhotons) {
  if (modes < 1) throw InvalidArgument("enumerate_basis: modes must be >= 1");
  if (totalPhotons < 0) throw InvalidArgument("enumerate_basis: negative photon number");
  std::vector<FockBasisState> out;
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(modes));
  compose(modes, totalPhotons, prefix, out);
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  if (!a.is_normalized() || !b.is_normalized()) {
    throw InvalidArgument("tensor: inputs must be normalized");
  }
  PureState out(a.mode_count() + b.mode_count());
  for (const auto& [ba, va] : a.amplitudes()) {
    for (const auto& [bb, vb] : b.amplitudes()) out.add(ba.concat(bb), va * vb);
  }
  return out;
}

std::vector<MeasurementBranch> measure_photon_counts(const PureState& state,
                                                     std::span<const int> measuredModes) {
  const int modeCount = static_cast<int>(state.mode_count());
  if (measuredModes.empty()) {
    throw InvalidArgument("measure_photon_counts: no modes to measure");
  }
  std::vector<int> measured(measuredModes.begin(), measuredModes.end());
  std::sort(measured.begin(), measured.end());
  if (std::adjacent_find(measured.begin(), measured.end()) != measured.end()) {
    throw InvalidArgument("measure_photon_counts: duplicate mode index");
  }
  if (measured.front() < 0 || measured.back() >= modeCount) {
    throw InvalidArgument("measure_photon_counts: mode index out of range");
  }
  if (!state.is_normalized()) {
    throw InvalidArgument("measure_photon_counts: state must be normalized");
  }

  std::vector<int> rest;
  for (int k = 0, j = 0; k < modeCount; ++k) {
    if (j < static_cast<int>(measured.size()) && measured[static_cast<std::size_t>(j)] == k) {
      ++j;
    } else {
      rest.push_back(k);
    }
  }

  std::map<FockBasisState, PureState> grouped;
  for (const auto& [basis, amp] : state.amplitudes()) {
    auto pattern = basis.select(measured);
    auto [it, inserted] = grouped.try_emplace(std::move(pattern), rest.size());
    it->second.add(basis.select(rest), amp);
  }

  std::vector<MeasurementBranch> out;
  out.reserve(grouped.size());
  for (auto& [pattern, unnormalized] : grouped) {
    const double p = unnormalized.norm_squared();
    if (p < kMeasurementCutoff) continue;
    out.push_back({pattern, p, unnormalized.scaled(Complex{1.0 / std::sqrt(p), 0.0})});
  }
  return out;
}

}  // namespace klmtele
