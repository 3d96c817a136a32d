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
#include "klmtele/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "klmtele/error_correction.hpp"
#include "klmtele/errors.hpp"
#include "klmtele/fock.hpp"
#include "klmtele/teleport.hpp"

namespace klmtele {
namespace {

QubitAmplitudes haar_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Complex a{g(rng), g(rng)};
    const Complex b{g(rng), g(rng)};
    if (std::norm(a) + std::norm(b) > 1e-300) return QubitAmplitudes::normalize(a, b);
  }
}

// Outcome-weighted fidelity of one input qubit, no error correction applied.
double input_fidelity(const ResourceCoefficients& rc, const QubitAmplitudes& q,
                      FailureConvention convention) {
  double f = 0.0;
  for (const auto& o : run_analytic(rc, q)) {
    if (o.probability == 0.0) continue;
    double fo = 0.0;
    if (o.conditionalQubit) {
      fo = fidelity(q, *o.conditionalQubit);
    } else if (convention == FailureConvention::MaximallyMixed) {
      fo = 0.5;
    } else {
      fo = *o.collapsedLogical == 0 ? std::norm(q.alpha) : std::norm(q.beta);
    }
    f += o.probability * fo;
  }
  return f;
}

struct Moments {
  double sum = 0.0;
  double sumSq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sumSq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double standard_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sumSq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

void check_agreement(const AvgFidelityEstimate& e) {
  const double allowed = std::max(3.0 * e.standardError, 1e-12);
  if (std::abs(e.monteCarlo - e.closedForm) > allowed) {
    throw ConsistencyError("average fidelity: Monte Carlo " + std::to_string(e.monteCarlo) +
                           " vs closed form " + std::to_string(e.closedForm) +
                           " differ by more than 3 standard errors");
  }
}

std::vector<double> softmax(std::span<const double> logits) {
  // logits hold z_1..z_n; z_0 is pinned to 0.
  std::vector<double> w(logits.size() + 1);
  double top = 0.0;
  for (double z : logits) top = std::max(top, z);
  w[0] = std::exp(-top);
  for (std::size_t i = 0; i < logits.size(); ++i) w[i + 1] = std::exp(logits[i] - top);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return w;
}

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t evaluations = 0;
};

// Minimizes f from x0 with an axis-aligned initial simplex of the given size.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, double step, std::size_t maxEvaluations) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> simplex(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += step;
  std::vector<double> fv(d + 1);
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  while (evals < maxEvaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];

    double spread = fv[worst] - fv[best];
    double size = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
    }
    if ((spread <= 1e-15 && size <= 1e-9) || size <= 1e-12) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);
    }
    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
    };

    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      along(outside ? -0.5 : 0.5, trial2);
      const double fc = eval(trial2);
      if (fc < (outside ? fr : fv[worst])) {
        simplex[worst] = trial2;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < d; ++k) {
            simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          }
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  const auto bestIt = std::min_element(fv.begin(), fv.end());
  const auto idx = static_cast<std::size_t>(bestIt - fv.begin());
  return {simplex[idx], *bestIt, evals};
}

bool better(double value, const std::vector<double>& point, double bestValue,
            const std::vector<double>& bestPoint) {
  if (value != bestValue) return value > bestValue;
  return std::lexicographical_compare(point.begin(), point.end(), bestPoint.begin(),
                                      bestPoint.end());
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> weights, double tol) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw InvalidArgument("SimplexPoint: need n >= 1");
  double s = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("SimplexPoint: negative weight");
    s += w;
  }
  if (!(std::abs(s - 1.0) <= tol)) {
    throw InvalidArgument("SimplexPoint: weights sum to " + std::to_string(s));
  }
}

SimplexPoint SimplexPoint::uniform(int n) {
  if (n < 1) throw InvalidArgument("SimplexPoint::uniform: n >= 1");
  return SimplexPoint(std::vector<double>(static_cast<std::size_t>(n + 1), 1.0 / (n + 1)));
}

double objective_success(const SimplexPoint& p) { return p_success_total_brute(p.weights()); }

double avg_fidelity_closed_form(const SimplexPoint& p, FailureConvention convention) {
  const auto& w = p.weights();
  double overlap = 0.0;
  for (std::size_t m = 1; m < w.size(); ++m) overlap += std::sqrt(w[m - 1] * w[m]);
  double f = 2.0 / 3.0 + overlap / 3.0;
  if (convention == FailureConvention::MaximallyMixed) f -= (w.front() + w.back()) / 12.0;
  return f;
}

AvgFidelityEstimate objective_avg_fidelity(const SimplexPoint& p, std::size_t samples,
                                           std::uint64_t seed, FailureConvention convention) {
  if (samples < 1) throw InvalidArgument("objective_avg_fidelity: samples must be >= 1");
  const auto rc = ResourceCoefficients::from_weights(p.weights(), 1e-10);
  std::mt19937_64 rng(seed);
  Moments mom;
  for (std::size_t s = 0; s < samples; ++s) mom.add(input_fidelity(rc, haar_qubit(rng), convention));
  AvgFidelityEstimate e{mom.mean(), mom.standard_error(), avg_fidelity_closed_form(p, convention),
                        samples};
  check_agreement(e);
  return e;
}

FidelityComparison compare_avg_fidelity(const SimplexPoint& a, const SimplexPoint& b,
                                        std::size_t samples, std::uint64_t seed,
                                        FailureConvention convention) {
  if (samples < 2) throw InvalidArgument("compare_avg_fidelity: samples must be >= 2");
  const auto rca = ResourceCoefficients::from_weights(a.weights(), 1e-10);
  const auto rcb = ResourceCoefficients::from_weights(b.weights(), 1e-10);
  std::mt19937_64 rng(seed);
  Moments ma, mb, md;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto q = haar_qubit(rng);
    const double fa = input_fidelity(rca, q, convention);
    const double fb = input_fidelity(rcb, q, convention);
    ma.add(fa);
    mb.add(fb);
    md.add(fa - fb);
  }
  FidelityComparison c;
  c.a = {ma.mean(), ma.standard_error(), avg_fidelity_closed_form(a, convention), samples};
  c.b = {mb.mean(), mb.standard_error(), avg_fidelity_closed_form(b, convention), samples};
  check_agreement(c.a);
  check_agreement(c.b);
  c.difference = md.mean();
  c.standardError = md.standard_error();
  return c;
}

std::string to_string(Objective objective) {
  return objective == Objective::Success ? "success" : "avgfid";
}

std::string to_string(FailureConvention convention) {
  return convention == FailureConvention::CollapseToBasis ? "collapse" : "mixed";
}

double evaluate(Objective objective, const SimplexPoint& p, FailureConvention convention) {
  return objective == Objective::Success ? objective_success(p)
                                         : avg_fidelity_closed_form(p, convention);
}

OptimizationReport maximize(Objective objective, int n, const MaximizeOptions& options) {
  if (n < 1) throw InvalidArgument("maximize: n must be >= 1");
  if (options.budget == 0) throw InvalidArgument("maximize: budget must be positive");
  if (!(options.gridStep > 0.0 && options.gridStep <= 1.0)) {
    throw InvalidArgument("maximize: grid step must lie in (0, 1]");
  }
  const int restarts = std::max(options.restarts, 32);

  OptimizationReport report;
  report.objective = objective;
  std::vector<double> bestW;
  double bestValue = -std::numeric_limits<double>::infinity();
  std::size_t evals = 0;

  auto consider = [&](std::vector<double> w) {
    const double v = evaluate(objective, SimplexPoint(w, 1e-10), options.convention);
    if (bestW.empty() || better(v, w, bestValue, bestW)) {
      bestValue = v;
      bestW = std::move(w);
    }
    return v;
  };

  std::vector<std::vector<double>> starts;
  std::string method = "nelder-mead(softmax) x" + std::to_string(restarts);

  if (n <= options.gridMaxN) {
    const int steps = static_cast<int>(std::lround(1.0 / options.gridStep));
    for (const auto& cell : enumerate_basis(n + 1, steps)) {
      std::vector<double> w(static_cast<std::size_t>(n + 1));
      for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = cell[static_cast<std::size_t>(i)] / static_cast<double>(steps);
      consider(std::move(w));
      ++evals;
    }
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      z[static_cast<std::size_t>(i - 1)] =
          std::log(std::max(bestW[static_cast<std::size_t>(i)], 1e-6)) -
          std::log(std::max(bestW[0], 1e-6));
    }
    starts.push_back(std::move(z));
    std::ostringstream label;
    label << " + grid(step " << options.gridStep << ")";
    method += label.str();
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> g(0.0, 1.5);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> z(static_cast<std::size_t>(n));
    for (auto& v : z) v = g(rng);
    starts.push_back(std::move(z));
  }

  auto negObjective = [&](std::span<const double> z) {
    return -evaluate(objective, SimplexPoint(softmax(z), 1e-10), options.convention);
  };

  for (const auto& start : starts) {
    std::vector<double> x = start;
    double fx = std::numeric_limits<double>::infinity();
    double step = 1.0;
    // Re-seeding the simplex around the incumbent lets the search leave the
    // ridges of the piecewise-linear objective.
    for (int round = 0; round < 40; ++round) {
      if (evals >= options.budget) break;
      const std::size_t cap =
          std::min<std::size_t>(options.budget - evals, 400 * static_cast<std::size_t>(n + 1));
      auto res = nelder_mead(negObjective, x, step, cap);
      evals += res.evaluations;
      const bool improved = res.fx < fx - 1e-16;
      if (res.fx <= fx) {
        x = std::move(res.x);
        fx = res.fx;
      }
      if (!improved && round > 0) break;
      step = 0.05;
    }
    consider(softmax(x));
    if (evals >= options.budget) {
      report.budgetExhausted = true;
      break;
    }
  }

  report.bestPoint = SimplexPoint(bestW, 1e-10);
  report.bestValue = bestValue;
  report.method = method;
  report.evaluations = evals;

  const auto uniform = SimplexPoint::uniform(n);
  const double uniformValue = evaluate(objective, uniform, options.convention);
  if (objective == Objective::Success) {
    double dist = 0.0;
    for (int i = 0; i <= n; ++i) dist = std::max(dist, std::abs(report.bestPoint[i] - uniform[i]));
    report.certificate.push_back(
        {"best_not_above_uniform", bestValue, uniformValue, bestValue <= uniformValue + 1e-12});
    report.certificate.push_back(
        {"best_within_1e-6_of_uniform", uniformValue - bestValue, 1e-6, uniformValue - bestValue <= 1e-6});
    report.certificate.push_back({"linf_distance_to_uniform", dist, 1e-3, dist <= 1e-3});
    const auto klm = certify_klm_bound(report.bestPoint);
    report.certificate.push_back({"klm_certificate_applicable", klm.applicable ? 1.0 : 0.0, 0.0,
                                  !klm.applicable || klm.all_passed()});
  } else {
    report.certificate.push_back(
        {"best_not_below_uniform", bestValue, uniformValue, bestValue >= uniformValue - 1e-12});
    if (options.samples >= 2) {
      const auto cmp = compare_avg_fidelity(report.bestPoint, uniform, options.samples,
                                            options.seed, options.convention);
      const double z = cmp.standardError > 0.0 ? cmp.difference / cmp.standardError : 0.0;
      report.certificate.push_back({"mc_best", cmp.a.monteCarlo, cmp.a.closedForm, true});
      report.certificate.push_back({"mc_uniform", cmp.b.monteCarlo, cmp.b.closedForm, true});
      report.certificate.push_back(
          {"mc_separation_standard_errors", z, 5.0, n < 2 || z >= 5.0});
    }
  }
  return report;
}

KlmCertificate certify_klm_bound(const SimplexPoint& p) {
  KlmCertificate c;
  const int n = p.n();
  c.threshold = 1.0 / (n + 1);
  c.klmValue = static_cast<double>(n) / (n + 1);
  c.pSuccess = objective_success(p);
  const auto ex = classify_extrema(p.weights());
  if (!ex.strict || ex.maximaIndices.empty()) return c;

  c.applicable = true;
  for (int i : ex.maximaIndices) {
    if (c.largestMaximumIndex < 0 || p[i] > c.largestMaximum) {
      c.largestMaximumIndex = i;
      c.largestMaximum = p[i];
    }
  }
  c.maximumAboveThreshold = c.largestMaximum > c.threshold;
  for (int i : ex.maximaIndices) {
    if (i != c.largestMaximumIndex) c.pairingSlack += p[i];
  }
  for (int i : ex.interiorMinimaIndices) c.pairingSlack -= p[i];
  c.slackNonnegative = c.pairingSlack >= 0.0;
  c.belowKlm = c.pSuccess < c.klmValue;
  return c;
}

}  // namespace klmtele
