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
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "klmtele/coefficient_file.hpp"
#include "klmtele/error_correction.hpp"
#include "klmtele/errors.hpp"

namespace klmtele::cli {
namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw InvalidArgument("not a finite number: '" + s + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
    throw InvalidArgument("seed must be a nonnegative integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InvalidArgument("seed out of range: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

Complex parse_complex_pair(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw InvalidArgument("complex value must be 're,im': '" + s + "'");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

struct Output {
  std::ofstream file;
  std::ostream* stream;

  Output(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw InvalidArgument("cannot open output file " + path);
      stream = &file;
    }
  }
  std::ostream& operator*() { return *stream; }
};

int cmd_teleport(const RunConfig& cfg, std::ostream& out) {
  const auto& rc = *cfg.coefficients;
  const auto& q = *cfg.qubit;
  const int n = rc.n();
  std::optional<OracleRun> oracle;
  if (cfg.oracle) oracle = run_oracle(rc, q, {.maxN = cfg.oracleLimit, .tolerance = cfg.tolerance});

  const auto outcomes = run_analytic(rc, q);
  double pS = 0.0;
  for (int m = 1; m <= n; ++m) pS += p_success_joint(m, rc);

  Output o(cfg.outPath, out);
  if (cfg.format == OutputFormat::Csv) {
    *o << "m,probability,alpha_re,alpha_im,beta_re,beta_im,p_success_given_m,p_success_joint\n";
    for (const auto& oc : outcomes) {
      *o << oc.m << ',' << fmt17(oc.probability) << ',';
      if (oc.conditionalQubit) {
        const auto& c = *oc.conditionalQubit;
        *o << fmt17(c.alpha.real()) << ',' << fmt17(c.alpha.imag()) << ',' << fmt17(c.beta.real())
           << ',' << fmt17(c.beta.imag()) << ',';
        *o << fmt17(p_success_given_m(oc.m, rc, q)) << ',' << fmt17(p_success_joint(oc.m, rc));
      } else {
        *o << ",,,,0,0";
      }
      *o << '\n';
    }
    *o << "# p_success," << fmt17(pS) << '\n';
    if (oracle) {
      *o << "# oracle_patterns," << oracle->patterns.size() << '\n';
      *o << "# oracle_max_deviation," << fmt17(oracle->maxDeviation) << '\n';
      *o << "# oracle_phase_depends_only_on_m," << (oracle->phaseDependsOnlyOnM ? "true" : "false")
         << '\n';
    }
    return kOk;
  }

  ordered_json doc;
  doc["n"] = n;
  doc["qubit"] = {{"alpha", complex_json(q.alpha)}, {"beta", complex_json(q.beta)}};
  doc["outcomes"] = ordered_json::array();
  for (const auto& oc : outcomes) {
    ordered_json row;
    row["m"] = oc.m;
    row["probability"] = oc.probability;
    row["qubit_mode"] = oc.qubitMode ? ordered_json(*oc.qubitMode) : ordered_json();
    if (oc.conditionalQubit) {
      row["conditional"] = {{"alpha", complex_json(oc.conditionalQubit->alpha)},
                            {"beta", complex_json(oc.conditionalQubit->beta)}};
      row["p_success_given_m"] = p_success_given_m(oc.m, rc, q);
    } else {
      row["conditional"] = nullptr;
      row["p_success_given_m"] = oc.is_success_class(n) ? ordered_json() : ordered_json(0.0);
    }
    row["collapsed_logical"] = oc.collapsedLogical ? ordered_json(*oc.collapsedLogical) : ordered_json();
    row["p_success_joint"] = p_success_joint(oc.m, rc);
    doc["outcomes"].push_back(std::move(row));
  }
  doc["p_success"] = pS;
  if (oracle) {
    ordered_json patterns = ordered_json::array();
    for (const auto& p : oracle->patterns) {
      patterns.push_back({{"m", p.m},
                          {"pattern", p.pattern->occupations()},
                          {"probability", p.probability},
                          {"corrective_phase", complex_json(p.correctivePhase)}});
    }
    doc["oracle"] = {{"max_deviation", oracle->maxDeviation},
                     {"phase_depends_only_on_m", oracle->phaseDependsOnlyOnM},
                     {"patterns", std::move(patterns)}};
  }
  *o << doc.dump(2) << '\n';
  return kOk;
}

std::string join_indices(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

int cmd_psuccess(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg.outPath, out);
  if (cfg.randomCoefficientSeed && cfg.trials > 1) {
    double maxDiff = 0.0;
    int strictCount = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto w = random_simplex_weights(cfg.n, *cfg.randomCoefficientSeed + static_cast<std::uint64_t>(t));
      const auto closed = p_success_closed_form(w);
      if (!closed) continue;
      ++strictCount;
      maxDiff = std::max(maxDiff, std::abs(*closed - p_success_total_brute(w)));
    }
    if (cfg.format == OutputFormat::Csv) {
      *o << "quantity,value\n";
      *o << "trials," << cfg.trials << "\nstrict," << strictCount << "\nmax_difference,"
         << fmt17(maxDiff) << '\n';
    } else {
      ordered_json doc{{"n", cfg.n}, {"trials", cfg.trials}, {"strict", strictCount},
                       {"max_difference", maxDiff}};
      *o << doc.dump(2) << '\n';
    }
    return kOk;
  }

  const auto& rc = *cfg.coefficients;
  const double brute = p_success_total_brute(rc);
  const auto closed = p_success_closed_form(rc);
  const auto ex = classify_extrema(rc);
  if (cfg.format == OutputFormat::Csv) {
    *o << "quantity,value\n";
    *o << "n," << rc.n() << '\n';
    *o << "brute," << fmt17(brute) << '\n';
    *o << "closed_form," << (closed ? fmt17(*closed) : "inapplicable (plateau)") << '\n';
    *o << "difference," << (closed ? fmt17(std::abs(*closed - brute)) : "") << '\n';
    *o << "strict," << (ex.strict ? "true" : "false") << '\n';
    *o << "maxima," << join_indices(ex.maximaIndices) << '\n';
    *o << "interior_minima," << join_indices(ex.interiorMinimaIndices) << '\n';
  } else {
    ordered_json doc;
    doc["n"] = rc.n();
    doc["brute"] = brute;
    doc["closed_form"] = closed ? ordered_json(*closed) : ordered_json("inapplicable (plateau)");
    doc["difference"] = closed ? ordered_json(std::abs(*closed - brute)) : ordered_json();
    doc["strict"] = ex.strict;
    doc["maxima"] = ex.maximaIndices;
    doc["interior_minima"] = ex.interiorMinimaIndices;
    *o << doc.dump(2) << '\n';
  }
  return kOk;
}

ordered_json report_json(const OptimizationReport& r, const RunConfig& cfg, int n) {
  ordered_json doc;
  doc["objective"] = to_string(r.objective);
  doc["n"] = n;
  doc["seed"] = cfg.seed;
  doc["best_value"] = r.bestValue;
  doc["best_point"] = r.bestPoint.weights();
  doc["method"] = r.method;
  doc["evaluations"] = r.evaluations;
  doc["budget_exhausted"] = r.budgetExhausted;
  const auto uniform = SimplexPoint::uniform(n);
  if (r.objective == Objective::Success) {
    doc["uniform_reference"] = static_cast<double>(n) / (n + 1);
  } else {
    doc["convention"] = to_string(cfg.convention);
    doc["uniform_reference"] = avg_fidelity_closed_form(uniform, cfg.convention);
  }
  ordered_json cert = ordered_json::array();
  for (const auto& c : r.certificate) {
    cert.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"passed", c.passed}});
  }
  doc["certificate"] = std::move(cert);
  return doc;
}

MaximizeOptions maximize_options(const RunConfig& cfg, bool withSamples) {
  MaximizeOptions opt;
  opt.restarts = cfg.restarts;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  opt.samples = withSamples ? cfg.samples : 0;
  opt.convention = cfg.convention;
  return opt;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const bool mc = cfg.objective == Objective::AvgFidelity;
  const auto report = maximize(cfg.objective, cfg.n, maximize_options(cfg, mc));
  Output o(cfg.outPath, out);
  *o << report_json(report, cfg, cfg.n).dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream table;
  table << "n,p_success_uniform,avg_fid_uniform,avg_fid_optimized\n";
  for (int n = cfg.nMin; n <= cfg.nMax; ++n) {
    const auto uniform = SimplexPoint::uniform(n);
    const auto opt = maximize(Objective::AvgFidelity, n, maximize_options(cfg, false));
    // Monte-Carlo cross-check of both closed-form columns; throws on mismatch.
    objective_avg_fidelity(uniform, cfg.samples, cfg.seed, cfg.convention);
    objective_avg_fidelity(opt.bestPoint, cfg.samples, cfg.seed, cfg.convention);
    table << n << ',' << fmt17(objective_success(uniform)) << ','
          << fmt17(avg_fidelity_closed_form(uniform, cfg.convention)) << ','
          << fmt17(opt.bestValue) << '\n';
  }
  Output o(cfg.outPath, out);
  *o << table.str();
  return kOk;
}

}  // namespace

std::vector<double> random_simplex_weights(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("random coefficients need n >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  double s = 0.0;
  for (auto& v : w) s += (v = e(rng));
  for (auto& v : w) v /= s;
  return w;
}

ResourceCoefficients resolve_coefficients(const std::string& source, std::optional<int> n,
                                          bool squared, bool renormalize) {
  auto checkN = [&](const ResourceCoefficients& rc) {
    if (n && *n != rc.n()) {
      throw InvalidArgument("--n " + std::to_string(*n) + " does not match coefficient count (n = " +
                            std::to_string(rc.n()) + ")");
    }
    return rc;
  };
  if (source == "uniform") {
    if (!n) throw InvalidArgument("--coeffs uniform requires --n");
    return ResourceCoefficients::uniform(*n);
  }
  if (source.rfind("random:", 0) == 0) {
    if (!n) throw InvalidArgument("--coeffs random:<seed> requires --n");
    const auto w = random_simplex_weights(*n, parse_seed(source.substr(7)));
    return ResourceCoefficients::from_weights(w, 1e-10);
  }
  if (source.rfind("inline:", 0) == 0) {
    std::vector<Complex> c;
    for (const auto& tok : split(source.substr(7), ',')) {
      const double v = parse_double(tok);
      if (squared) {
        if (v < 0.0) throw InvalidArgument("squared moduli must be nonnegative");
        c.emplace_back(std::sqrt(v), 0.0);
      } else {
        c.emplace_back(v, 0.0);
      }
    }
    if (c.size() < 2) throw InvalidArgument("inline coefficients need at least two values");
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    if (!renormalize && !(std::abs(s - 1.0) <= kCoefficientFileTolerance)) {
      throw InvalidArgument("inline coefficients have sum |c_i|^2 = " + fmt17(s) +
                            " (pass --renormalize to rescale)");
    }
    return checkN(ResourceCoefficients::normalized(std::move(c)));
  }
  const std::string path = source.rfind("file:", 0) == 0 ? source.substr(5) : source;
  if (!std::filesystem::exists(path)) {
    throw InvalidArgument("unknown coefficient source '" + source +
                          "' (expected uniform, inline:..., random:<seed>, or a file)");
  }
  return checkN(load_coefficient_file(path, renormalize));
}

QubitAmplitudes parse_qubit(const std::string& spec) {
  if (spec.rfind("random:", 0) == 0) {
    std::mt19937_64 rng(parse_seed(spec.substr(7)));
    std::normal_distribution<double> g(0.0, 1.0);
    const Complex a{g(rng), g(rng)};
    const Complex b{g(rng), g(rng)};
    return QubitAmplitudes::normalize(a, b);
  }
  // The separating '+' is the one not part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = 1; i < spec.size(); ++i) {
    if (spec[i] == '+' && spec[i - 1] != 'e' && spec[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  if (split_at == std::string::npos) {
    throw InvalidArgument("qubit must be 'alpha_re,alpha_im+beta_re,beta_im' or random:<seed>");
  }
  return QubitAmplitudes::make(parse_complex_pair(spec.substr(0, split_at)),
                               parse_complex_pair(spec.substr(split_at + 1)),
                               kCoefficientFileTolerance);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear-optical teleportation with nonmaximally entangled resources", "klmtele"};
  app.require_subcommand(1);

  std::optional<int> n;
  std::string coeffs = "uniform";
  std::string qubit = "1,0+0,0";
  std::string format = "csv";
  std::string objective = "success";
  std::string convention = "collapse";
  bool squared = false, renormalize = false;
  RunConfig cfg;

  auto addCoeffOptions = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Resource size n (number of photons in the entangled state)");
    sub->add_option("--coeffs", coeffs,
                    "Coefficient source: uniform | inline:v0,v1,... | random:<seed> | <file.json>");
    sub->add_flag("--squared", squared, "Inline values are squared moduli |c_i|^2");
    sub->add_flag("--renormalize", renormalize, "Rescale coefficients to unit norm");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.outPath, "Output file (default: stdout)");
  };

  auto* teleport = app.add_subcommand("teleport", "Outcome table of the teleportation protocol");
  addCoeffOptions(teleport);
  teleport->add_option("--qubit", qubit, "Input qubit 'a_re,a_im+b_re,b_im' or random:<seed>");
  teleport->add_flag("--oracle", cfg.oracle, "Cross-check against the full Fock-space simulation");
  teleport->add_option("--oracle-limit", cfg.oracleLimit, "Largest n accepted by the oracle")
      ->check(CLI::Range(1, 8));
  teleport->add_option("--tol", cfg.tolerance, "Oracle reconciliation tolerance")
      ->check(CLI::PositiveNumber);

  auto* psuccess = app.add_subcommand("psuccess", "Compare the pairwise-minima sum with the extrema formula");
  addCoeffOptions(psuccess);
  psuccess->add_option("--trials", cfg.trials, "Random sequences to test (random:<seed> source)")
      ->check(CLI::Range(1, 100000000));

  auto* optimize = app.add_subcommand("optimize", "Maximize an objective over resource states");
  optimize->add_option("--n", n, "Resource size n")->required();
  optimize->add_option("--objective", objective, "success | avgfid")
      ->check(CLI::IsMember({"success", "avgfid"}));
  optimize->add_option("--budget", cfg.budget, "Objective evaluation budget")->check(CLI::PositiveNumber);
  optimize->add_option("--restarts", cfg.restarts, "Nelder-Mead restarts (minimum 32)")
      ->check(CLI::Range(1, 100000));
  optimize->add_option("--samples", cfg.samples, "Monte-Carlo samples for avgfid certification")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000'000}));
  optimize->add_option("--seed", cfg.seed, "Random seed");
  optimize->add_option("--convention", convention, "Failure-outcome convention: collapse | mixed")
      ->check(CLI::IsMember({"collapse", "mixed"}));
  optimize->add_option("--out", cfg.outPath, "Output file (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "CSV of uniform and optimized values over a range of n");
  sweep->add_option("--n-min", cfg.nMin, "First n")->check(CLI::Range(1, 64));
  sweep->add_option("--n-max", cfg.nMax, "Last n")->check(CLI::Range(1, 64));
  sweep->add_option("--samples", cfg.samples, "Monte-Carlo samples per cross-check")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000'000}));
  sweep->add_option("--seed", cfg.seed, "Random seed");
  sweep->add_option("--budget", cfg.budget, "Optimizer evaluation budget per n")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--convention", convention, "Failure-outcome convention: collapse | mixed")
      ->check(CLI::IsMember({"collapse", "mixed"}));
  sweep->add_option("--out", cfg.outPath, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    cfg.objective = objective == "avgfid" ? Objective::AvgFidelity : Objective::Success;
    cfg.convention =
        convention == "mixed" ? FailureConvention::MaximallyMixed : FailureConvention::CollapseToBasis;
    if (n) {
      if (*n < 1) throw InvalidArgument("--n must be >= 1");
      cfg.n = *n;
    }

    if (cfg.subcommand == "teleport" || cfg.subcommand == "psuccess") {
      if (cfg.subcommand == "psuccess" && coeffs.rfind("random:", 0) == 0) {
        if (!n) throw InvalidArgument("--coeffs random:<seed> requires --n");
        cfg.randomCoefficientSeed = parse_seed(coeffs.substr(7));
      }
      if (cfg.trials > 1 && !cfg.randomCoefficientSeed) {
        throw InvalidArgument("--trials requires --coeffs random:<seed>");
      }
      cfg.coefficients = resolve_coefficients(coeffs, n, squared, renormalize);
      cfg.n = cfg.coefficients->n();
    }
    if (cfg.subcommand == "teleport") {
      cfg.qubit = parse_qubit(qubit);
      if (cfg.oracle && cfg.n > cfg.oracleLimit) {
        throw InvalidArgument("oracle refused: n = " + std::to_string(cfg.n) +
                              " exceeds the oracle limit n <= " + std::to_string(cfg.oracleLimit));
      }
    }
    if (cfg.subcommand == "sweep" && cfg.nMin > cfg.nMax) {
      throw InvalidArgument("--n-min must not exceed --n-max");
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (cfg.subcommand == "teleport") return cmd_teleport(cfg, out);
    if (cfg.subcommand == "psuccess") return cmd_psuccess(cfg, out);
    if (cfg.subcommand == "optimize") return cmd_optimize(cfg, out);
    return cmd_sweep(cfg, out);
  } catch (const ConsistencyError& e) {
    err << "internal consistency failure: " << e.what() << '\n';
    return kConsistencyError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace klmtele::cli
