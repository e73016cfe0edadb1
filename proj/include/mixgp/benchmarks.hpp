#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixgp/design_space.hpp"
#include "mixgp/doe.hpp"
#include "mixgp/errors.hpp"
#include "mixgp/gp.hpp"
#include "mixgp/kernels.hpp"

namespace mixgp::bench {

// ---- metrics --------------------------------------------------------------

inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("metric inputs differ in length");
  if (a == 0) throw InvalidArgument("metric inputs are empty");
}

inline double rmse(std::span<const double> predictions, std::span<const double> truths) {
  check_lengths(predictions.size(), truths.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double e = predictions[i] - truths[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(truths.size()));
}

/// log(mean(err^2 / variance)).
inline double pva(std::span<const double> predictions, std::span<const double> variances,
                  std::span<const double> truths) {
  check_lengths(predictions.size(), truths.size());
  check_lengths(variances.size(), truths.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (!(variances[i] > 0.0)) throw InvalidArgument("pva needs positive variances");
    const double e = predictions[i] - truths[i];
    sum += e * e / variances[i];
  }
  return std::log(sum / static_cast<double>(truths.size()));
}

/// 100 * ||pred - truth|| / ||truth||.
inline double relative_error_pct(std::span<const double> predictions, std::span<const double> truths) {
  check_lengths(predictions.size(), truths.size());
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    err += (predictions[i] - truths[i]) * (predictions[i] - truths[i]);
    ref += truths[i] * truths[i];
  }
  if (!(ref > 0.0)) throw InvalidArgument("relative error needs a non-zero reference");
  return 100.0 * std::sqrt(err / ref);
}

// ---- problems -------------------------------------------------------------

inline DesignSpace cosine_space() {
  return DesignSpace({VariableSpec::continuous("x", 0.0, 1.0), VariableSpec::categorical("c", 13)});
}

/// Two groups of phase-shifted cosines: levels 1-9 and levels 10-13.
inline double cosine_function(double x, int c) {
  if (!(x >= 0.0 && x <= 1.0)) throw OutOfBounds(0, x);
  if (c < 1 || c > 13) throw LevelOutOfRange(1, c);
  const double pi = std::numbers::pi;
  const double cd = static_cast<double>(c);
  if (c <= 9) return std::cos(3.5 * pi * x + (0.4 * pi + pi / 15.0 * cd) - cd / 20.0);
  return std::cos(3.5 * pi * x - cd / 20.0);
}

/// Normalized moments of inertia I/S^2 for four shapes (square, circle, and two
/// I-profiles), each full, thick and hollow. Full square is 1/12 and full
/// circle 1/(4 pi).
inline std::vector<double> default_inertia() {
  return {0.0833, 0.139, 0.380, 0.0796, 0.133, 0.363, 0.0859, 0.136, 0.360, 0.0922, 0.138, 0.369};
}

struct CantileverConfig {
  double force = 50e3;           // N
  double young_modulus = 200e9;  // Pa
  std::vector<double> inertia = default_inertia();

  void validate() const {
    if (inertia.size() != 12) throw InvalidArgument("cantilever needs 12 normalized inertia values");
    for (double v : inertia)
      if (!(v > 0.0)) throw InvalidArgument("normalized inertia values must be positive");
    if (!(force > 0.0 && young_modulus > 0.0)) throw InvalidArgument("force and modulus must be positive");
  }
};

inline DesignSpace cantilever_space() {
  return DesignSpace({VariableSpec::categorical("I", 12), VariableSpec::continuous("L", 10.0, 20.0),
                      VariableSpec::continuous("S", 1.0, 2.0)});
}

/// Tip deflection F L^3 / (3 E S^2 I~) in meters.
inline double cantilever_deflection(const CantileverConfig& cfg, int level, double length, double surface) {
  cfg.validate();
  if (level < 1 || level > 12) throw LevelOutOfRange(0, level);
  if (!(length >= 10.0 && length <= 20.0)) throw OutOfBounds(1, length);
  if (!(surface >= 1.0 && surface <= 2.0)) throw OutOfBounds(2, surface);
  const double I = cfg.inertia[static_cast<std::size_t>(level - 1)];
  return cfg.force * length * length * length / (3.0 * cfg.young_modulus * surface * surface * I);
}

inline DesignSpace dragon_space() {
  return DesignSpace({
      VariableSpec::continuous("fan_pressure_ratio", 1.05, 1.3),
      VariableSpec::continuous("wing_aspect_ratio", 8.0, 12.0),
      VariableSpec::continuous("wing_sweep_deg", 15.0, 40.0),
      VariableSpec::continuous("wing_taper_ratio", 0.2, 0.5),
      VariableSpec::continuous("ht_aspect_ratio", 3.0, 6.0),
      VariableSpec::continuous("ht_sweep_deg", 20.0, 40.0),
      VariableSpec::continuous("ht_taper_ratio", 0.3, 0.5),
      VariableSpec::continuous("tofl_m", 1800.0, 2500.0),
      VariableSpec::continuous("toc_vertical_speed_ftmin", 300.0, 800.0),
      VariableSpec::continuous("climb_slope_rad", 0.075, 0.15),
      VariableSpec::categorical("architecture", 9),
      VariableSpec::categorical("turboshaft_layout", 2),
  });
}

struct DragonAudit {
  std::size_t n_continuous = 0;
  std::size_t n_categorical = 0;
  std::size_t relaxed = 0;
  std::size_t gd = 0;
  std::size_t cr = 0;
  std::size_t ehh = 0;

  bool consistent() const { return relaxed == 21 && n_categorical == 2 && gd == 12 && cr == 21 && ehh == 47; }

  std::string summary() const {
    return "relaxed=" + std::to_string(relaxed) + " gd=" + std::to_string(gd) + " cr=" + std::to_string(cr) +
           " ehh=" + std::to_string(ehh);
  }
};

inline DragonAudit dragon_space_audit() {
  const auto space = dragon_space();
  DragonAudit a;
  a.n_continuous = space.n_continuous();
  a.n_categorical = space.n_categorical();
  a.relaxed = space.relaxed_dim();
  a.gd = hyperparameter_count(space, CategoricalKernelKind::GD);
  a.cr = hyperparameter_count(space, CategoricalKernelKind::CR);
  a.ehh = hyperparameter_count(space, CategoricalKernelKind::EHH);
  return a;
}

// ---- runners --------------------------------------------------------------

struct BenchmarkResult {
  CategoricalKernelKind kind = CategoricalKernelKind::EHH;
  ExponentPower p = ExponentPower::Squared;
  std::size_t n_hyper = 0;
  double rmse = 0.0;           // problem units
  double rmse_reported = 0.0;  // rmse in the report unit
  std::string rmse_unit;
  double rel_rmse_pct = 0.0;  // 100 ||pred - truth|| / ||truth||
  double pva = 0.0;
  double log_likelihood = 0.0;
  double fit_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty when the fit succeeded

  bool ok() const { return error.empty(); }
};

struct BenchmarkOptions {
  ExponentPower p = ExponentPower::Squared;
  FitConfig fit;
};

struct BenchmarkRun {
  std::string problem;
  std::vector<BenchmarkResult> results;
  /// Fitted level matrix of the first categorical variable, per kind.
  std::vector<std::optional<Eigen::MatrixXd>> level_matrices;
};

struct Problem {
  std::string name;
  DesignSpace space;
  std::function<double(const MixedPoint&)> function;
  std::vector<MixedPoint> validation;
  double report_scale = 1.0;
  std::string report_unit;
};

inline Problem cosine_problem(int grid_points = 1000) {
  Problem pr{"cosine", cosine_space(),
             [](const MixedPoint& w) { return cosine_function(w.continuous[0], w.categorical[0]); }, {}, 1.0, ""};
  pr.validation = grid(pr.space, {grid_points});
  return pr;
}

inline Problem cantilever_problem(const CantileverConfig& cfg = {}, int grid_points = 30) {
  cfg.validate();
  Problem pr{"beam", cantilever_space(),
             [cfg](const MixedPoint& w) {
               return cantilever_deflection(cfg, w.categorical[0], w.continuous[0], w.continuous[1]);
             },
             {}, 100.0, "cm"};
  pr.validation = grid(pr.space, {grid_points, grid_points});
  return pr;
}

/// Draws one LHS training set, then fits and validates each kind on it. A
/// failing fit is recorded in its row and does not stop the other kinds.
inline BenchmarkRun run_benchmark(const Problem& problem, const std::vector<CategoricalKernelKind>& kinds,
                                  int doe_size, std::uint64_t seed, const BenchmarkOptions& options = {}) {
  BenchmarkRun run;
  run.problem = problem.name;
  auto points = lhs(problem.space, doe_size, seed);
  std::vector<double> targets;
  for (const auto& w : points) targets.push_back(problem.function(w));
  const Dataset data(problem.space, std::move(points), std::move(targets));

  std::vector<double> truths;
  truths.reserve(problem.validation.size());
  for (const auto& w : problem.validation) truths.push_back(problem.function(w));

  for (auto kind : kinds) {
    BenchmarkResult r;
    r.kind = kind;
    r.p = options.p;
    r.n_hyper = hyperparameter_count(problem.space, kind);
    r.seed = seed;
    r.rmse_unit = problem.report_unit;
    std::optional<Eigen::MatrixXd> level_matrix;
    try {
      FitConfig cfg = options.fit;
      cfg.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const GpModel model = fit(data, kind, options.p, cfg);
      r.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.log_likelihood = model.log_likelihood();

      std::vector<double> means;
      std::vector<double> vars;
      means.reserve(truths.size());
      vars.reserve(truths.size());
      const double var_floor = 1e-12 * model.sigma2_hat();
      for (const auto& w : problem.validation) {
        const auto [m, v] = model.predict(w);
        means.push_back(m);
        vars.push_back(std::max(v, var_floor > 0.0 ? var_floor : std::numeric_limits<double>::min()));
      }
      r.rmse = rmse(means, truths);
      r.rmse_reported = r.rmse * problem.report_scale;
      r.rel_rmse_pct = relative_error_pct(means, truths);
      r.pva = pva(means, vars, truths);
      if (!model.kernel().level_matrices().empty()) level_matrix = model.kernel().level_matrices().front();
    } catch (const Error& e) {
      r.error = e.what();
    }
    run.results.push_back(std::move(r));
    run.level_matrices.push_back(std::move(level_matrix));
  }
  return run;
}

inline BenchmarkRun run_cosine_benchmark(const std::vector<CategoricalKernelKind>& kinds, int doe_size,
                                         std::uint64_t seed, const BenchmarkOptions& options = {}) {
  return run_benchmark(cosine_problem(), kinds, doe_size, seed, options);
}

inline BenchmarkRun run_cantilever_benchmark(const std::vector<CategoricalKernelKind>& kinds, int doe_size,
                                             std::uint64_t seed, const CantileverConfig& cfg = {},
                                             const BenchmarkOptions& options = {}) {
  return run_benchmark(cantilever_problem(cfg), kinds, doe_size, seed, options);
}

/// One row per result.
inline void write_report(std::ostream& os, const BenchmarkRun& run) {
  os << "problem,kernel,p,n_hyper,rmse,rmse_unit,rel_rmse_pct,pva,log_likelihood,fit_seconds,seed,status\n";
  os.precision(10);
  for (const auto& r : run.results) {
    os << run.problem << ',' << to_string(r.kind) << ',' << to_int(r.p) << ',' << r.n_hyper << ',';
    if (r.ok()) {
      os << r.rmse_reported << ',' << (r.rmse_unit.empty() ? "-" : r.rmse_unit) << ',' << r.rel_rmse_pct << ','
         << r.pva << ',' << r.log_likelihood << ',' << r.fit_seconds << ',' << r.seed << ",ok\n";
    } else {
      std::string msg = r.error;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      os << "nan,-,nan,nan,nan,nan," << r.seed << ",error: " << msg << '\n';
    }
  }
}

}  // namespace mixgp::bench
