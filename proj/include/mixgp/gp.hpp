#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "mixgp/design_space.hpp"
#include "mixgp/errors.hpp"
#include "mixgp/kernels.hpp"
#include "mixgp/optimizer.hpp"

namespace mixgp {

/// Search ranges for the hyperparameters. Continuous, integer and GD
/// hyperparameters are searched in log space; CR/FE diagonal entries get half
/// the GD upper bound since each enters a level correlation twice.
/// Default range keeps unit-distance correlations exp(-theta) within
/// [exp(-20), 0.999999].
struct HyperparameterBounds {
  double log_theta_lower = std::log(1e-6);
  double log_theta_upper = std::log(20.0);
  double exponential_angle_upper = std::numbers::pi / 2.0;  // EHH, FE
  double hh_angle_upper = std::numbers::pi;
};

/// Maps optimizer coordinates to hyperparameters and back. Coordinate order
/// follows HyperparameterSet::flat().
class SearchBox {
 public:
  SearchBox(const DesignSpace& space, CategoricalKernelKind kind, const HyperparameterBounds& hb = {},
            double epsilon = kDefaultEpsilon)
      : space_(space), kind_(kind), epsilon_(epsilon) {
    auto push = [this](Coordinate c, double lo, double hi) {
      coords_.push_back(c);
      bounds_.lower.push_back(lo);
      bounds_.upper.push_back(hi);
    };
    for (std::size_t j = 0; j < space.n_continuous() + space.n_integer(); ++j) {
      push(Coordinate::Log, hb.log_theta_lower, hb.log_theta_upper);
    }
    // CR/FE diagonals hold theta / 2.
    const double half_lower = hb.log_theta_lower - std::numbers::ln2;
    const double half_upper = hb.log_theta_upper - std::numbers::ln2;
    const double angle_upper = kind == CategoricalKernelKind::HH ? hb.hh_angle_upper : hb.exponential_angle_upper;
    for (int L : space.level_counts()) {
      switch (kind) {
        case CategoricalKernelKind::GD: push(Coordinate::Log, hb.log_theta_lower, hb.log_theta_upper); break;
        case CategoricalKernelKind::CR:
          for (int j = 0; j < L; ++j) push(Coordinate::Log, half_lower, half_upper);
          break;
        case CategoricalKernelKind::EHH:
        case CategoricalKernelKind::HH:
          for (std::size_t j = 0; j < hyperparameter_count(kind, L); ++j) push(Coordinate::Angle, 0.0, angle_upper);
          break;
        case CategoricalKernelKind::FE:
          for (int k = 0; k < L; ++k)
            for (int j = 0; j <= k; ++j) {
              if (j == k) {
                push(Coordinate::Log, half_lower, half_upper);
              } else {
                push(Coordinate::Angle, 0.0, angle_upper);
              }
            }
          break;
      }
    }
    bounds_.validate();
  }

  const BoxBounds& bounds() const { return bounds_; }
  std::size_t size() const { return coords_.size(); }

  HyperparameterSet to_hyperparameters(std::span<const double> x) const {
    if (x.size() != coords_.size()) throw DimensionMismatch("search vector has the wrong length");
    std::vector<double> flat(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) flat[j] = coords_[j] == Coordinate::Log ? std::exp(x[j]) : x[j];
    return HyperparameterSet::from_flat(space_, kind_, flat, epsilon_);
  }

  std::vector<double> from_hyperparameters(const HyperparameterSet& h) const {
    auto flat = h.flat();
    if (flat.size() != coords_.size()) throw DimensionMismatch("hyperparameter set has the wrong length");
    for (std::size_t j = 0; j < flat.size(); ++j) {
      if (coords_[j] == Coordinate::Log) flat[j] = std::log(flat[j]);
    }
    return flat;
  }

 private:
  enum class Coordinate { Log, Angle };

  DesignSpace space_;
  CategoricalKernelKind kind_;
  double epsilon_;
  std::vector<Coordinate> coords_;
  BoxBounds bounds_;
};

/// Training inputs in unit coordinates.
inline std::vector<MixedPoint> normalized_points(const Dataset& data) {
  std::vector<MixedPoint> out;
  out.reserve(data.size());
  for (const auto& p : data.points()) out.push_back(normalize(data.space(), p));
  return out;
}

/// [R]_{rs} = k(w_r, w_s) over already normalized points.
inline Eigen::MatrixXd correlation_matrix(const std::vector<MixedPoint>& unit_points, const MixedKernel& kernel) {
  // Self-correlations validate every point once; the loop below repeats the
  // kernel's arithmetic without per-pair checks.
  for (const auto& w : unit_points) kernel(w, w);
  const auto& theta_cont = kernel.hyperparameters().theta_cont();
  const auto& theta_int = kernel.hyperparameters().theta_int();
  const auto& levels = kernel.level_matrices();
  const ExponentPower p = kernel.exponent();
  const auto factor = [p](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& theta) {
    if (a.empty()) return 1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sum += theta[j] * detail::power_distance(a[j], b[j], p);
    return std::exp(-sum);
  };

  const auto n = static_cast<Eigen::Index>(unit_points.size());
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& a = unit_points[static_cast<std::size_t>(r)];
    R(r, r) = 1.0;
    for (Eigen::Index s = 0; s < r; ++s) {
      const auto& b = unit_points[static_cast<std::size_t>(s)];
      double k = factor(a.continuous, b.continuous, theta_cont) * factor(a.integer, b.integer, theta_int);
      for (std::size_t i = 0; i < levels.size(); ++i) k *= levels[i](a.categorical[i] - 1, b.categorical[i] - 1);
      R(r, s) = R(s, r) = k;
    }
  }
  return R;
}

inline Eigen::MatrixXd correlation_matrix(const Dataset& data, const HyperparameterSet& theta, ExponentPower p) {
  theta.check_against(data.space());
  return correlation_matrix(normalized_points(data), MixedKernel(theta, p));
}

inline constexpr double kMaxJitter = 1e-4;

/// Cholesky factor of R + jitter I. Jitter starts at `jitter` and grows by
/// factors of 10 up to 1e-4 while the factorization fails.
struct JitteredCholesky {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

inline JitteredCholesky factorize_with_jitter(const Eigen::MatrixXd& R, double jitter) {
  if (!(jitter > 0.0)) throw InvalidArgument("jitter must be positive");
  const Eigen::Index n = R.rows();
  for (int k = 0;; ++k) {
    const double tau = jitter * std::pow(10.0, k);
    if (k > 0 && tau > kMaxJitter * (1.0 + 1e-9)) break;
    Eigen::MatrixXd L = R;
    L.diagonal().array() += tau;
    const Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(L);
    if (llt.info() == Eigen::Success && L.diagonal().allFinite() && (L.diagonal().array() > 0.0).all()) {
      L.triangularView<Eigen::StrictlyUpper>().setZero();
      return {std::move(L), tau};
    }
    if (n == 0) break;
  }
  throw NumericalFailure("Cholesky factorization failed even with jitter 1e-4");
}

/// Closed-form trend, variance and likelihood at fixed hyperparameters.
struct LikelihoodTerms {
  JitteredCholesky chol;
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double log_det = 0.0;
  double value = 0.0;
  Eigen::VectorXd alpha;     // K^-1 (y - 1 mu)
  Eigen::VectorXd kinv_one;  // K^-1 1
  double one_kinv_one = 0.0;
};

/// sigma2 floor: 1e-12 var(y), or 1e-12 when y is constant.
inline double variance_floor(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  return var > 0.0 ? 1e-12 * var : 1e-12;
}

inline LikelihoodTerms likelihood_terms(const Eigen::MatrixXd& R, const Eigen::VectorXd& y, double jitter) {
  if (R.rows() != y.size() || R.cols() != y.size()) throw DimensionMismatch("R and y differ in size");
  LikelihoodTerms t;
  t.chol = factorize_with_jitter(R, jitter);
  const auto n = static_cast<double>(y.size());
  const auto L = t.chol.lower.triangularView<Eigen::Lower>();
  const auto Lt = t.chol.lower.transpose().triangularView<Eigen::Upper>();

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
  t.kinv_one = Lt.solve(L.solve(ones));
  t.one_kinv_one = ones.dot(t.kinv_one);
  const Eigen::VectorXd kinv_y = Lt.solve(L.solve(y));
  t.mu_hat = ones.dot(kinv_y) / t.one_kinv_one;

  const Eigen::VectorXd centered = y - t.mu_hat * ones;
  const Eigen::VectorXd v = L.solve(centered);
  t.sigma2_hat = std::max(v.squaredNorm() / n, variance_floor(y));
  t.alpha = Lt.solve(v);
  t.log_det = 2.0 * t.chol.lower.diagonal().array().log().sum();
  t.value = -0.5 * n * std::log(t.sigma2_hat) - 0.5 * t.log_det -
            0.5 * n * (1.0 + std::log(2.0 * std::numbers::pi));
  return t;
}

inline Eigen::VectorXd target_vector(const Dataset& data) {
  return Eigen::Map<const Eigen::VectorXd>(data.targets().data(), static_cast<Eigen::Index>(data.size()));
}

/// Profiled log-likelihood with mu and sigma^2 replaced by their maximizers.
inline double concentrated_log_likelihood(const Dataset& data, const HyperparameterSet& theta, ExponentPower p,
                                          double jitter = 1e-10) {
  return likelihood_terms(correlation_matrix(data, theta, p), target_vector(data), jitter).value;
}

struct FitConfig {
  int n_starts = 10;
  int max_evals_per_start = 0;  // 0 means 2000 * dim
  double jitter = 1e-10;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
  HyperparameterBounds bounds;
  double initial_step = 0.25;
  double final_step = 1e-6;

  void validate() const {
    if (n_starts < 1) throw InvalidArgument("n_starts must be >= 1");
    if (!(jitter > 0.0)) throw InvalidArgument("jitter must be positive");
  }

  SearchConfig search() const {
    SearchConfig s;
    s.initial_step = initial_step;
    s.final_step = final_step;
    s.max_evals = max_evals_per_start;
    s.seed = seed;
    return s;
  }
};

/// Kriging model with constant trend, conditioned on a dataset at fixed
/// hyperparameters. Immutable once built.
class GpModel {
 public:
  /// Factorizes R(theta) and computes the closed-form estimates.
  static GpModel condition(Dataset data, HyperparameterSet theta, ExponentPower p, double jitter = 1e-10) {
    theta.check_against(data.space());
    return GpModel(std::move(data), std::move(theta), p, jitter);
  }

  const Dataset& dataset() const { return data_; }
  const DesignSpace& space() const { return data_.space(); }
  CategoricalKernelKind kind() const { return kernel_.hyperparameters().kind(); }
  ExponentPower exponent() const { return kernel_.exponent(); }
  const HyperparameterSet& hyperparameters() const { return kernel_.hyperparameters(); }
  const MixedKernel& kernel() const { return kernel_; }
  const Eigen::MatrixXd& chol() const { return terms_.chol.lower; }
  /// Jitter requested when conditioning.
  double requested_jitter() const { return requested_jitter_; }
  /// Jitter actually added to the diagonal after escalation.
  double jitter() const { return terms_.chol.jitter; }
  double mu_hat() const { return terms_.mu_hat; }
  double sigma2_hat() const { return terms_.sigma2_hat; }
  double log_likelihood() const { return terms_.value; }

  /// Per-start log of the likelihood search, empty unless built by fit().
  const std::vector<StartLog>& search_log() const { return search_log_; }
  void set_search_log(std::vector<StartLog> log) { search_log_ = std::move(log); }

  Eigen::VectorXd correlation_vector(const MixedPoint& w) const {
    const MixedPoint u = normalize(space(), w);
    Eigen::VectorXd r(static_cast<Eigen::Index>(unit_points_.size()));
    for (std::size_t j = 0; j < unit_points_.size(); ++j) r[static_cast<Eigen::Index>(j)] = kernel_(u, unit_points_[j]);
    return r;
  }

  double predict_mean(const MixedPoint& w) const { return mean_from(correlation_vector(w)); }

  double predict_variance(const MixedPoint& w) const { return variance_from(correlation_vector(w)); }

  std::pair<double, double> predict(const MixedPoint& w) const {
    const Eigen::VectorXd r = correlation_vector(w);
    return {mean_from(r), variance_from(r)};
  }

 private:
  GpModel(Dataset data, HyperparameterSet theta, ExponentPower p, double jitter)
      : data_(std::move(data)),
        kernel_(theta, p),
        unit_points_(normalized_points(data_)),
        requested_jitter_(jitter),
        terms_(likelihood_terms(correlation_matrix(unit_points_, kernel_), target_vector(data_), jitter)) {}

  double mean_from(const Eigen::VectorXd& r) const { return terms_.mu_hat + r.dot(terms_.alpha); }

  double variance_from(const Eigen::VectorXd& r) const {
    const Eigen::VectorXd v = terms_.chol.lower.triangularView<Eigen::Lower>().solve(r);
    const double b = 1.0 - terms_.kinv_one.dot(r);
    const double s = 1.0 - v.squaredNorm() + b * b / terms_.one_kinv_one;
    return std::max(0.0, terms_.sigma2_hat * s);
  }

  Dataset data_;
  MixedKernel kernel_;
  std::vector<MixedPoint> unit_points_;
  double requested_jitter_;
  LikelihoodTerms terms_;
  std::vector<StartLog> search_log_;
};

inline Eigen::VectorXd correlation_vector(const GpModel& model, const MixedPoint& w) {
  return model.correlation_vector(w);
}
inline double predict_mean(const GpModel& model, const MixedPoint& w) { return model.predict_mean(w); }
inline double predict_variance(const GpModel& model, const MixedPoint& w) { return model.predict_variance(w); }

/// Maximum-likelihood fit by multistart derivative-free search. Targets are
/// standardized for the search; the returned model is conditioned on the
/// original targets at the best hyperparameters found.
inline GpModel fit(const Dataset& data, CategoricalKernelKind kind, ExponentPower p, const FitConfig& config = {}) {
  config.validate();
  const SearchBox box(data.space(), kind, config.bounds, config.epsilon);
  const std::vector<MixedPoint> unit_points = normalized_points(data);

  Eigen::VectorXd y = target_vector(data);
  const double mean = y.mean();
  const double sd = std::sqrt((y.array() - mean).square().mean());
  y = (y.array() - mean) / (sd > 0.0 ? sd : 1.0);

  const Objective objective = [&](std::span<const double> x) {
    const MixedKernel kernel(box.to_hyperparameters(x), p);
    return likelihood_terms(correlation_matrix(unit_points, kernel), y, config.jitter).value;
  };
  MultistartResult search = multistart(objective, box.bounds(), config.n_starts, config.search());

  GpModel model = GpModel::condition(data, box.to_hyperparameters(search.point), p, config.jitter);
  model.set_search_log(std::move(search.starts));
  return model;
}

}  // namespace mixgp
