#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixgp/errors.hpp"

namespace mixgp {

struct BoxBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }

  void validate() const {
    if (lower.size() != upper.size()) throw DimensionMismatch("box bounds differ in length");
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (!(std::isfinite(lower[j]) && std::isfinite(upper[j]) && lower[j] < upper[j])) {
        throw InvalidArgument("box bound " + std::to_string(j) + " needs finite lower < upper");
      }
    }
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!(x[j] >= lower[j] && x[j] <= upper[j])) return false;
    }
    return true;
  }
};

/// Step sizes are fractions of each coordinate's box width.
struct SearchConfig {
  double initial_step = 0.25;
  double final_step = 1e-6;
  int max_evals = 0;  // 0 means 2000 * dim
  std::uint64_t seed = 0;
  /// Scale the ascent direction with a secant (BFGS) curvature estimate
  /// built from successive simplex gradients.
  bool curvature_memory = true;

  void validate() const {
    if (!(final_step > 0.0 && final_step < initial_step && initial_step <= 0.5)) {
      throw InvalidArgument("search steps need 0 < final_step < initial_step <= 0.5");
    }
    if (max_evals < 0) throw InvalidArgument("max_evals must be non-negative");
  }

  int budget(std::size_t dim) const {
    return max_evals > 0 ? max_evals : 2000 * static_cast<int>(std::max<std::size_t>(dim, 1));
  }
};

using Objective = std::function<double(std::span<const double>)>;

struct SearchResult {
  std::vector<double> point;
  double value = -std::numeric_limits<double>::infinity();
  int n_evals = 0;
  /// Best value after each iteration.
  std::vector<double> trace;
};

namespace detail {

/// Objective seen through unit coordinates u in [0,1]^d, with evaluation
/// counting and failure wrapping.
class UnitBoxObjective {
 public:
  UnitBoxObjective(const Objective& f, const BoxBounds& bounds, int budget)
      : f_(f), bounds_(bounds), budget_(budget) {}

  std::vector<double> to_box(const Eigen::VectorXd& u) const {
    std::vector<double> x(bounds_.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double lo = bounds_.lower[j];
      const double hi = bounds_.upper[j];
      const double uj = u[static_cast<Eigen::Index>(j)];
      if (uj <= 0.0) {
        x[j] = lo;
      } else if (uj >= 1.0) {
        x[j] = hi;
      } else {
        x[j] = std::clamp(lo + uj * (hi - lo), lo, hi);
      }
    }
    return x;
  }

  Eigen::VectorXd to_unit(std::span<const double> x) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
      u[static_cast<Eigen::Index>(j)] =
          std::clamp((x[j] - bounds_.lower[j]) / (bounds_.upper[j] - bounds_.lower[j]), 0.0, 1.0);
    }
    return u;
  }

  bool exhausted() const { return evals_ >= budget_; }
  int evals() const { return evals_; }

  double operator()(const Eigen::VectorXd& u) {
    const auto x = to_box(u);
    ++evals_;
    double v = 0.0;
    try {
      v = f_(x);
    } catch (const std::exception& e) {
      throw ObjectiveFailure(e.what(), x);
    }
    if (!std::isfinite(v)) throw ObjectiveFailure("non-finite value", x);
    return v;
  }

 private:
  const Objective& f_;
  const BoxBounds& bounds_;
  int budget_;
  int evals_ = 0;
};

inline Eigen::VectorXd clip_unit(Eigen::VectorXd u) { return u.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace detail

/// Bound-constrained derivative-free maximization.
///
/// Each iteration probes every coordinate at distance rho (the trust radius,
/// in box-width units) to build a linear model, then walks along the model's
/// ascent direction with step doubling, clipped to the box. Unsuccessful
/// iterations halve rho; the search stops once rho < final_step or the
/// evaluation budget is spent.
inline SearchResult local_search(const Objective& objective, const BoxBounds& bounds, std::span<const double> start,
                                 const SearchConfig& config = {}) {
  bounds.validate();
  config.validate();
  if (!bounds.contains(start)) throw InvalidArgument("start point lies outside the box");

  const auto dim = static_cast<Eigen::Index>(bounds.size());
  detail::UnitBoxObjective f(objective, bounds, config.budget(bounds.size()));

  SearchResult result;
  Eigen::VectorXd u = f.to_unit(start);
  double fu = f(u);
  result.point.assign(start.begin(), start.end());
  result.value = fu;
  result.trace.push_back(fu);

  double rho = config.initial_step;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd g_prev;
  Eigen::VectorXd u_prev;

  while (rho >= config.final_step && !f.exhausted()) {
    Eigen::VectorXd best_u = u;
    double best_f = fu;

    // Linear model from coordinate probes.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    bool complete = true;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (f.exhausted()) {
        complete = false;
        break;
      }
      const double h = u[j] + rho <= 1.0 ? rho : -rho;
      Eigen::VectorXd probe = u;
      probe[j] = std::clamp(u[j] + h, 0.0, 1.0);
      const double fp = f(probe);
      g[j] = (fp - fu) / (probe[j] - u[j]);
      if (fp > best_f) {
        best_f = fp;
        best_u = probe;
      }
    }

    if (complete) {
      if (config.curvature_memory && g_prev.size() == dim) {
        const Eigen::VectorXd s = u - u_prev;
        const Eigen::VectorXd y = g_prev - g;  // gradient change of -f
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          const Eigen::VectorXd Hy = H * y;
          const double yHy = y.dot(Hy);
          H += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) - (Hy * s.transpose() + s * Hy.transpose()) / sy;
        }
      }
      Eigen::VectorXd d = config.curvature_memory ? Eigen::VectorXd(H * g) : g;
      if (d.dot(g) <= 0.0) {
        H.setIdentity();
        d = g;
      }
      for (Eigen::Index j = 0; j < dim; ++j) {
        if ((u[j] >= 1.0 && d[j] > 0.0) || (u[j] <= 0.0 && d[j] < 0.0)) d[j] = 0.0;
      }
      const double dn = d.norm();
      if (dn > 0.0) {
        d /= dn;
        Eigen::VectorXd line_u;
        double line_f = fu;
        const double max_len = std::sqrt(static_cast<double>(dim));
        for (double t = rho; t <= max_len && !f.exhausted(); t *= 2.0) {
          const Eigen::VectorXd cand = detail::clip_unit(u + t * d);
          if ((cand - u).squaredNorm() == 0.0) break;
          const double fc = f(cand);
          if (fc > line_f) {
            line_f = fc;
            line_u = cand;
          } else {
            break;
          }
        }
        if (line_f > best_f) {
          best_f = line_f;
          best_u = line_u;
        }
      }
    }

    if (best_f > fu) {
      if (complete) {
        g_prev = g;
        u_prev = u;
      }
      u = best_u;
      fu = best_f;
    } else {
      rho *= 0.5;
      H.setIdentity();
      g_prev.resize(0);
    }
    result.trace.push_back(fu);
  }

  if (fu > result.value) {
    result.value = fu;
    result.point = f.to_box(u);
  }
  result.n_evals = f.evals();
  return result;
}

/// Starting points evenly spaced on the box diagonal at fractions (i + 1/2) / n.
inline std::vector<std::vector<double>> diagonal_starts(const BoxBounds& bounds, int n_starts) {
  bounds.validate();
  if (n_starts < 1) throw InvalidArgument("n_starts must be >= 1");
  std::vector<std::vector<double>> starts;
  for (int i = 0; i < n_starts; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n_starts);
    std::vector<double> x(bounds.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = std::clamp(bounds.lower[j] + t * (bounds.upper[j] - bounds.lower[j]), bounds.lower[j], bounds.upper[j]);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

struct StartLog {
  int index = 0;
  std::vector<double> start;
  bool ok = false;
  int n_evals = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  std::string error;
};

struct MultistartResult {
  std::vector<double> point;
  double value = -std::numeric_limits<double>::infinity();
  int best_start = -1;
  std::vector<StartLog> starts;
};

/// Runs local_search from each diagonal start and keeps the best. Ties go to
/// the earliest start. Fails only when every start fails.
inline MultistartResult multistart(const Objective& objective, const BoxBounds& bounds, int n_starts,
                                   const SearchConfig& config = {}) {
  MultistartResult out;
  const auto starts = diagonal_starts(bounds, n_starts);
  std::string failures;
  for (int i = 0; i < n_starts; ++i) {
    StartLog log;
    log.index = i;
    log.start = starts[static_cast<std::size_t>(i)];
    try {
      auto r = local_search(objective, bounds, log.start, config);
      log.ok = true;
      log.n_evals = r.n_evals;
      log.best_value = r.value;
      if (r.value > out.value) {
        out.value = r.value;
        out.point = std::move(r.point);
        out.best_start = i;
      }
    } catch (const ObjectiveFailure& e) {
      log.error = e.what();
      failures += "start " + std::to_string(i) + ": " + e.what() + "; ";
    }
    out.starts.push_back(std::move(log));
  }
  if (out.best_start < 0) throw ObjectiveFailure("all starts failed: " + failures, starts.front());
  return out;
}

/// Per-start trace: start index, eval count, best value.
inline void write_trace(std::ostream& os, const MultistartResult& r) {
  os << "start,evals,best_value\n";
  os.precision(17);
  for (const auto& s : r.starts) {
    os << s.index << ',' << s.n_evals << ',';
    if (s.ok) {
      os << s.best_value;
    } else {
      os << "nan";
    }
    os << '\n';
  }
}

}  // namespace mixgp
