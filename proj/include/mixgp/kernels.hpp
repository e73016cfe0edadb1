#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "mixgp/design_space.hpp"
#include "mixgp/errors.hpp"

namespace mixgp {

/// Categorical correlation models. GD, CR, EHH and FE use an exponential
/// link; HH models the level correlation matrix directly.
enum class CategoricalKernelKind { GD, CR, EHH, FE, HH };

inline constexpr CategoricalKernelKind kAllKinds[] = {CategoricalKernelKind::GD, CategoricalKernelKind::CR,
                                                     CategoricalKernelKind::EHH, CategoricalKernelKind::FE,
                                                     CategoricalKernelKind::HH};

inline std::string_view to_string(CategoricalKernelKind kind) {
  switch (kind) {
    case CategoricalKernelKind::GD: return "gd";
    case CategoricalKernelKind::CR: return "cr";
    case CategoricalKernelKind::EHH: return "ehh";
    case CategoricalKernelKind::FE: return "fe";
    case CategoricalKernelKind::HH: return "hh";
  }
  return "?";
}

inline CategoricalKernelKind parse_kernel_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto kind : kAllKinds) {
    if (lower == to_string(kind)) return kind;
  }
  throw ParseError("unknown kernel '" + std::string(text) + "' (expected gd, cr, ehh, fe or hh)");
}

inline bool is_exponential(CategoricalKernelKind kind) { return kind != CategoricalKernelKind::HH; }

/// Exponent p of the continuous/integer kernels: 1 absolute, 2 squared.
enum class ExponentPower : int { Absolute = 1, Squared = 2 };

inline ExponentPower exponent_from_int(int p) {
  if (p == 1) return ExponentPower::Absolute;
  if (p == 2) return ExponentPower::Squared;
  throw InvalidArgument("exponent p must be 1 or 2, got " + std::to_string(p));
}

inline int to_int(ExponentPower p) { return static_cast<int>(p); }

/// exp(-20): smallest categorical correlation the exponential models reach.
inline const double kDefaultEpsilon = std::exp(-20.0);

/// Number of free hyperparameters of one categorical variable with L levels.
inline std::size_t hyperparameter_count(CategoricalKernelKind kind, int levels) {
  const auto L = static_cast<std::size_t>(levels);
  switch (kind) {
    case CategoricalKernelKind::GD: return 1;
    case CategoricalKernelKind::CR: return L;
    case CategoricalKernelKind::EHH:
    case CategoricalKernelKind::HH: return L * (L - 1) / 2;
    case CategoricalKernelKind::FE: return L * (L + 1) / 2;
  }
  return 0;
}

/// n + m + sum_i count(kind, L_i).
inline std::size_t hyperparameter_count(const DesignSpace& space, CategoricalKernelKind kind) {
  std::size_t total = space.n_continuous() + space.n_integer();
  for (int L : space.level_counts()) total += hyperparameter_count(kind, L);
  return total;
}

namespace detail {

inline double power_distance(double a, double b, ExponentPower p) {
  const double d = std::abs(a - b);
  return p == ExponentPower::Squared ? d * d : d;
}

inline double exponential_product(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> theta, ExponentPower p) {
  if (a.size() != b.size() || a.size() != theta.size()) {
    throw DimensionMismatch("kernel inputs and hyperparameters differ in length");
  }
  if (a.empty()) return 1.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (theta[j] < 0.0) throw InvalidArgument("kernel hyperparameters must be non-negative");
    sum += theta[j] * power_distance(a[j], b[j], p);
  }
  return std::exp(-sum);
}

}  // namespace detail

/// prod_j exp(-theta_j |x_r,j - x_s,j|^p).
inline double continuous_kernel(std::span<const double> x_r, std::span<const double> x_s,
                                std::span<const double> theta, ExponentPower p) {
  return detail::exponential_product(x_r, x_s, theta, p);
}

/// Same form as the continuous kernel, applied to relaxed integer coordinates.
inline double integer_kernel(std::span<const double> z_r, std::span<const double> z_s,
                             std::span<const double> theta, ExponentPower p) {
  return detail::exponential_product(z_r, z_s, theta, p);
}

inline int hamming_score(int level_r, int level_s) { return level_r == level_s ? 0 : 1; }

/// Hyperparameter matrix Theta_i of one categorical variable.
///
/// The full symmetric matrix is kept in the shape each kind uses:
///   GD   (theta/2) * I, one free value theta
///   CR   diagonal, L free values
///   EHH  zero diagonal, L(L-1)/2 angles below the diagonal
///   HH   same shape as EHH
///   FE   diagonal plus angles, L(L+1)/2 values
/// The flat form lists the free entries in row-major lower-triangle order.
class SymmetricHyperMatrix {
 public:
  SymmetricHyperMatrix(CategoricalKernelKind kind, int levels, std::span<const double> flat)
      : kind_(kind), levels_(levels), matrix_(Eigen::MatrixXd::Zero(levels, levels)) {
    if (levels < 2) throw InvalidArgument("categorical variable needs at least 2 levels");
    if (flat.size() != hyperparameter_count(kind, levels)) {
      throw ShapeMismatch("expected " + std::to_string(hyperparameter_count(kind, levels)) +
                          " hyperparameters for a " + std::string(to_string(kind)) + " variable with " +
                          std::to_string(levels) + " levels, got " + std::to_string(flat.size()));
    }
    for (double v : flat) {
      if (!std::isfinite(v)) throw InvalidArgument("hyperparameters must be finite");
    }
    std::size_t t = 0;
    switch (kind) {
      case CategoricalKernelKind::GD:
        if (flat[0] < 0.0) throw InvalidArgument("GD hyperparameter must be non-negative");
        matrix_.diagonal().setConstant(flat[0] / 2.0);
        break;
      case CategoricalKernelKind::CR:
        for (int j = 0; j < levels; ++j) matrix_(j, j) = flat[t++];
        break;
      case CategoricalKernelKind::EHH:
      case CategoricalKernelKind::HH:
        for (int k = 1; k < levels; ++k)
          for (int j = 0; j < k; ++j) matrix_(k, j) = matrix_(j, k) = flat[t++];
        break;
      case CategoricalKernelKind::FE:
        for (int k = 0; k < levels; ++k)
          for (int j = 0; j <= k; ++j) matrix_(k, j) = matrix_(j, k) = flat[t++];
        break;
    }
    if (kind == CategoricalKernelKind::CR || kind == CategoricalKernelKind::FE) {
      if ((matrix_.diagonal().array() < 0.0).any()) {
        throw InvalidArgument("diagonal hyperparameters must be non-negative");
      }
    }
  }

  /// Convenience for GD: a single scalar.
  static SymmetricHyperMatrix gower(int levels, double theta) {
    const double v[] = {theta};
    return {CategoricalKernelKind::GD, levels, v};
  }

  CategoricalKernelKind kind() const { return kind_; }
  int levels() const { return levels_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  std::vector<double> flat() const {
    std::vector<double> out;
    switch (kind_) {
      case CategoricalKernelKind::GD: out.push_back(2.0 * matrix_(0, 0)); break;
      case CategoricalKernelKind::CR:
        for (int j = 0; j < levels_; ++j) out.push_back(matrix_(j, j));
        break;
      case CategoricalKernelKind::EHH:
      case CategoricalKernelKind::HH:
        for (int k = 1; k < levels_; ++k)
          for (int j = 0; j < k; ++j) out.push_back(matrix_(k, j));
        break;
      case CategoricalKernelKind::FE:
        for (int k = 0; k < levels_; ++k)
          for (int j = 0; j <= k; ++j) out.push_back(matrix_(k, j));
        break;
    }
    return out;
  }

 private:
  CategoricalKernelKind kind_;
  int levels_;
  Eigen::MatrixXd matrix_;
};

/// Lower-triangular C whose rows are unit vectors given by hyperspherical
/// angles taken from the strict lower triangle of `angles`.
inline Eigen::MatrixXd hypersphere_lower_triangular(const Eigen::MatrixXd& angles) {
  if (angles.rows() != angles.cols()) throw ShapeMismatch("angle matrix must be square");
  const Eigen::Index L = angles.rows();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(L, L);
  if (L == 0) return C;
  C(0, 0) = 1.0;
  for (Eigen::Index k = 1; k < L; ++k) {
    double sines = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      C(k, j) = std::cos(angles(k, j)) * sines;
      sines *= std::sin(angles(k, j));
    }
    C(k, k) = sines;
  }
  return C;
}

inline Eigen::MatrixXd hypersphere_gram(const Eigen::MatrixXd& angles) {
  const Eigen::MatrixXd C = hypersphere_lower_triangular(angles);
  return C * C.transpose();
}

/// Phi(Theta_i) for the given kind.
inline Eigen::MatrixXd phi_transform(CategoricalKernelKind kind, const SymmetricHyperMatrix& theta,
                                     double epsilon = kDefaultEpsilon) {
  if (theta.kind() != kind) {
    throw ShapeMismatch("hyperparameter matrix was built for " + std::string(to_string(theta.kind())) +
                        ", not " + std::string(to_string(kind)));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const Eigen::MatrixXd& m = theta.matrix();
  const Eigen::Index L = m.rows();
  switch (kind) {
    case CategoricalKernelKind::GD:
    case CategoricalKernelKind::CR: {
      Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(L, L);
      phi.diagonal() = m.diagonal();
      return phi;
    }
    case CategoricalKernelKind::EHH:
    case CategoricalKernelKind::FE: {
      const Eigen::MatrixXd gram = hypersphere_gram(m);
      const double half_log_eps = std::log(epsilon) / 2.0;
      Eigen::MatrixXd phi(L, L);
      for (Eigen::Index j = 0; j < L; ++j)
        for (Eigen::Index k = 0; k < L; ++k) phi(j, k) = j == k ? 0.0 : half_log_eps * (gram(j, k) - 1.0);
      if (kind == CategoricalKernelKind::FE) phi.diagonal() = m.diagonal();
      return phi;
    }
    case CategoricalKernelKind::HH: {
      Eigen::MatrixXd phi = hypersphere_gram(m) / 2.0;
      phi.diagonal().setOnes();
      return phi;
    }
  }
  return {};
}

/// [R_i]_{lr,ls} = kappa(2 Phi_rs) kappa(Phi_rr) kappa(Phi_ss), with 1-based levels.
/// kappa is exp(-.) for the exponential kinds and the identity for HH, whose
/// diagonal factors are then dropped.
inline double level_correlation(CategoricalKernelKind kind, const Eigen::MatrixXd& phi, int level_r, int level_s) {
  if (level_r < 1 || level_s < 1 || level_r > phi.rows() || level_s > phi.rows()) {
    throw LevelOutOfRange(0, std::max(level_r, level_s));
  }
  if (level_r == level_s) return 1.0;
  const Eigen::Index r = level_r - 1;
  const Eigen::Index s = level_s - 1;
  if (!is_exponential(kind)) return 2.0 * phi(r, s);
  return std::exp(-(phi(r, r) + phi(s, s) + 2.0 * phi(r, s)));
}

namespace detail {

/// Quadratic form sum_{j,j'} |de_j|^{p/2} Phi_{jj'} |de_j'|^{p/2} over the
/// one-hot difference of two levels.
inline double relaxed_quadratic_form(const Eigen::MatrixXd& phi, Eigen::Index r, Eigen::Index s, ExponentPower p) {
  const double half_p = static_cast<double>(to_int(p)) / 2.0;
  // One-hot differences are 0 or 1 per coordinate, so only j, k in {r, s} contribute.
  const double d_on = std::pow(1.0, half_p);
  const Eigen::Index idx[2] = {std::min(r, s), std::max(r, s)};
  double sum = 0.0;
  for (const Eigen::Index j : idx) {
    for (const Eigen::Index k : idx) sum += d_on * phi(j, k) * d_on;
  }
  return sum;
}

}  // namespace detail

/// Full L_i x L_i level correlation matrix R_i(Theta_i).
///
/// Exponential kinds are evaluated through the one-hot relaxed quadratic form,
/// where every one-hot difference is 0 or 1 so the exponent p drops out.
inline Eigen::MatrixXd categorical_matrix(CategoricalKernelKind kind, const SymmetricHyperMatrix& theta,
                                          double epsilon = kDefaultEpsilon,
                                          ExponentPower p = ExponentPower::Squared) {
  const Eigen::MatrixXd phi = phi_transform(kind, theta, epsilon);
  const Eigen::Index L = phi.rows();
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(L, L);
  for (Eigen::Index r = 0; r < L; ++r) {
    for (Eigen::Index s = 0; s < r; ++s) {
      const double v = is_exponential(kind) ? std::exp(-detail::relaxed_quadratic_form(phi, r, s, p))
                                            : 2.0 * phi(r, s);
      R(r, s) = R(s, r) = v;
    }
  }
  return R;
}

/// Theta = {theta_cont, theta_int, theta_cat}.
class HyperparameterSet {
 public:
  HyperparameterSet(CategoricalKernelKind kind, std::vector<double> theta_cont, std::vector<double> theta_int,
                    std::vector<SymmetricHyperMatrix> theta_cat, double epsilon = kDefaultEpsilon)
      : kind_(kind),
        theta_cont_(std::move(theta_cont)),
        theta_int_(std::move(theta_int)),
        theta_cat_(std::move(theta_cat)),
        epsilon_(epsilon) {
    if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    for (double v : theta_cont_)
      if (!(v >= 0.0 && std::isfinite(v))) throw InvalidArgument("continuous hyperparameters must be >= 0");
    for (double v : theta_int_)
      if (!(v >= 0.0 && std::isfinite(v))) throw InvalidArgument("integer hyperparameters must be >= 0");
    for (const auto& m : theta_cat_)
      if (m.kind() != kind_) throw ShapeMismatch("categorical hyperparameters of mixed kinds");
  }

  /// Unpacks the flat layout: theta_cont, theta_int, then each Theta_i.
  static HyperparameterSet from_flat(const DesignSpace& space, CategoricalKernelKind kind,
                                     std::span<const double> flat, double epsilon = kDefaultEpsilon) {
    if (flat.size() != hyperparameter_count(space, kind)) {
      throw ShapeMismatch("expected " + std::to_string(hyperparameter_count(space, kind)) +
                          " hyperparameters, got " + std::to_string(flat.size()));
    }
    std::size_t at = 0;
    std::vector<double> cont(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(space.n_continuous()));
    at += space.n_continuous();
    std::vector<double> integer(flat.begin() + static_cast<std::ptrdiff_t>(at),
                                flat.begin() + static_cast<std::ptrdiff_t>(at + space.n_integer()));
    at += space.n_integer();
    std::vector<SymmetricHyperMatrix> cat;
    for (int L : space.level_counts()) {
      const std::size_t c = hyperparameter_count(kind, L);
      cat.emplace_back(kind, L, flat.subspan(at, c));
      at += c;
    }
    return {kind, std::move(cont), std::move(integer), std::move(cat), epsilon};
  }

  CategoricalKernelKind kind() const { return kind_; }
  const std::vector<double>& theta_cont() const { return theta_cont_; }
  const std::vector<double>& theta_int() const { return theta_int_; }
  const std::vector<SymmetricHyperMatrix>& theta_cat() const { return theta_cat_; }
  double epsilon() const { return epsilon_; }

  std::vector<double> flat() const {
    std::vector<double> out(theta_cont_);
    out.insert(out.end(), theta_int_.begin(), theta_int_.end());
    for (const auto& m : theta_cat_) {
      const auto f = m.flat();
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }

  std::size_t size() const { return flat().size(); }

  void check_against(const DesignSpace& space) const {
    if (theta_cont_.size() != space.n_continuous() || theta_int_.size() != space.n_integer() ||
        theta_cat_.size() != space.n_categorical()) {
      throw DimensionMismatch("hyperparameters do not match the design space");
    }
    const auto counts = space.level_counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (theta_cat_[i].levels() != counts[i]) throw DimensionMismatch("level count mismatch");
    }
  }

 private:
  CategoricalKernelKind kind_;
  std::vector<double> theta_cont_;
  std::vector<double> theta_int_;
  std::vector<SymmetricHyperMatrix> theta_cat_;
  double epsilon_;
};

/// Mixed kernel k = k_cont * k_int * prod_i [R_i]_{lr,ls} with the level
/// matrices computed once per hyperparameter set.
class MixedKernel {
 public:
  MixedKernel(const HyperparameterSet& theta, ExponentPower p) : theta_(theta), p_(p) {
    for (const auto& m : theta_.theta_cat()) {
      level_matrices_.push_back(categorical_matrix(theta_.kind(), m, theta_.epsilon(), p_));
    }
  }

  const HyperparameterSet& hyperparameters() const { return theta_; }
  ExponentPower exponent() const { return p_; }
  const std::vector<Eigen::MatrixXd>& level_matrices() const { return level_matrices_; }

  double operator()(const MixedPoint& a, const MixedPoint& b) const {
    if (a.categorical.size() != level_matrices_.size() || b.categorical.size() != level_matrices_.size()) {
      throw DimensionMismatch("categorical coordinates differ from the hyperparameter layout");
    }
    double k = continuous_kernel(a.continuous, b.continuous, theta_.theta_cont(), p_) *
               integer_kernel(a.integer, b.integer, theta_.theta_int(), p_);
    for (std::size_t i = 0; i < level_matrices_.size(); ++i) {
      const auto& R = level_matrices_[i];
      const int la = a.categorical[i];
      const int lb = b.categorical[i];
      if (la < 1 || lb < 1 || la > R.rows() || lb > R.rows()) {
        throw LevelOutOfRange(i, std::max(la, lb));
      }
      k *= R(la - 1, lb - 1);
    }
    return k;
  }

 private:
  HyperparameterSet theta_;
  ExponentPower p_;
  std::vector<Eigen::MatrixXd> level_matrices_;
};

inline double mixed_kernel(const MixedPoint& w_r, const MixedPoint& w_s, const HyperparameterSet& theta,
                           ExponentPower p) {
  return MixedKernel(theta, p)(w_r, w_s);
}

namespace detail {

/// Hyperspherical angles (row-major strict lower triangle) of the
/// lower-triangular factor C of a unit-diagonal Gram matrix, G = C C^T with
/// C_kk >= 0. C is obtained from a symmetric eigendecomposition (negative
/// rounding-level eigenvalues clipped) followed by a QR rotation, which stays
/// accurate when G is singular to working precision. A clearly indefinite G is
/// rejected.
inline std::vector<double> angles_from_gram(const Eigen::MatrixXd& gram) {
  const Eigen::Index L = gram.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) throw NotRepresentable("eigendecomposition of the Gram matrix failed");
  if (es.eigenvalues().minCoeff() < -1e-8 * static_cast<double>(L)) {
    throw NotRepresentable("Gram matrix is not positive semidefinite");
  }
  Eigen::MatrixXd V = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  for (Eigen::Index k = 0; k < L; ++k) V.row(k).normalize();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(V.transpose());
  Eigen::MatrixXd C = qr.matrixQR().triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (Eigen::Index j = 0; j < L; ++j) {
    if (C(j, j) < 0.0) C.col(j) = -C.col(j);
  }

  // angle_kj = atan2(|C(k, j+1..k)|, C(k, j)) stays accurate for small angles.
  std::vector<double> flat;
  for (Eigen::Index k = 1; k < L; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) flat.push_back(std::atan2(C.row(k).segment(j + 1, k - j).norm(), C(k, j)));
  }
  return flat;
}

inline void check_correlation_shape(const Eigen::MatrixXd& T) {
  if (T.rows() != T.cols() || T.rows() < 2) throw ShapeMismatch("T must be square with at least 2 levels");
  constexpr double tol = 1e-12;
  for (Eigen::Index j = 0; j < T.rows(); ++j) {
    if (std::abs(T(j, j) - 1.0) > tol) throw NotRepresentable("T must have a unit diagonal");
    for (Eigen::Index k = 0; k < j; ++k) {
      if (std::abs(T(j, k) - T(k, j)) > tol) throw NotRepresentable("T must be symmetric");
    }
  }
}

}  // namespace detail

namespace detail {

inline Eigen::MatrixXd psd_part(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
}

/// Nearest positive semidefinite matrix to `gram` that keeps the entries
/// flagged in `fixed` (Dykstra's alternating projections). Used when rounding
/// leaves the Gram image slightly indefinite: entries coming from tiny
/// correlations are poorly determined and are the ones allowed to move.
inline Eigen::MatrixXd repair_gram(const Eigen::MatrixXd& gram, const Eigen::Matrix<bool, -1, -1>& fixed) {
  Eigen::MatrixXd Y = gram;
  Eigen::MatrixXd X = gram;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(gram.rows(), gram.cols());
  for (int it = 0; it < 20000; ++it) {
    const Eigen::MatrixXd R = Y - P;
    X = psd_part(R);
    P = X - R;
    Y = X;
    for (Eigen::Index j = 0; j < gram.rows(); ++j)
      for (Eigen::Index k = 0; k < gram.cols(); ++k)
        if (fixed(j, k)) Y(j, k) = gram(j, k);
    if ((Y - X).cwiseAbs().maxCoeff() < 1e-16) break;
  }
  return X;
}

}  // namespace detail

/// Inverts the EHH map: finds zero-diagonal angles whose EHH level matrix
/// reproduces T. Each entry alpha is sent to the Gram value
/// 1 - log(alpha) / log(epsilon) and the angles are read off its
/// lower-triangular factor.
inline SymmetricHyperMatrix recover_angles_from_correlation(const Eigen::MatrixXd& T,
                                                            double epsilon = kDefaultEpsilon) {
  detail::check_correlation_shape(T);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const Eigen::Index L = T.rows();
  const double log_eps = std::log(epsilon);
  Eigen::MatrixXd gram(L, L);
  Eigen::Matrix<bool, -1, -1> fixed(L, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    for (Eigen::Index k = 0; k < L; ++k) {
      const double a = T(j, k);
      if (!(a > epsilon) || a > 1.0 + 1e-12) {
        throw NotRepresentable("correlation " + std::to_string(a) + " outside (epsilon, 1]");
      }
      gram(j, k) = j == k ? 1.0 : 1.0 - std::log(a) / log_eps;
      fixed(j, k) = j == k || a >= 1e-4;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-8 * static_cast<double>(L)) throw NotRepresentable("Gram image of T is not positive semidefinite");
  if (min_eig < 0.0) gram = detail::repair_gram(gram, fixed);
  return {CategoricalKernelKind::EHH, static_cast<int>(L), detail::angles_from_gram(gram)};
}

/// HH angles whose level matrix equals the correlation matrix T.
inline SymmetricHyperMatrix recover_hh_angles(const Eigen::MatrixXd& T) {
  detail::check_correlation_shape(T);
  return {CategoricalKernelKind::HH, static_cast<int>(T.rows()), detail::angles_from_gram(T)};
}

}  // namespace mixgp
