#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mixgp/errors.hpp"

namespace mixgp {

struct Continuous {
  double lower = 0.0;
  double upper = 1.0;
};

struct Integer {
  long lower = 0;
  long upper = 1;
};

struct Categorical {
  std::vector<std::string> levels;

  int count() const { return static_cast<int>(levels.size()); }
};

enum class VariableKind { Continuous, Integer, Categorical };

/// One named input variable. Bounds and level names are checked on construction.
class VariableSpec {
 public:
  using Domain = std::variant<Continuous, Integer, Categorical>;

  VariableSpec(std::string name, Domain domain) : name_(std::move(name)), domain_(std::move(domain)) {
    if (const auto* c = std::get_if<Continuous>(&domain_)) {
      if (!(std::isfinite(c->lower) && std::isfinite(c->upper) && c->lower < c->upper)) {
        throw InvalidArgument("continuous variable '" + name_ + "' needs lower < upper");
      }
    } else if (const auto* z = std::get_if<Integer>(&domain_)) {
      if (!(z->lower < z->upper)) {
        throw InvalidArgument("integer variable '" + name_ + "' needs lower < upper");
      }
    } else {
      const auto& cat = std::get<Categorical>(domain_);
      if (cat.count() < 2) {
        throw InvalidArgument("categorical variable '" + name_ + "' needs at least 2 levels");
      }
      std::set<std::string> seen(cat.levels.begin(), cat.levels.end());
      if (seen.size() != cat.levels.size()) {
        throw InvalidArgument("categorical variable '" + name_ + "' has duplicate level names");
      }
    }
  }

  static VariableSpec continuous(std::string name, double lower, double upper) {
    return {std::move(name), Continuous{lower, upper}};
  }
  static VariableSpec integer(std::string name, long lower, long upper) {
    return {std::move(name), Integer{lower, upper}};
  }
  static VariableSpec categorical(std::string name, std::vector<std::string> levels) {
    return {std::move(name), Categorical{std::move(levels)}};
  }
  /// Categorical variable whose levels are named "1".."count".
  static VariableSpec categorical(std::string name, int count) {
    std::vector<std::string> levels;
    for (int i = 1; i <= count; ++i) levels.push_back(std::to_string(i));
    return categorical(std::move(name), std::move(levels));
  }

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }

  VariableKind kind() const {
    switch (domain_.index()) {
      case 0: return VariableKind::Continuous;
      case 1: return VariableKind::Integer;
      default: return VariableKind::Categorical;
    }
  }

  const Continuous& as_continuous() const { return std::get<Continuous>(domain_); }
  const Integer& as_integer() const { return std::get<Integer>(domain_); }
  const Categorical& as_categorical() const { return std::get<Categorical>(domain_); }

 private:
  std::string name_;
  Domain domain_;
};

/// A point w = (x, z, c). Integer coordinates are held as reals so that the
/// same type carries normalized points; categorical levels are 1-based.
struct MixedPoint {
  std::vector<double> continuous;
  std::vector<double> integer;
  std::vector<int> categorical;

  bool operator==(const MixedPoint&) const = default;
};

/// Ordered list of variables with cached per-kind counts.
class DesignSpace {
 public:
  struct Slot {
    VariableKind kind;
    std::size_t position;  // index within its kind
  };

  DesignSpace() = default;

  explicit DesignSpace(std::vector<VariableSpec> variables) : variables_(std::move(variables)) {
    if (variables_.empty()) throw InvalidArgument("design space needs at least one variable");
    std::set<std::string> names;
    for (const auto& v : variables_) {
      if (!names.insert(v.name()).second) {
        throw InvalidArgument("duplicate variable name '" + v.name() + "'");
      }
      switch (v.kind()) {
        case VariableKind::Continuous:
          slots_.push_back({VariableKind::Continuous, continuous_.size()});
          continuous_.push_back(slots_.size() - 1);
          break;
        case VariableKind::Integer:
          slots_.push_back({VariableKind::Integer, integer_.size()});
          integer_.push_back(slots_.size() - 1);
          break;
        case VariableKind::Categorical:
          slots_.push_back({VariableKind::Categorical, categorical_.size()});
          categorical_.push_back(slots_.size() - 1);
          break;
      }
    }
  }

  const std::vector<VariableSpec>& variables() const { return variables_; }
  std::size_t size() const { return variables_.size(); }
  const Slot& slot(std::size_t i) const { return slots_.at(i); }

  std::size_t n_continuous() const { return continuous_.size(); }
  std::size_t n_integer() const { return integer_.size(); }
  std::size_t n_categorical() const { return categorical_.size(); }

  /// Design-space index of the k-th variable of each kind.
  std::size_t continuous_index(std::size_t k) const { return continuous_.at(k); }
  std::size_t integer_index(std::size_t k) const { return integer_.at(k); }
  std::size_t categorical_index(std::size_t k) const { return categorical_.at(k); }

  const Continuous& continuous(std::size_t k) const { return variables_[continuous_.at(k)].as_continuous(); }
  const Integer& integer(std::size_t k) const { return variables_[integer_.at(k)].as_integer(); }
  const Categorical& categorical(std::size_t k) const {
    return variables_[categorical_.at(k)].as_categorical();
  }

  /// L_i for every categorical variable, in order.
  std::vector<int> level_counts() const {
    std::vector<int> out;
    for (auto idx : categorical_) out.push_back(variables_[idx].as_categorical().count());
    return out;
  }

  /// n^l: dimension of the one-hot relaxed categorical space.
  std::size_t relaxed_categorical_dim() const {
    std::size_t total = 0;
    for (int L : level_counts()) total += static_cast<std::size_t>(L);
    return total;
  }

  /// n + m + n^l.
  std::size_t relaxed_dim() const { return n_continuous() + n_integer() + relaxed_categorical_dim(); }

 private:
  std::vector<VariableSpec> variables_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> continuous_;
  std::vector<std::size_t> integer_;
  std::vector<std::size_t> categorical_;
};

inline void check_shape(const DesignSpace& space, const MixedPoint& p) {
  if (p.continuous.size() != space.n_continuous() || p.integer.size() != space.n_integer() ||
      p.categorical.size() != space.n_categorical()) {
    throw DimensionMismatch("point does not match the design space layout");
  }
}

inline void validate_point(const DesignSpace& space, const MixedPoint& p) {
  check_shape(space, p);
  for (std::size_t k = 0; k < space.n_continuous(); ++k) {
    const auto& b = space.continuous(k);
    const double v = p.continuous[k];
    if (!(v >= b.lower && v <= b.upper)) throw OutOfBounds(space.continuous_index(k), v);
  }
  for (std::size_t k = 0; k < space.n_integer(); ++k) {
    const auto& b = space.integer(k);
    const double v = p.integer[k];
    if (!(v >= static_cast<double>(b.lower) && v <= static_cast<double>(b.upper)) || v != std::round(v)) {
      throw OutOfBounds(space.integer_index(k), v);
    }
  }
  for (std::size_t k = 0; k < space.n_categorical(); ++k) {
    const int level = p.categorical[k];
    if (level < 1 || level > space.categorical(k).count()) {
      throw LevelOutOfRange(space.categorical_index(k), level);
    }
  }
}

/// Concatenated one-hot blocks e_{c_i}, total length n^l.
inline Eigen::VectorXd one_hot_encode(const DesignSpace& space, const MixedPoint& p) {
  validate_point(space, p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.relaxed_categorical_dim()));
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < space.n_categorical(); ++k) {
    out[offset + p.categorical[k] - 1] = 1.0;
    offset += space.categorical(k).count();
  }
  return out;
}

/// Argmax of each one-hot block, as 1-based levels.
inline std::vector<int> decode_one_hot(const DesignSpace& space, const Eigen::VectorXd& relaxed) {
  if (relaxed.size() != static_cast<Eigen::Index>(space.relaxed_categorical_dim())) {
    throw DimensionMismatch("relaxed vector length differs from n^l");
  }
  std::vector<int> levels;
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < space.n_categorical(); ++k) {
    const int L = space.categorical(k).count();
    Eigen::Index best = 0;
    relaxed.segment(offset, L).maxCoeff(&best);
    levels.push_back(static_cast<int>(best) + 1);
    offset += L;
  }
  return levels;
}

/// Maps continuous and integer coordinates to [0,1]; categorical levels pass through.
inline MixedPoint normalize(const DesignSpace& space, const MixedPoint& p) {
  validate_point(space, p);
  MixedPoint out = p;
  for (std::size_t k = 0; k < space.n_continuous(); ++k) {
    const auto& b = space.continuous(k);
    out.continuous[k] = (p.continuous[k] - b.lower) / (b.upper - b.lower);
  }
  for (std::size_t k = 0; k < space.n_integer(); ++k) {
    const auto& b = space.integer(k);
    out.integer[k] = (p.integer[k] - static_cast<double>(b.lower)) / static_cast<double>(b.upper - b.lower);
  }
  return out;
}

/// Inverse of normalize; integer coordinates are rounded to the nearest value.
inline MixedPoint denormalize(const DesignSpace& space, const MixedPoint& unit) {
  check_shape(space, unit);
  MixedPoint out = unit;
  for (std::size_t k = 0; k < space.n_continuous(); ++k) {
    const auto& b = space.continuous(k);
    out.continuous[k] = std::clamp(b.lower + unit.continuous[k] * (b.upper - b.lower), b.lower, b.upper);
  }
  for (std::size_t k = 0; k < space.n_integer(); ++k) {
    const auto& b = space.integer(k);
    const double v = std::round(static_cast<double>(b.lower) + unit.integer[k] * static_cast<double>(b.upper - b.lower));
    out.integer[k] = std::clamp(v, static_cast<double>(b.lower), static_cast<double>(b.upper));
  }
  return out;
}

/// Training data (W, y). Every point is validated against the space.
class Dataset {
 public:
  Dataset(DesignSpace space, std::vector<MixedPoint> points, std::vector<double> targets)
      : space_(std::move(space)), points_(std::move(points)), targets_(std::move(targets)) {
    if (points_.empty()) throw InvalidArgument("dataset needs at least one point");
    if (points_.size() != targets_.size()) {
      throw DimensionMismatch("dataset has " + std::to_string(points_.size()) + " points but " +
                              std::to_string(targets_.size()) + " targets");
    }
    for (const auto& p : points_) validate_point(space_, p);
    for (double y : targets_) {
      if (!std::isfinite(y)) throw InvalidArgument("dataset targets must be finite");
    }
  }

  const DesignSpace& space() const { return space_; }
  const std::vector<MixedPoint>& points() const { return points_; }
  const std::vector<double>& targets() const { return targets_; }
  std::size_t size() const { return points_.size(); }

 private:
  DesignSpace space_;
  std::vector<MixedPoint> points_;
  std::vector<double> targets_;
};

}  // namespace mixgp
