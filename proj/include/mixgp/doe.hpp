#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mixgp/design_space.hpp"
#include "mixgp/errors.hpp"

namespace mixgp {

/// Reproducible random source for designs: std::mt19937_64 (fully specified by
/// the C++ standard) with explicit conversions, so that designs do not depend
/// on a standard library's distribution implementations.
///   uniform()    = (next() >> 11) * 2^-53, in [0, 1)
///   below(n)     = next() % n
///   shuffle(v)   = Fisher-Yates from the back, swapping v[i] with v[below(i + 1)]
class DesignRng {
 public:
  explicit DesignRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

/// Latin hypercube design. Continuous and integer dimensions get one sample per
/// equal-width stratum (uniform within the stratum, integers rounded after
/// unscaling); categorical dimensions cycle a random permutation of the levels
/// and the resulting labels are shuffled across points. Dimensions are drawn
/// in design-space order.
inline std::vector<MixedPoint> lhs(const DesignSpace& space, int n_points, std::uint64_t seed) {
  if (n_points < 1) throw InvalidArgument("n_points must be >= 1");
  const auto n = static_cast<std::size_t>(n_points);
  DesignRng rng(seed);
  std::vector<MixedPoint> points(n);
  for (auto& p : points) {
    p.continuous.resize(space.n_continuous());
    p.integer.resize(space.n_integer());
    p.categorical.resize(space.n_categorical());
  }
  for (std::size_t v = 0; v < space.size(); ++v) {
    const auto& slot = space.slot(v);
    const auto& spec = space.variables()[v];
    if (slot.kind == VariableKind::Categorical) {
      const auto L = static_cast<std::size_t>(spec.as_categorical().count());
      const auto perm = rng.permutation(L);
      std::vector<int> labels(n);
      for (std::size_t k = 0; k < n; ++k) labels[k] = static_cast<int>(perm[k % L]) + 1;
      rng.shuffle(labels);
      for (std::size_t k = 0; k < n; ++k) points[k].categorical[slot.position] = labels[k];
      continue;
    }
    const auto strata = rng.permutation(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double unit = (static_cast<double>(strata[k]) + rng.uniform()) / static_cast<double>(n);
      if (slot.kind == VariableKind::Continuous) {
        const auto& b = spec.as_continuous();
        points[k].continuous[slot.position] = std::clamp(b.lower + unit * (b.upper - b.lower), b.lower, b.upper);
      } else {
        const auto& b = spec.as_integer();
        const double v_real = static_cast<double>(b.lower) + unit * static_cast<double>(b.upper - b.lower);
        points[k].integer[slot.position] =
            std::clamp(std::round(v_real), static_cast<double>(b.lower), static_cast<double>(b.upper));
      }
    }
  }
  return points;
}

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

/// Full-factorial grid in row-major design-space order (first variable
/// slowest). `points_per_dim` has one count per continuous or integer
/// variable, in design-space order; a single count applies to all of them.
/// Integer variables use every value when the count is 0 or covers the range,
/// else rounded linspace values. Categorical variables use every level.
inline std::vector<MixedPoint> grid(const DesignSpace& space, const std::vector<int>& points_per_dim,
                                    std::size_t cap = kDefaultGridCap) {
  const std::size_t numeric = space.n_continuous() + space.n_integer();
  if (numeric > 0 && points_per_dim.size() != numeric && points_per_dim.size() != 1) {
    throw InvalidArgument("grid needs one count per continuous/integer variable");
  }
  std::vector<std::vector<double>> axes(space.size());
  std::size_t numeric_seen = 0;
  double total = 1.0;
  const auto check_size = [cap](double size) {
    if (size > static_cast<double>(cap)) {
      throw SizeOverflow("grid of " + std::to_string(static_cast<long long>(size)) + " points exceeds cap " +
                         std::to_string(cap));
    }
  };
  for (std::size_t v = 0; v < space.size(); ++v) {
    const auto& spec = space.variables()[v];
    auto& axis = axes[v];
    if (spec.kind() == VariableKind::Categorical) {
      for (int l = 1; l <= spec.as_categorical().count(); ++l) axis.push_back(l);
    } else {
      const int count = points_per_dim.size() == 1 ? points_per_dim[0] : points_per_dim[numeric_seen];
      ++numeric_seen;
      if (spec.kind() == VariableKind::Continuous) {
        if (count < 1) throw InvalidArgument("grid counts must be >= 1");
        check_size(total * count);
        const auto& b = spec.as_continuous();
        for (int i = 0; i < count; ++i) {
          axis.push_back(count == 1 ? (b.lower + b.upper) / 2.0
                                    : (i == count - 1 ? b.upper
                                                      : b.lower + (b.upper - b.lower) * i / (count - 1)));
        }
      } else {
        if (count < 0) throw InvalidArgument("grid counts must be >= 0");
        const auto& b = spec.as_integer();
        const long range = b.upper - b.lower + 1;
        check_size(total * static_cast<double>(count == 0 || count >= range ? range : count));
        if (count == 0 || count >= range) {
          for (long z = b.lower; z <= b.upper; ++z) axis.push_back(static_cast<double>(z));
        } else {
          for (int i = 0; i < count; ++i) {
            const double z = count == 1 ? (b.lower + b.upper) / 2.0
                                        : b.lower + static_cast<double>(b.upper - b.lower) * i / (count - 1);
            const double r = std::round(z);
            if (axis.empty() || axis.back() != r) axis.push_back(r);
          }
        }
      }
    }
    total *= static_cast<double>(axis.size());
  }
  check_size(total);

  const auto n = static_cast<std::size_t>(total);
  std::vector<MixedPoint> points;
  points.reserve(n);
  std::vector<std::size_t> idx(space.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    MixedPoint p;
    p.continuous.resize(space.n_continuous());
    p.integer.resize(space.n_integer());
    p.categorical.resize(space.n_categorical());
    for (std::size_t v = 0; v < space.size(); ++v) {
      const auto& slot = space.slot(v);
      const double value = axes[v][idx[v]];
      switch (slot.kind) {
        case VariableKind::Continuous: p.continuous[slot.position] = value; break;
        case VariableKind::Integer: p.integer[slot.position] = value; break;
        case VariableKind::Categorical: p.categorical[slot.position] = static_cast<int>(value); break;
      }
    }
    points.push_back(std::move(p));
    for (std::size_t v = space.size(); v-- > 0;) {
      if (++idx[v] < axes[v].size()) break;
      idx[v] = 0;
    }
  }
  return points;
}

}  // namespace mixgp
