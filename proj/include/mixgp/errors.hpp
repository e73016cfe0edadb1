#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mixgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A continuous or integer coordinate lies outside its bounds (or an integer
/// coordinate is not integral). `index` is the design-space variable index.
class OutOfBounds : public Error {
 public:
  OutOfBounds(std::size_t index, double value)
      : Error("variable " + std::to_string(index) + ": value " + std::to_string(value) +
              " outside its bounds"),
        index_(index),
        value_(value) {}

  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  double value_;
};

/// A categorical coordinate is not in 1..L_i.
class LevelOutOfRange : public Error {
 public:
  LevelOutOfRange(std::size_t index, int level)
      : Error("variable " + std::to_string(index) + ": level " + std::to_string(level) +
              " out of range"),
        index_(index),
        level_(level) {}

  std::size_t index() const noexcept { return index_; }
  int level() const noexcept { return level_; }

 private:
  std::size_t index_;
  int level_;
};

/// A correlation matrix cannot be produced by the exponential hypersphere
/// parameterization.
class NotRepresentable : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed even after jitter escalation.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The objective threw or returned a non-finite value during a search.
class ObjectiveFailure : public Error {
 public:
  ObjectiveFailure(const std::string& what, std::vector<double> point)
      : Error("objective failed: " + what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

class SizeOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace mixgp
