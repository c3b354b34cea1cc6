#pragma once

#include <stdexcept>
#include <string>

namespace ibap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A prescribed vector u_i does not lie in its subspace U_i.
class MembershipError : public Error {
 public:
  MembershipError(std::size_t index, double distance)
      : Error("prescription " + std::to_string(index) + " is not in its subspace (distance " +
              std::to_string(distance) + ")"),
        index_(index),
        distance_(distance) {}

  std::size_t index() const noexcept { return index_; }
  double distance() const noexcept { return distance_; }

 private:
  std::size_t index_;
  double distance_;
};

/// A stated precondition of an application reduction does not hold.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string condition, std::size_t index, const std::string& what)
      : Error(what), condition_(std::move(condition)), index_(index) {}

  const std::string& condition() const noexcept { return condition_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::string condition_;
  std::size_t index_;
};

}  // namespace ibap
