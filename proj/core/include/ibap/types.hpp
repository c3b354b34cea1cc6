#pragma once

#include <complex>
#include <string_view>
#include <type_traits>

#include <Eigen/Dense>

namespace ibap {

enum class Field { real, complex };

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
concept FieldScalar =
    std::is_same_v<Scalar, double> || std::is_same_v<Scalar, std::complex<double>>;

template <FieldScalar Scalar>
constexpr Field field_of() {
  return is_complex<Scalar>::value ? Field::complex : Field::real;
}

constexpr std::string_view to_string(Field f) {
  return f == Field::real ? "real" : "complex";
}

template <FieldScalar Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <FieldScalar Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Inner product <x, y>, linear in x and conjugate-linear in y.
template <FieldScalar Scalar>
Scalar inner(const Vector<Scalar>& x, const Vector<Scalar>& y) {
  return y.dot(x);
}

}  // namespace ibap
