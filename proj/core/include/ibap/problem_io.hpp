#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibap/applications.hpp"

// Problem documents are JSON. Real scalars are plain numbers; complex scalars
// are [re, im] pairs. A family problem looks like
//
//   { "field": "real", "ambient_dim": 3, "rank_tol": 0,
//     "subspaces": [ { "name": "U1", "vectors": [[1, 0, 0]] }, ... ],
//     "prescription": [[2, 0, 0], ...],
//     "anchor": [0, 0, 1] }
//
// with "rank_tol", "prescription" and "anchor" optional.

namespace ibap::io {

class ParseError : public Error {
 public:
  using Error::Error;
};

struct NamedSpan {
  std::string name;
  std::vector<Eigen::VectorXcd> vectors;
};

struct ProblemFile {
  Field field = Field::real;
  Eigen::Index ambient_dim = 0;
  double rank_tol = 0.0;
  std::vector<NamedSpan> subspaces;
  std::optional<std::vector<Eigen::VectorXcd>> prescription;
  std::optional<Eigen::VectorXcd> anchor;

  template <FieldScalar Scalar>
  Family<Scalar> family() const;

  template <FieldScalar Scalar>
  Prescription<Scalar> prescription_as() const;

  template <FieldScalar Scalar>
  std::optional<Vector<Scalar>> anchor_as() const;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem(const std::string& path);
std::string write_problem(const ProblemFile& problem);

struct MomentsFile {
  Field field = Field::real;
  Eigen::Index ambient_dim = 0;
  std::optional<std::vector<Eigen::VectorXcd>> V;  // spanning set; absent means the full space
  std::vector<Eigen::VectorXcd> vectors;
  std::vector<cplx> etas;
};

MomentsFile parse_moments(const std::string& text);
MomentsFile read_moments(const std::string& path);

struct SignalFile {
  MaskedSignalProblem problem;
  std::vector<Vector<cplx>> measurements;
  std::vector<cplx> etas;
};

SignalFile parse_signal(const std::string& text);
SignalFile read_signal(const std::string& path);

/// `iter,max_residual,dist_to_solution,bound` with blank cells for absent values.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double value);

/// Parse a JSON array as a vector in the given field.
Eigen::VectorXcd parse_vector_json(const std::string& text, Field field);

std::string read_text(const std::string& path);

}  // namespace ibap::io
