#include "ibap/problem_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ibap::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

Field parse_field(const json& doc) {
  if (!doc.contains("field")) return Field::real;
  const auto& f = doc.at("field");
  if (f == "real") return Field::real;
  if (f == "complex") return Field::complex;
  fail("field must be \"real\" or \"complex\"");
}

cplx parse_scalar(const json& j, Field field, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (field == Field::complex && j.is_array() && j.size() == 2 && j[0].is_number() &&
      j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(where + ": expected " +
       (field == Field::real ? std::string("a number") : std::string("a number or [re, im]")));
}

Eigen::VectorXcd parse_vector(const json& j, Field field, Eigen::Index expected,
                              const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    fail(where + ": expected " + std::to_string(expected) + " entries, got " +
         std::to_string(j.size()));
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = parse_scalar(j[k], field, where);
  }
  return v;
}

std::vector<Eigen::VectorXcd> parse_vectors(const json& j, Field field, Eigen::Index n,
                                            const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of vectors");
  std::vector<Eigen::VectorXcd> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_vector(j[k], field, n, where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

json scalar_json(const cplx& z, Field field) {
  if (field == Field::real) return z.real();
  return json::array({z.real(), z.imag()});
}

json vector_json(const Eigen::VectorXcd& v, Field field) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(scalar_json(v(k), field));
  return arr;
}

json parse_document(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) fail("document must be a JSON object");
    return doc;
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Eigen::Index positive_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
    fail(std::string("missing or non-integer \"") + key + "\"");
  }
  const auto v = doc.at(key).get<long long>();
  if (v < 1) fail(std::string("\"") + key + "\" must be positive");
  return static_cast<Eigen::Index>(v);
}

std::vector<Eigen::Index> parse_mask(const json& doc, const char* key) {
  std::vector<Eigen::Index> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) fail(std::string("\"") + key + "\" must be an integer list");
  for (const auto& x : arr) {
    if (!x.is_number_integer()) fail(std::string("\"") + key + "\" must be an integer list");
    out.push_back(static_cast<Eigen::Index>(x.get<long long>()));
  }
  return out;
}

std::vector<cplx> parse_values(const json& doc, const char* key) {
  std::vector<cplx> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) fail(std::string("\"") + key + "\" must be a list");
  for (const auto& x : arr) out.push_back(parse_scalar(x, Field::complex, key));
  return out;
}

template <FieldScalar Scalar>
Vector<Scalar> narrow(const Eigen::VectorXcd& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return v.real();
  } else {
    return v;
  }
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile parse_problem(const std::string& text) {
  const json doc = parse_document(text);
  ProblemFile p;
  try {
    p.field = parse_field(doc);
    p.ambient_dim = positive_int(doc, "ambient_dim");
    if (doc.contains("rank_tol")) {
      if (!doc.at("rank_tol").is_number()) fail("\"rank_tol\" must be a number");
      p.rank_tol = doc.at("rank_tol").get<double>();
      if (p.rank_tol < 0.0) fail("\"rank_tol\" must be nonnegative");
    }
    if (!doc.contains("subspaces") || !doc.at("subspaces").is_array() ||
        doc.at("subspaces").empty()) {
      fail("\"subspaces\" must be a nonempty list");
    }
    std::size_t idx = 0;
    for (const auto& s : doc.at("subspaces")) {
      NamedSpan span;
      const std::string where = "subspaces[" + std::to_string(idx) + "]";
      if (!s.is_object() || !s.contains("vectors")) fail(where + ": expected {name, vectors}");
      span.name = s.contains("name") ? s.at("name").get<std::string>() : "U" + std::to_string(idx + 1);
      span.vectors = parse_vectors(s.at("vectors"), p.field, p.ambient_dim, where + ".vectors");
      p.subspaces.push_back(std::move(span));
      ++idx;
    }
    if (doc.contains("prescription")) {
      p.prescription =
          parse_vectors(doc.at("prescription"), p.field, p.ambient_dim, "prescription");
      if (p.prescription->size() != p.subspaces.size()) {
        fail("prescription has " + std::to_string(p.prescription->size()) + " vectors for " +
             std::to_string(p.subspaces.size()) + " subspaces");
      }
    }
    if (doc.contains("anchor")) {
      p.anchor = parse_vector(doc.at("anchor"), p.field, p.ambient_dim, "anchor");
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed problem: ") + e.what());
  }
  return p;
}

ProblemFile read_problem(const std::string& path) { return parse_problem(read_text(path)); }

std::string write_problem(const ProblemFile& p) {
  json doc;
  doc["field"] = std::string(to_string(p.field));
  doc["ambient_dim"] = p.ambient_dim;
  if (p.rank_tol > 0.0) doc["rank_tol"] = p.rank_tol;
  json subs = json::array();
  for (const auto& s : p.subspaces) {
    json vs = json::array();
    for (const auto& v : s.vectors) vs.push_back(vector_json(v, p.field));
    subs.push_back({{"name", s.name}, {"vectors", vs}});
  }
  doc["subspaces"] = subs;
  if (p.prescription) {
    json pres = json::array();
    for (const auto& v : *p.prescription) pres.push_back(vector_json(v, p.field));
    doc["prescription"] = pres;
  }
  if (p.anchor) doc["anchor"] = vector_json(*p.anchor, p.field);
  return doc.dump(2) + "\n";
}

template <FieldScalar Scalar>
Family<Scalar> ProblemFile::family() const {
  std::vector<Subspace<Scalar>> subs;
  for (const auto& s : subspaces) {
    std::vector<Vector<Scalar>> vs;
    for (const auto& v : s.vectors) vs.push_back(narrow<Scalar>(v));
    subs.push_back(Subspace<Scalar>::from_spanning(vs, ambient_dim, rank_tol));
  }
  return Family<Scalar>(std::move(subs));
}

template <FieldScalar Scalar>
Prescription<Scalar> ProblemFile::prescription_as() const {
  if (!prescription) fail("problem has no \"prescription\"");
  Prescription<Scalar> out;
  for (const auto& v : *prescription) out.push_back(narrow<Scalar>(v));
  return out;
}

template <FieldScalar Scalar>
std::optional<Vector<Scalar>> ProblemFile::anchor_as() const {
  if (!anchor) return std::nullopt;
  return narrow<Scalar>(*anchor);
}

template Family<double> ProblemFile::family<double>() const;
template Family<cplx> ProblemFile::family<cplx>() const;
template Prescription<double> ProblemFile::prescription_as<double>() const;
template Prescription<cplx> ProblemFile::prescription_as<cplx>() const;
template std::optional<Vector<double>> ProblemFile::anchor_as<double>() const;
template std::optional<Vector<cplx>> ProblemFile::anchor_as<cplx>() const;

MomentsFile parse_moments(const std::string& text) {
  const json doc = parse_document(text);
  MomentsFile m;
  try {
    m.field = parse_field(doc);
    m.ambient_dim = positive_int(doc, "ambient_dim");
    if (doc.contains("V")) m.V = parse_vectors(doc.at("V"), m.field, m.ambient_dim, "V");
    if (!doc.contains("moments") || !doc.at("moments").is_array()) {
      fail("\"moments\" must be a list of {vector, eta}");
    }
    std::size_t idx = 0;
    for (const auto& c : doc.at("moments")) {
      const std::string where = "moments[" + std::to_string(idx++) + "]";
      if (!c.is_object() || !c.contains("vector") || !c.contains("eta")) {
        fail(where + ": expected {vector, eta}");
      }
      m.vectors.push_back(parse_vector(c.at("vector"), m.field, m.ambient_dim, where + ".vector"));
      m.etas.push_back(parse_scalar(c.at("eta"), m.field, where + ".eta"));
    }
  } catch (const json::exception& e) {
    fail(std::string("malformed moments problem: ") + e.what());
  }
  return m;
}

MomentsFile read_moments(const std::string& path) { return parse_moments(read_text(path)); }

SignalFile parse_signal(const std::string& text) {
  const json doc = parse_document(text);
  SignalFile s;
  try {
    auto& p = s.problem;
    p.n = positive_int(doc, "n");
    p.time_mask = parse_mask(doc, "time_mask");
    p.freq_mask = parse_mask(doc, "freq_mask");
    p.time_values = parse_values(doc, "time_values");
    p.freq_values = parse_values(doc, "freq_values");
    if (doc.contains("measurements")) {
      std::size_t idx = 0;
      for (const auto& c : doc.at("measurements")) {
        const std::string where = "measurements[" + std::to_string(idx++) + "]";
        if (!c.is_object() || !c.contains("vector") || !c.contains("eta")) {
          fail(where + ": expected {vector, eta}");
        }
        s.measurements.push_back(parse_vector(c.at("vector"), Field::complex, p.n, where));
        s.etas.push_back(parse_scalar(c.at("eta"), Field::complex, where + ".eta"));
      }
    }
    p.validate();
  } catch (const json::exception& e) {
    fail(std::string("malformed signal problem: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  }
  return s;
}

SignalFile read_signal(const std::string& path) { return parse_signal(read_text(path)); }

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "iter,max_residual,dist_to_solution,bound\n";
  for (const auto& row : trace.iterations) {
    out << row.index << ',' << format_double(row.max_residual) << ',';
    if (row.dist_to_solution) out << format_double(*row.dist_to_solution);
    out << ',';
    if (row.bound) out << format_double(*row.bound);
    out << '\n';
  }
}

Eigen::VectorXcd parse_vector_json(const std::string& text, Field field) {
  try {
    return parse_vector(json::parse(text), field, -1, "vector");
  } catch (const json::exception& e) {
    fail(std::string("invalid vector: ") + e.what());
  }
}

}  // namespace ibap::io
