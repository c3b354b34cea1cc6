#include "commands.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ibap/problem_io.hpp"

namespace ibap::cli {

namespace {

using nlohmann::json;
using io::format_double;

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

template <FieldScalar Scalar>
json vector_json(const Vector<Scalar>& x) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if constexpr (std::is_same_v<Scalar, double>) {
      arr.push_back(x(k));
    } else {
      arr.push_back(json::array({x(k).real(), x(k).imag()}));
    }
  }
  return arr;
}

template <FieldScalar Scalar>
std::string vector_text(const Vector<Scalar>& x) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (k > 0) s += ", ";
    if constexpr (std::is_same_v<Scalar, double>) {
      s += format_double(x(k));
    } else {
      s += "[" + format_double(x(k).real()) + ", " + format_double(x(k).imag()) + "]";
    }
  }
  return s + "]";
}

json report_json(const IbapReport& r) {
  json levels = json::array();
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& l = r.levels[i];
    levels.push_back({{"level", i + 1},
                      {"norm_pipiplus", number_json(l.norm_pipiplus)},
                      {"cos_angle", number_json(l.cos_angle)},
                      {"cos_complements", number_json(l.cos_complements)},
                      {"gamma", number_json(l.gamma)},
                      {"degenerate", l.degenerate},
                      {"dim_i", l.dim_i},
                      {"dim_iplus", l.dim_iplus}});
  }
  return {{"verdict", r.verdict},     {"independent", r.independent},
          {"alpha", number_json(r.alpha)}, {"sum_dims", r.sum_dims},
          {"dim_sum", r.dim_sum},     {"sums_closed", r.sums_closed},
          {"levels", levels}};
}

json certificate_json(const InfeasibilityCertificate& c) {
  return {{"max_residual", c.max_residual},
          {"stacked_residual", c.stacked_residual},
          {"tolerance", c.tolerance},
          {"sum_zero_witness", c.sum_zero_witness},
          {"lower_bound", c.lower_bound}};
}

void print_report(std::ostream& out, const IbapReport& r) {
  out << "verdict: " << (r.verdict ? "IBAP holds" : "IBAP fails") << '\n';
  out << "independent: " << (r.independent ? "yes" : "no") << '\n';
  out << "sum of dims: " << r.sum_dims << ", dim of sum: " << r.dim_sum << '\n';
  out << "alpha: " << format_double(r.alpha) << '\n';
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& l = r.levels[i];
    out << "level " << i + 1 << ": ||P_i P_i+|| = " << format_double(l.norm_pipiplus)
        << ", c(U_i, U_i+) = " << format_double(l.cos_angle)
        << ", c(U_i^perp, U_i+^perp) = " << format_double(l.cos_complements)
        << ", gamma = " << (std::isfinite(l.gamma) ? format_double(l.gamma) : "inf")
        << (l.degenerate ? " (numerically degenerate)" : "") << '\n';
  }
}

void print_certificate(std::ostream& out, const InfeasibilityCertificate& c) {
  out << "infeasible: least-squares max residual " << format_double(c.max_residual)
      << " exceeds tolerance " << format_double(c.tolerance) << '\n';
  out << "stacked residual: " << format_double(c.stacked_residual) << '\n';
  if (c.sum_zero_witness) {
    out << "witness: prescription sums to zero with nonzero terms; residual lower bound "
        << format_double(c.lower_bound) << '\n';
  }
}

void write_json_file(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << doc.dump(2) << '\n';
}

template <FieldScalar Scalar>
void print_residuals(std::ostream& out, const Family<Scalar>& F, const Prescription<Scalar>& u,
                     const Vector<Scalar>& x, json& doc) {
  json per = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = (F[i].project(x) - u[i]).norm();
    worst = std::max(worst, r);
    per.push_back(r);
    out << "residual " << i + 1 << ": " << format_double(r) << '\n';
  }
  out << "max residual: " << format_double(worst) << '\n';
  doc["residuals"] = per;
  doc["max_residual"] = worst;
}

struct CheckArgs {
  std::string file;
  std::string json_out;
};

struct SolveArgs {
  std::string file;
  std::string method = "recursion";
  std::string anchor;
  std::string json_out;
};

struct IterateArgs {
  std::string file;
  std::size_t max_iter = 10000;
  double tol = 0.0;
  std::string trace;
  std::string anchor;
  std::string json_out;
};

struct MomentsArgs {
  std::string file;
  std::string json_out;
};

struct SignalArgs {
  std::string file;
  std::string json_out;
};

struct SlowArgs {
  std::size_t N = 64;
  std::string law = "harmonic";
  double alpha = 1.0;
  std::size_t max_iter = 10000;
  double tol = 0.0;
  std::string trace;
  std::string json_out;
};

template <FieldScalar Scalar>
int check(const io::ProblemFile& p, const CheckArgs& a, std::ostream& out) {
  const auto F = p.family<Scalar>();
  const auto report = verify_ibap(F);
  const bool unique = uniqueness_check(F);
  print_report(out, report);
  out << "unique solutions: " << (unique ? "yes" : "no") << '\n';
  json doc = report_json(report);
  doc["unique"] = unique;
  if (p.prescription) {
    const auto u = p.prescription_as<Scalar>();
    const auto cert = infeasibility_certificate(F, u);
    if (cert) {
      print_certificate(out, *cert);
      doc["certificate"] = certificate_json(*cert);
    } else {
      out << "prescription: feasible\n";
    }
    doc["feasible"] = !cert.has_value();
  }
  write_json_file(a.json_out, doc);
  return report.verdict ? kSuccess : kHypothesis;
}

template <FieldScalar Scalar>
std::optional<Vector<Scalar>> anchor_of(const io::ProblemFile& p, const std::string& flag) {
  if (!flag.empty()) {
    Eigen::VectorXcd v = io::parse_vector_json(flag, p.field);
    if (v.size() != p.ambient_dim) {
      throw io::ParseError("anchor has " + std::to_string(v.size()) + " entries, expected " +
                           std::to_string(p.ambient_dim));
    }
    if constexpr (std::is_same_v<Scalar, double>) {
      return Vector<double>(v.real());
    } else {
      return v;
    }
  }
  return p.anchor_as<Scalar>();
}

template <FieldScalar Scalar>
void require_feasible(const Family<Scalar>& F, const Prescription<Scalar>& u) {
  if (auto cert = infeasibility_certificate(F, u)) {
    throw Infeasible("prescription is inconsistent: no x satisfies every constraint", *cert);
  }
}

template <FieldScalar Scalar>
int solve(const io::ProblemFile& p, const SolveArgs& a, std::ostream& out) {
  const auto F = p.family<Scalar>();
  const auto u = p.prescription_as<Scalar>();
  require_feasible(F, u);
  const auto anchor = anchor_of<Scalar>(p, a.anchor);
  json doc;
  doc["method"] = a.method;
  Vector<Scalar> x;
  if (a.method == "recursion") {
    x = solve_min_norm(F, u);
    if (anchor) {
      const auto par = complement(sum(std::span<const Subspace<Scalar>>(F.subspaces()),
                                      F.ambient_dim()));
      x += par.project(*anchor - x);
    }
  } else if (a.method == "direct") {
    x = direct_solve(F, u, anchor).particular;
  } else {
    const Vector<Scalar> r = anchor ? *anchor : Vector<Scalar>::Zero(F.ambient_dim());
    SolveOptions opts;
    opts.tol = default_tol();
    auto [sol, trace] = best_approximation(r, F, u, opts);
    x = std::move(sol);
    out << "sweeps: " << trace.iterations.size() << (trace.converged ? "" : " (not converged)")
        << '\n';
    doc["sweeps"] = trace.iterations.size();
    doc["converged"] = trace.converged;
  }
  out << (anchor ? "best approximation: " : "minimal-norm solution: ") << vector_text(x) << '\n';
  out << "norm: " << format_double(x.norm()) << '\n';
  doc["solution"] = vector_json(x);
  doc["anchored"] = anchor.has_value();
  print_residuals(out, F, u, x, doc);
  write_json_file(a.json_out, doc);
  return kSuccess;
}

template <FieldScalar Scalar>
int iterate(const io::ProblemFile& p, const IterateArgs& a, std::ostream& out) {
  const auto F = p.family<Scalar>();
  const auto u = p.prescription_as<Scalar>();
  require_feasible(F, u);
  const auto anchor = anchor_of<Scalar>(p, a.anchor);
  const Vector<Scalar> r = anchor ? *anchor : Vector<Scalar>::Zero(F.ambient_dim());
  SolveOptions opts;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol > 0.0 ? a.tol : default_tol();
  opts.record_trace = !a.trace.empty();
  const auto [x, trace] = best_approximation(r, F, u, opts);

  if (!a.trace.empty()) {
    std::ofstream csv(a.trace);
    if (!csv) throw Error("cannot write " + a.trace);
    io::write_trace_csv(csv, trace);
  }
  const double last = trace.iterations.empty() ? 0.0 : trace.iterations.back().max_residual;
  out << "sweeps: " << trace.iterations.size() << '\n';
  out << "converged: " << (trace.converged ? "yes" : "no") << '\n';
  out << "final max residual: " << format_double(last) << '\n';
  if (trace.alpha) out << "alpha: " << format_double(*trace.alpha) << '\n';
  out << "solution: " << vector_text(x) << '\n';

  json doc{{"sweeps", trace.iterations.size()},
           {"converged", trace.converged},
           {"max_residual", last},
           {"solution", vector_json(x)}};
  if (trace.alpha) doc["alpha"] = *trace.alpha;
  if (trace.initial_distance) doc["initial_distance"] = *trace.initial_distance;
  write_json_file(a.json_out, doc);
  return kSuccess;
}

template <FieldScalar Scalar>
Vector<Scalar> narrow(const Eigen::VectorXcd& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return v.real();
  } else {
    return v;
  }
}

template <FieldScalar Scalar>
int moments(const io::MomentsFile& m, const MomentsArgs& a, std::ostream& out) {
  std::vector<Vector<Scalar>> vs;
  std::vector<Scalar> etas;
  for (const auto& v : m.vectors) vs.push_back(narrow<Scalar>(v));
  for (const auto& e : m.etas) {
    if constexpr (std::is_same_v<Scalar, double>) {
      etas.push_back(e.real());
    } else {
      etas.push_back(e);
    }
  }
  Subspace<Scalar> V = Subspace<Scalar>::full(m.ambient_dim);
  if (m.V) {
    std::vector<Vector<Scalar>> span;
    for (const auto& v : *m.V) span.push_back(narrow<Scalar>(v));
    V = Subspace<Scalar>::from_spanning(span, m.ambient_dim);
  }
  const auto x = solve_moments(V, vs, etas);
  out << "solution: " << vector_text(x) << '\n';
  out << "norm: " << format_double(x.norm()) << '\n';
  json doc{{"solution", vector_json(x)}};
  json moments = json::array();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Scalar got = inner<Scalar>(x, vs[i]);
    out << "moment " << i + 1 << ": residual " << format_double(std::abs(got - etas[i])) << '\n';
    moments.push_back(std::abs(got - etas[i]));
  }
  doc["moment_residuals"] = moments;
  write_json_file(a.json_out, doc);
  return kSuccess;
}

int signal(const SignalArgs& a, std::ostream& out) {
  const auto s = io::read_signal(a.file);
  const auto x = s.measurements.empty()
                     ? time_frequency_recover(s.problem)
                     : recover_with_measurements(s.problem, s.measurements, s.etas);
  const auto X = dft(x);
  double time_res = 0.0;
  double freq_res = 0.0;
  for (std::size_t k = 0; k < s.problem.time_mask.size(); ++k) {
    time_res = std::max(time_res, std::abs(x(s.problem.time_mask[k]) - s.problem.time_values[k]));
  }
  for (std::size_t k = 0; k < s.problem.freq_mask.size(); ++k) {
    freq_res = std::max(freq_res, std::abs(X(s.problem.freq_mask[k]) - s.problem.freq_values[k]));
  }
  out << "|A| |B| < n: " << (donoho_stark_condition(s.problem) ? "yes" : "no") << '\n';
  out << "||P_1 P_2||: " << format_double(masked_pair_norm(s.problem)) << '\n';
  out << "signal: " << vector_text(x) << '\n';
  out << "time residual: " << format_double(time_res) << '\n';
  out << "frequency residual: " << format_double(freq_res) << '\n';
  write_json_file(a.json_out, {{"signal", vector_json(x)},
                               {"time_residual", time_res},
                               {"frequency_residual", freq_res}});
  return kSuccess;
}

int slowdemo(const SlowArgs& a, std::ostream& out) {
  const SlowFamilySpec spec = a.law == "harmonic" ? SlowFamilySpec::harmonic(a.N)
                                                  : SlowFamilySpec::constant(a.N, a.alpha);
  spec.validate();
  SolveOptions opts;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol > 0.0 ? a.tol : default_tol();
  const Vector<double> r = Vector<double>::Ones(2 * static_cast<Eigen::Index>(a.N));
  const auto res = slow_convergence_demo(spec, r, opts);
  if (!a.trace.empty()) {
    std::ofstream csv(a.trace);
    if (!csv) throw Error("cannot write " + a.trace);
    io::write_trace_csv(csv, res.trace);
  }
  const double alpha = res.trace.alpha.value_or(std::numeric_limits<double>::quiet_NaN());
  out << "N: " << a.N << '\n';
  out << "predicted_norm: " << format_double(res.predicted_norm) << '\n';
  out << "predicted_ratio: " << format_double(res.predicted_norm * res.predicted_norm) << '\n';
  out << "worst_block: " << res.worst_block << '\n';
  out << "worst_block_ratio: " << format_double(res.worst_block_ratio) << '\n';
  out << "alpha: " << format_double(alpha) << '\n';
  out << "sweeps: " << res.trace.iterations.size() << '\n';
  out << "converged: " << (res.trace.converged ? "yes" : "no") << '\n';
  write_json_file(a.json_out, {{"N", a.N},
                               {"predicted_norm", res.predicted_norm},
                               {"worst_block", res.worst_block},
                               {"worst_block_ratio", res.worst_block_ratio},
                               {"alpha", number_json(alpha)},
                               {"sweeps", res.trace.iterations.size()},
                               {"converged", res.trace.converged}});
  return kSuccess;
}

template <template <class> class Fn, class... Args>
int dispatch(Field field, Args&&... args) {
  return field == Field::real ? Fn<double>::call(std::forward<Args>(args)...)
                              : Fn<cplx>::call(std::forward<Args>(args)...);
}

template <class S>
struct CheckFn {
  static int call(const io::ProblemFile& p, const CheckArgs& a, std::ostream& o) {
    return check<S>(p, a, o);
  }
};
template <class S>
struct SolveFn {
  static int call(const io::ProblemFile& p, const SolveArgs& a, std::ostream& o) {
    return solve<S>(p, a, o);
  }
};
template <class S>
struct IterateFn {
  static int call(const io::ProblemFile& p, const IterateArgs& a, std::ostream& o) {
    return iterate<S>(p, a, o);
  }
};
template <class S>
struct MomentsFn {
  static int call(const io::MomentsFile& m, const MomentsArgs& a, std::ostream& o) {
    return moments<S>(m, a, o);
  }
};

}  // namespace

double default_tol() {
  const char* env = std::getenv("IBAP_DEFAULT_TOL");
  if (env == nullptr || *env == '\0') return 1e-10;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(env, &end);
  if (errno != 0 || end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw Error(std::string("IBAP_DEFAULT_TOL must be a positive number, got \"") + env + "\"");
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse best approximation: IBAP checks and prescribed-projection solvers"};
  app.name("ibap");
  app.require_subcommand(1);

  CheckArgs ca;
  auto* c = app.add_subcommand("check", "Decide the IBAP for a family and report certificates");
  c->add_option("problem", ca.file, "Problem file (JSON)")->required();
  c->add_option("--json-out", ca.json_out, "Write the report as JSON");

  SolveArgs sa;
  auto* s = app.add_subcommand("solve", "Solve P_i x = u_i for the minimal-norm or anchored solution");
  s->add_option("problem", sa.file, "Problem file (JSON)")->required();
  s->add_option("--method", sa.method, "recursion, iterate or direct")
      ->check(CLI::IsMember({"recursion", "iterate", "direct"}));
  s->add_option("--anchor", sa.anchor, "Anchor r as a JSON array; prints the closest solution to r");
  s->add_option("--json-out", sa.json_out, "Write the solution as JSON");

  IterateArgs ia;
  auto* it = app.add_subcommand("iterate", "Run periodic projections and record a convergence trace");
  it->add_option("problem", ia.file, "Problem file (JSON)")->required();
  it->add_option("--max-iter", ia.max_iter, "Maximum number of sweeps")->check(CLI::PositiveNumber);
  it->add_option("--tol", ia.tol, "Stop when every constraint residual is below this")
      ->check(CLI::PositiveNumber);
  it->add_option("--trace", ia.trace, "CSV trace output");
  it->add_option("--anchor", ia.anchor, "Starting point r as a JSON array");
  it->add_option("--json-out", ia.json_out, "Write a summary as JSON");

  MomentsArgs ma;
  auto* mo = app.add_subcommand("moments", "Minimal-norm x in V with prescribed inner products");
  mo->add_option("problem", ma.file, "Moments file (JSON)")->required();
  mo->add_option("--json-out", ma.json_out, "Write the solution as JSON");

  SignalArgs ga;
  auto* sg = app.add_subcommand("signal", "Recover a signal from masked time and frequency data");
  sg->add_option("problem", ga.file, "Signal file (JSON)")->required();
  sg->add_option("--json-out", ga.json_out, "Write the signal as JSON");

  SlowArgs wa;
  auto* sd = app.add_subcommand("slowdemo", "Alternating projections on a slowly converging pair");
  sd->add_option("--N", wa.N, "Number of 2-dimensional blocks")->check(CLI::PositiveNumber);
  sd->add_option("--alpha-law", wa.law, "harmonic (1/(n+1)) or constant")
      ->check(CLI::IsMember({"harmonic", "constant"}));
  sd->add_option("--alpha", wa.alpha, "Value for the constant law")->check(CLI::PositiveNumber);
  sd->add_option("--max-iter", wa.max_iter, "Maximum number of sweeps")->check(CLI::PositiveNumber);
  sd->add_option("--tol", wa.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  sd->add_option("--trace", wa.trace, "CSV trace output");
  sd->add_option("--json-out", wa.json_out, "Write a summary as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (c->parsed()) {
      const auto p = io::read_problem(ca.file);
      return dispatch<CheckFn>(p.field, p, ca, out);
    }
    if (s->parsed()) {
      const auto p = io::read_problem(sa.file);
      return dispatch<SolveFn>(p.field, p, sa, out);
    }
    if (it->parsed()) {
      const auto p = io::read_problem(ia.file);
      return dispatch<IterateFn>(p.field, p, ia, out);
    }
    if (mo->parsed()) {
      const auto m = io::read_moments(ma.file);
      return dispatch<MomentsFn>(m.field, m, ma, out);
    }
    if (sg->parsed()) return signal(ga, out);
    if (sd->parsed()) return slowdemo(wa, out);
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Infeasible& e) {
    err << "error: " << e.what() << '\n';
    print_certificate(err, e.certificate());
    return kInfeasible;
  } catch (const IbapFailure& e) {
    err << "error: " << e.what() << '\n';
    print_report(err, e.report());
    return kHypothesis;
  } catch (const NotIndependent& e) {
    err << "error: " << e.what() << '\n';
    return kHypothesis;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << " [" << e.condition() << ", index " << e.index() << "]\n";
    return kHypothesis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ibap::cli
