#include "eqsrc/job.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "eqsrc/asympt.hpp"
#include "eqsrc/equilibrium.hpp"
#include "eqsrc/errors.hpp"
#include "eqsrc/oracle.hpp"

namespace eqsrc {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
  throw Error("schema-error", path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) schema_fail(path + "/" + it.key(), "unknown key");
  }
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

FieldSpec parse_field(const json& j) {
  if (!j.is_object()) schema_fail("/field", "expected an object");
  reject_unknown(j, "/field", {"kind", "t", "u", "coeffs"});
  if (!j.contains("kind")) schema_fail("/field/kind", "missing");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "quadratic") {
    if (!j.contains("t")) schema_fail("/field/t", "missing for quadratic kind");
    double t = require_number(j["t"], "/field/t");
    if (!(t > 0.0)) schema_fail("/field/t", "must be positive");
    return FieldSpec::quadratic(t);
  }
  if (kind == "quartic") {
    if (!j.contains("u")) schema_fail("/field/u", "missing for quartic kind");
    return FieldSpec::quartic(require_number(j["u"], "/field/u"));
  }
  if (kind == "polynomial") {
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
      schema_fail("/field/coeffs", "missing coefficient array");
    std::vector<double> c;
    for (std::size_t i = 0; i < j["coeffs"].size(); ++i)
      c.push_back(require_number(j["coeffs"][i], "/field/coeffs"));
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() < 3 || (c.size() - 1) % 2 != 0 || c.back() <= 0.0)
      schema_fail("/field/coeffs",
                  "superlinear growth requires even leading degree with "
                  "positive leading coefficient");
    return FieldSpec::polynomial(std::move(c));
  }
  schema_fail("/field/kind", "expected quadratic | quartic | polynomial");
}

bool command_takes_n(const std::string& c) {
  return c == "asymptotics" || c == "oracle-compare" || c == "convergence-report";
}

bool command_takes_points(const std::string& c) {
  return c == "asymptotics" || c == "oracle-compare";
}

// fixed formatting: 17 significant digits, '.' decimal, '\n' line endings
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

JobSpec validate_schema(const std::string& raw) {
  json j;
  try {
    j = json::parse(raw);
  } catch (const std::exception& e) {
    schema_fail("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_fail("", "top level must be an object");
  reject_unknown(j, "", {"command", "field", "n_list", "k", "points", "delta",
                         "precision_bits", "tol", "output_path", "format",
                         "grid_points", "overrides"});
  JobSpec spec;
  if (!j.contains("command")) schema_fail("/command", "missing");
  spec.command = j["command"].get<std::string>();
  if (spec.command != "equilibrium" && spec.command != "density" &&
      spec.command != "asymptotics" && spec.command != "oracle-compare" &&
      spec.command != "convergence-report")
    schema_fail("/command", "unknown command " + spec.command);
  if (!j.contains("field")) schema_fail("/field", "missing");
  spec.field = parse_field(j["field"]);

  if (j.contains("n_list")) {
    if (!j["n_list"].is_array()) schema_fail("/n_list", "expected an array");
    for (const auto& v : j["n_list"]) {
      if (!v.is_number_integer() || v.get<long long>() < 1)
        schema_fail("/n_list", "entries must be positive integers");
      spec.n_list.push_back(v.get<int>());
    }
  }
  if (command_takes_n(spec.command) && spec.n_list.empty())
    schema_fail("/n_list", "nonempty n_list required for " + spec.command);

  if (j.contains("k")) {
    if (!j["k"].is_number_integer()) schema_fail("/k", "expected an integer");
    spec.k = j["k"].get<int>();
  }
  if (j.contains("points")) {
    if (!j["points"].is_array()) schema_fail("/points", "expected an array");
    for (std::size_t i = 0; i < j["points"].size(); ++i) {
      const auto& pt = j["points"][i];
      std::string path = "/points/" + std::to_string(i);
      if (!pt.is_object()) schema_fail(path, "expected {re, im}");
      reject_unknown(pt, path, {"re", "im"});
      if (!pt.contains("re")) schema_fail(path + "/re", "missing");
      double re = require_number(pt["re"], path + "/re");
      double im = pt.contains("im") ? require_number(pt["im"], path + "/im") : 0.0;
      spec.points.emplace_back(re, im);
    }
  }
  if (command_takes_points(spec.command) && spec.points.empty())
    schema_fail("/points", "nonempty points required for " + spec.command);
  if (spec.command == "oracle-compare")
    for (std::size_t i = 0; i < spec.points.size(); ++i)
      if (spec.points[i].imag() != 0.0)
        schema_fail("/points/" + std::to_string(i), "oracle-compare takes real points");

  if (j.contains("delta")) {
    spec.delta = require_number(j["delta"], "/delta");
    if (spec.delta < 0.0) schema_fail("/delta", "must be nonnegative");
  }
  if (j.contains("precision_bits")) {
    if (!j["precision_bits"].is_number_integer())
      schema_fail("/precision_bits", "expected an integer");
    spec.precision_bits = j["precision_bits"].get<int>();
  }
  if (const char* env = std::getenv("EQSRC_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 53) spec.precision_bits = static_cast<int>(v);
  }
  if (spec.precision_bits < 53) schema_fail("/precision_bits", "must be >= 53");

  if (j.contains("tol")) {
    spec.tol = require_number(j["tol"], "/tol");
    if (!(spec.tol > 0.0 && spec.tol < 1.0)) schema_fail("/tol", "must be in (0, 1)");
  }
  if (j.contains("output_path")) spec.output_path = j["output_path"].get<std::string>();
  if (j.contains("format")) {
    spec.format = j["format"].get<std::string>();
    if (spec.format != "json" && spec.format != "csv")
      schema_fail("/format", "expected csv or json");
  } else {
    spec.format = (spec.command == "equilibrium") ? "json" : "csv";
  }
  if (j.contains("grid_points")) {
    if (!j["grid_points"].is_number_integer() || j["grid_points"].get<int>() < 5)
      schema_fail("/grid_points", "expected an integer >= 5");
    spec.grid_points = j["grid_points"].get<int>();
  }
  if (j.contains("overrides")) {
    const auto& o = j["overrides"];
    if (!o.is_object()) schema_fail("/overrides", "expected {c1, c0}");
    reject_unknown(o, "/overrides", {"c1", "c0"});
    if (!o.contains("c1") || !o.contains("c0"))
      schema_fail("/overrides", "needs both c1 and c0");
    double c1 = require_number(o["c1"], "/overrides/c1");
    double c0 = require_number(o["c0"], "/overrides/c0");
    if (!(c1 > 0.0)) schema_fail("/overrides/c1", "must be positive");
    spec.overrides = std::make_pair(c1, c0);
  }
  return spec;
}

namespace {

EquilibriumData build_equilibrium(const JobSpec& spec) {
  EquilibriumData::Options opts;
  opts.tol = std::min(spec.tol, 1e-10);
  if (spec.overrides)
    return EquilibriumData::build_with_map(
        spec.field, new_map(spec.overrides->first, spec.overrides->second), opts);
  return EquilibriumData::build(spec.field, opts);
}

void run_equilibrium(const JobSpec& spec, std::ostream& out) {
  EquilibriumData eq = build_equilibrium(spec);
  RegularityReport rep = eq.check_one_cut_regular();
  if (spec.format == "csv") {
    out << "key,value\n";
    out << "c1," << fmt17(eq.map().c1) << "\n";
    out << "c0," << fmt17(eq.map().c0) << "\n";
    out << "a," << fmt17(eq.map().a) << "\n";
    out << "b," << fmt17(eq.map().b) << "\n";
    out << "ell," << fmt17(eq.ell()) << "\n";
    out << "one_cut_regular," << (rep.one_cut_regular() ? 1 : 0) << "\n";
    return;
  }
  json rj = {
      {"normalization_ok", rep.normalization_ok},
      {"positivity_ok", rep.positivity_ok},
      {"edge_ok", rep.edge_ok},
      {"var_eq_ok", rep.var_eq_ok},
      {"var_ineq_ok", rep.var_ineq_ok},
      {"one_cut_regular", rep.one_cut_regular()},
      {"normalization_residual", rep.normalization_residual},
      {"min_density", rep.min_density},
      {"edge_limit_a", rep.edge_limit_a},
      {"edge_limit_b", rep.edge_limit_b},
      {"edge_ratio_dev", rep.edge_ratio_dev},
      {"var_eq_residual", rep.var_eq_residual},
      {"var_ineq_margin", rep.var_ineq_margin},
  };
  json out_j = {{"c1", eq.map().c1}, {"c0", eq.map().c0}, {"a", eq.map().a},
                {"b", eq.map().b},   {"ell", eq.ell()},   {"regularity", rj}};
  out << out_j.dump(2) << "\n";
}

void run_density(const JobSpec& spec, std::ostream& out) {
  EquilibriumData eq = build_equilibrium(spec);
  int n = spec.grid_points;
  out << "x,psi\n";
  // cosine-spaced grid: clusters at the square-root edges
  for (int i = 0; i < n; ++i) {
    double theta = 3.14159265358979323846 * i / (n - 1);
    double x = eq.x_of_theta(theta);
    double psi = (i == 0 || i == n - 1) ? 0.0 : eq.density(x);
    out << fmt17(x) << "," << fmt17(psi) << "\n";
  }
}

const char* region_name(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
  }
  return "?";
}

void run_asymptotics(const JobSpec& spec, std::ostream& out) {
  EquilibriumData eq = build_equilibrium(spec);
  double delta = spec.delta > 0.0 ? spec.delta : -1.0;
  out << "z_re,z_im,region,value_re,value_im,log_scale\n";
  for (int n : spec.n_list) {
    for (Complex z : spec.points) {
      AsymptoticResult r = asym_p(eq, n, spec.k, z, delta);
      Complex v = r.value.value();
      out << fmt17(z.real()) << "," << fmt17(z.imag()) << ","
          << region_name(r.region.tag) << "," << fmt17(v.real()) << ","
          << fmt17(v.imag()) << "," << fmt17(r.value.log_abs()) << "\n";
    }
  }
}

void run_oracle_compare(const JobSpec& spec, std::ostream& out) {
  EquilibriumData eq = build_equilibrium(spec);
  double delta = spec.delta > 0.0 ? spec.delta : -1.0;
  out << "n,x,exact,asymptotic,rel_err\n";
  for (int n : spec.n_list) {
    int j = n + spec.k;
    MomentTable moments = compute_moments(spec.field, n, j, std::max(j, 1),
                                          PrecisionContext{spec.precision_bits});
    ExactPoly p = exact_p(moments, j);
    for (Complex z : spec.points) {
      double x = z.real();
      double exact = p.eval(x);
      AsymptoticResult r = asym_p(eq, n, spec.k, Complex(x, 0.0), delta);
      double val = r.value.value().real();
      double rel = std::abs(val - exact) / std::max(1e-300, std::abs(exact));
      out << n << "," << fmt17(x) << "," << fmt17(exact) << "," << fmt17(val)
          << "," << fmt17(rel) << "\n";
    }
  }
}

void run_convergence_report(const JobSpec& spec, std::ostream& out) {
  EquilibriumData eq = build_equilibrium(spec);
  const MapParams& p = eq.map();
  out << "n,max_rel_err_outside,max_rel_err_bulk,h_ratio\n";
  std::vector<double> zs_out = {p.b + 0.5 * (p.b - p.a), p.b + 1.0 * (p.b - p.a)};
  std::vector<double> xs_bulk = {p.a + 0.35 * (p.b - p.a), p.a + 0.5 * (p.b - p.a),
                                 p.a + 0.65 * (p.b - p.a)};
  for (int n : spec.n_list) {
    MomentTable moments = compute_moments(spec.field, n, n, n,
                                          PrecisionContext{spec.precision_bits});
    ExactPoly pp = exact_p(moments, n);
    ExactPoly qq = exact_q(moments, n);
    double err_out = 0.0;
    for (double z : zs_out) {
      int sgn;
      double lg_exact = pp.log_abs_eval(z, sgn);
      AsymptoticResult r = asym_p(eq, n, 0, Complex(z, 0.0));
      double ratio = sgn * r.value.mantissa.real() *
                     std::exp(r.value.log_abs() - lg_exact) /
                     std::abs(r.value.mantissa.real());
      err_out = std::max(err_out, std::abs(ratio - 1.0));
    }
    double err_bulk = 0.0;
    for (double x : xs_bulk) {
      int sgn;
      double lg_exact = pp.log_abs_eval(x, sgn);
      AsymptoticResult r = asym_p(eq, n, 0, Complex(x, 0.0));
      double m = r.value.mantissa.real();
      if (m == 0.0) continue;
      double ratio = (m < 0 ? -1 : 1) * sgn * std::exp(r.value.log_abs() - lg_exact);
      err_bulk = std::max(err_bulk, std::abs(ratio - 1.0));
    }
    double h_ratio;
    {
      BigReal h = exact_h(moments, pp, qq);
      ScaledReal ha = asym_h(eq, n, 0);
      h_ratio = (BigReal(ha.mantissa, 256) *
                 exp(BigReal(ha.exponent, 256)) / h).to_double();
    }
    out << n << "," << fmt17(err_out) << "," << fmt17(err_bulk) << ","
        << fmt17(h_ratio) << "\n";
  }
}

}  // namespace

int run(const JobSpec& spec) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!spec.output_path.empty()) {
    file.open(spec.output_path, std::ios::binary);
    if (!file) fail("invalid-argument", "cannot open output path " + spec.output_path);
    out = &file;
  }
  if (spec.command == "equilibrium")
    run_equilibrium(spec, *out);
  else if (spec.command == "density")
    run_density(spec, *out);
  else if (spec.command == "asymptotics")
    run_asymptotics(spec, *out);
  else if (spec.command == "oracle-compare")
    run_oracle_compare(spec, *out);
  else if (spec.command == "convergence-report")
    run_convergence_report(spec, *out);
  else
    fail("schema-error", "unknown command " + spec.command);
  out->flush();
  return 0;
}

}  // namespace eqsrc
