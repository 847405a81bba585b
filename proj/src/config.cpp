#include "fredev/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "fredev/errors.hpp"

namespace fredev {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::EssentialSpectrum: return "essential_spectrum";
    case ErrorKind::NearMultipleRoots: return "near_multiple_roots";
    case ErrorKind::IllConditioned: return "ill_conditioned";
    case ErrorKind::SignMismatch: return "sign_mismatch";
    case ErrorKind::StiffnessFailure: return "stiffness_failure";
    case ErrorKind::CountMismatch: return "count_mismatch";
    case ErrorKind::PhaseJump: return "phase_jump";
    case ErrorKind::NoConvergence: return "no_convergence";
  }
  return "unknown";
}

}  // namespace fredev

namespace fredev::config {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { fail(ErrorKind::Config, where + ": " + what); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) bad(where, "unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

// Returns obj[key] or `fallback`, writing the value used back into `out`.
json take(const json& obj, const std::string& key, const json& fallback, json& out) {
  const json v = obj.contains(key) ? obj.at(key) : fallback;
  out[key] = v;
  return v;
}

std::vector<cplx> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json complex_list_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex_json(z));
  return a;
}

model::WaveProfile tabulated_profile(const json& p, const std::string& where) {
  check_keys(p, {"x", "values", "minus_limit", "plus_limit"}, where);
  if (!p.contains("x") || !p.contains("values")) bad(where, "tabulated profiles need 'x' and 'values'");
  std::vector<double> xs, ys;
  for (const auto& v : p.at("x")) xs.push_back(number(v, where + ".x"));
  for (const auto& v : p.at("values")) ys.push_back(number(v, where + ".values"));
  if (xs.size() != ys.size() || xs.size() < 4) bad(where, "'x' and 'values' need equal length >= 4");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) bad(where, "'x' must be strictly increasing");
  const double lo = p.contains("minus_limit") ? number(p.at("minus_limit"), where + ".minus_limit") : 0.0;
  const double hi = p.contains("plus_limit") ? number(p.at("plus_limit"), where + ".plus_limit") : 0.0;
  return model::WaveProfile::tabulated(xs, ys, lo, hi);
}

void resolve_problem(const json& doc, RunConfig& cfg) {
  const json p = doc.contains("problem") ? doc.at("problem") : json::object();
  check_keys(p, {"profile", "order", "coeffs", "m", "jacobian"}, "problem");
  json& out = cfg.resolved["problem"] = json::object();

  const json prof = p.contains("profile") ? p.at("profile") : json{{"kind", "poschl_teller"}};
  if (!prof.is_object()) bad("problem.profile", "expected an object");
  const std::string kind = prof.contains("kind") ? text(prof.at("kind"), "problem.profile.kind") : "poschl_teller";
  json params = prof.contains("params") ? prof.at("params") : json::object();
  check_keys(prof, {"kind", "params"}, "problem.profile");
  out["profile"] = {{"kind", kind}, {"params", params}};

  if (kind == "tabulated") {
    cfg.problem = model::ScalarProblem{};
    cfg.problem.name = "tabulated";
    cfg.problem.profile = tabulated_profile(params, "problem.profile.params");
  } else if (kind == "zero") {
    check_keys(params, {}, "problem.profile.params");
    cfg.problem = model::ScalarProblem{};
    cfg.problem.name = "zero";
    cfg.problem.profile = model::WaveProfile::constant(0.0);
  } else {
    if (!params.is_object()) bad("problem.profile.params", "expected an object");
    model::Parameters mp;
    for (const auto& [key, v] : params.items()) mp[key] = number(v, "problem.profile.params." + key);
    cfg.problem = model::builtin_problem(kind, mp);
  }

  if (p.contains("order")) {
    cfg.problem.order = integer(p.at("order"), "problem.order");
    cfg.problem.coeffs.assign(static_cast<std::size_t>(std::max(cfg.problem.order, 0)), cplx(0.0));
  }
  if (p.contains("coeffs")) cfg.problem.coeffs = complex_list(p.at("coeffs"), "problem.coeffs");
  if (p.contains("m")) cfg.problem.deriv_order = integer(p.at("m"), "problem.m");
  if (p.contains("jacobian")) cfg.problem.jacobian.coeffs = complex_list(p.at("jacobian"), "problem.jacobian");
  cfg.problem.validate();
  out["order"] = cfg.problem.order;
  out["coeffs"] = complex_list_json(cfg.problem.coeffs);
  out["m"] = cfg.problem.deriv_order;
  out["jacobian"] = complex_list_json(cfg.problem.jacobian.coeffs);

  cfg.system = model::to_system(cfg.problem);
  const int n = cfg.system.dim;
  json& asym = cfg.resolved["asymptotics"] = json::object();
  if (doc.contains("asymptotics")) {
    const json& a = doc.at("asymptotics");
    check_keys(a, {"v_minus", "v_plus", "R_minus", "R_plus"}, "asymptotics");
    auto set_scalar = [&](const char* key, CMatrix& r) {
      if (!a.contains(key)) return;
      r = CMatrix::Zero(n, n);
      r(n - 1, cfg.problem.deriv_order) = -parse_complex(a.at(key), std::string("asymptotics.") + key);
      asym[key] = a.at(key);
    };
    auto set_matrix = [&](const char* key, CMatrix& r) {
      if (!a.contains(key)) return;
      const json& m = a.at(key);
      if (!m.is_array() || static_cast<int>(m.size()) != n) bad(std::string("asymptotics.") + key, "expected an n x n array");
      r.resize(n, n);
      for (int i = 0; i < n; ++i) {
        const std::vector<cplx> row = complex_list(m[static_cast<std::size_t>(i)], std::string("asymptotics.") + key);
        if (static_cast<int>(row.size()) != n) bad(std::string("asymptotics.") + key, "expected an n x n array");
        for (int j = 0; j < n; ++j) r(i, j) = row[static_cast<std::size_t>(j)];
      }
      asym[key] = m;
    };
    if (a.contains("v_minus") && a.contains("R_minus")) bad("asymptotics", "give either v_minus or R_minus");
    if (a.contains("v_plus") && a.contains("R_plus")) bad("asymptotics", "give either v_plus or R_plus");
    set_scalar("v_minus", cfg.system.r_minus);
    set_scalar("v_plus", cfg.system.r_plus);
    set_matrix("R_minus", cfg.system.r_minus);
    set_matrix("R_plus", cfg.system.r_plus);
  }
}

cplx corner(const json& j, const std::string& where) { return parse_complex(j, where); }

RegionOptions resolve_region(const json& obj, const std::string& name, RunConfig& cfg, bool grid_sizes) {
  json& out = cfg.resolved[name] = json::object();
  std::set<std::string> allowed{"lower_left", "upper_right", "function"};
  if (grid_sizes) {
    allowed.insert("nx");
    allowed.insert("ny");
  } else {
    allowed.insert("samples_per_edge");
  }
  check_keys(obj, allowed, name);
  RegionOptions r;
  r.lower_left = corner(take(obj, "lower_left", complex_json(r.lower_left), out), name + ".lower_left");
  r.upper_right = corner(take(obj, "upper_right", complex_json(r.upper_right), out), name + ".upper_right");
  const std::string def = cfg.problem.is_front() ? "front_det2" : "det1";
  r.function = locate::parse_function(text(take(obj, "function", def, out), name + ".function"));
  if (grid_sizes) {
    r.nx = integer(take(obj, "nx", r.nx, out), name + ".nx");
    r.ny = integer(take(obj, "ny", r.ny, out), name + ".ny");
    if (r.nx < 0 || r.ny < 0) bad(name, "grid sizes must be non-negative");
  } else {
    r.samples_per_edge = integer(take(obj, "samples_per_edge", r.samples_per_edge, out), name + ".samples_per_edge");
    if (r.samples_per_edge < 2) bad(name, "samples_per_edge must be at least 2");
  }
  return r;
}

}  // namespace

QuadratureGrid RunConfig::grid() const {
  return build_grid(numerics.half_width, numerics.quad_points, rule, numerics.panel_order, problem.is_front());
}

cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (j.is_object()) {
    check_keys(j, {"re", "im"}, where);
    const double re = j.contains("re") ? number(j.at("re"), where + ".re") : 0.0;
    const double im = j.contains("im") ? number(j.at("im"), where + ".im") : 0.0;
    return {re, im};
  }
  bad(where, "expected a number or {\"re\", \"im\"}");
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, "config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(ErrorKind::Config, "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) fail(ErrorKind::Config, "override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) fail(ErrorKind::Config, "override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunConfig resolve(const json& doc) {
  check_keys(doc, {"problem", "asymptotics", "domain", "tolerances", "evans", "lambdas", "det", "locate", "scan",
                   "converge", "output", "threads"},
             "config");
  RunConfig cfg;
  cfg.resolved = json::object();
  resolve_problem(doc, cfg);

  const json domain = doc.contains("domain") ? doc.at("domain") : json::object();
  check_keys(domain, {"half_width", "quad_points", "rule", "panel_order"}, "domain");
  json& d = cfg.resolved["domain"] = json::object();
  cfg.numerics.half_width = number(take(domain, "half_width", 20.0, d), "domain.half_width");
  cfg.numerics.quad_points = integer(take(domain, "quad_points", 400, d), "domain.quad_points");
  cfg.rule = parse_rule(text(take(domain, "rule", "gauss_legendre", d), "domain.rule"));
  cfg.numerics.panel_order = integer(take(domain, "panel_order", 10, d), "domain.panel_order");
  if (!(cfg.numerics.half_width > 0.0)) bad("domain.half_width", "must be positive");
  if (cfg.numerics.quad_points < 2) bad("domain.quad_points", "must be at least 2");
  if (cfg.numerics.panel_order < 1) bad("domain.panel_order", "must be positive");

  const json tol = doc.contains("tolerances") ? doc.at("tolerances") : json::object();
  check_keys(tol, {"axis", "separation", "condition", "det", "sign"}, "tolerances");
  json& t = cfg.resolved["tolerances"] = json::object();
  Tolerances& tt = cfg.numerics.tol;
  tt.axis = number(take(tol, "axis", tt.axis, t), "tolerances.axis");
  tt.separation = number(take(tol, "separation", tt.separation, t), "tolerances.separation");
  tt.condition = number(take(tol, "condition", tt.condition, t), "tolerances.condition");
  tt.det = number(take(tol, "det", tt.det, t), "tolerances.det");
  tt.sign = number(take(tol, "sign", tt.sign, t), "tolerances.sign");

  const json ev = doc.contains("evans") ? doc.at("evans") : json::object();
  check_keys(ev, {"matching_point", "rtol", "atol"}, "evans");
  json& e = cfg.resolved["evans"] = json::object();
  cfg.matching_point = number(take(ev, "matching_point", 0.0, e), "evans.matching_point");
  cfg.numerics.rtol = number(take(ev, "rtol", cfg.numerics.rtol, e), "evans.rtol");
  cfg.numerics.atol = number(take(ev, "atol", cfg.numerics.atol, e), "evans.atol");

  cfg.lambdas = complex_list(doc.contains("lambdas") ? doc.at("lambdas") : json::array(), "lambdas");
  cfg.resolved["lambdas"] = complex_list_json(cfg.lambdas);

  const json det = doc.contains("det") ? doc.at("det") : json::object();
  check_keys(det, {"kinds", "p"}, "det");
  json& dd = cfg.resolved["det"] = json::object();
  cfg.det.kinds.clear();
  for (const auto& k : take(det, "kinds", json::array({"det1", "det2"}), dd)) {
    const std::string s = text(k, "det.kinds");
    if (s != "det1" && s != "det2" && s != "detp") bad("det.kinds", "unknown kind '" + s + "'");
    cfg.det.kinds.push_back(s);
  }
  cfg.det.p = integer(take(det, "p", 3, dd), "det.p");
  if (cfg.det.p < 1) bad("det.p", "must be at least 1");

  cfg.locate = resolve_region(doc.contains("locate") ? doc.at("locate") : json::object(), "locate", cfg, false);
  cfg.scan = resolve_region(doc.contains("scan") ? doc.at("scan") : json::object(), "scan", cfg, true);

  const json cv = doc.contains("converge") ? doc.at("converge") : json::object();
  check_keys(cv, {"quad_points", "half_widths", "half_width_step"}, "converge");
  json& c = cfg.resolved["converge"] = json::object();
  cfg.converge.quad_points.clear();
  for (const auto& v : take(cv, "quad_points", json::array({100, 200, 400}), c))
    cfg.converge.quad_points.push_back(integer(v, "converge.quad_points"));
  cfg.converge.half_widths.clear();
  for (const auto& v : take(cv, "half_widths", json::array({15.0, 20.0, 25.0}), c))
    cfg.converge.half_widths.push_back(number(v, "converge.half_widths"));
  cfg.converge.half_width_step = number(take(cv, "half_width_step", 5.0, c), "converge.half_width_step");

  const json out = doc.contains("output") ? doc.at("output") : json::object();
  check_keys(out, {"format"}, "output");
  json& o = cfg.resolved["output"] = json::object();
  cfg.format = text(take(out, "format", "json", o), "output.format");
  if (cfg.format != "json" && cfg.format != "csv") bad("output.format", "expected 'json' or 'csv'");

  cfg.threads = static_cast<unsigned>(std::max(0, integer(doc.contains("threads") ? doc.at("threads") : json(0), "threads")));
  return cfg;
}

}  // namespace fredev::config
