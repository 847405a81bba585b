#include "fredev/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fredev/errors.hpp"
#include "fredev/evans.hpp"
#include "fredev/fredholm.hpp"
#include "fredev/fronts.hpp"
#include "fredev/greens.hpp"
#include "fredev/locate.hpp"
#include "fredev/parallel.hpp"

#ifndef FREDEV_VERSION
#define FREDEV_VERSION "0.0.0"
#endif

namespace fredev::commands {

namespace {

using config::json;
using Kind = Column::Kind;

Column cx(std::string name) { return {std::move(name), Kind::Complex}; }
Column re(std::string name) { return {std::move(name), Kind::Real}; }
Column in(std::string name) { return {std::move(name), Kind::Integer}; }

// Evaluates one row per lambda on the worker pool, keeping input order.
void per_lambda(Table& t, const config::RunConfig& cfg, const std::function<std::vector<Cell>(cplx)>& row) {
  t.rows.resize(cfg.lambdas.size());
  parallel_for(cfg.lambdas.size(), cfg.threads, [&](std::size_t i) {
    std::vector<Cell> r{cfg.lambdas[i]};
    for (auto& c : row(cfg.lambdas[i])) r.push_back(std::move(c));
    t.rows[i] = std::move(r);
  });
}

locate::Evaluator evaluator(const config::RunConfig& cfg, locate::FunctionKind kind) {
  switch (kind) {
    case locate::FunctionKind::Det1:
      if (cfg.problem.is_front()) fail(ErrorKind::Config, "det1 is defined for pulses only; use front_det2");
      return locate::det1_evaluator(cfg.problem, cfg.grid(), cfg.numerics.tol);
    case locate::FunctionKind::EvansRatio: return locate::evans_evaluator(cfg.system, cfg.numerics, cfg.matching_point);
    case locate::FunctionKind::FrontDet2: return locate::front_det2_evaluator(cfg.system, cfg.grid(), cfg.numerics.tol);
  }
  fail(ErrorKind::Config, "unknown function");
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string version() { return FREDEV_VERSION; }

std::vector<std::string> command_names() { return {"roots", "det", "evans", "compare", "locate", "scan", "converge"}; }

Table cmd_roots(const config::RunConfig& cfg) {
  Table t{"roots", {cx("lambda"), in("k")}, {}, json::object()};
  const int n = cfg.problem.order;
  const std::vector<cplx> coeffs = cfg.problem.effective_coeffs();
  for (int j = 0; j < n; ++j) t.columns.push_back(cx("kappa_" + std::to_string(j)));
  for (int j = 0; j < n; ++j) t.columns.push_back(cx("alpha_" + std::to_string(j)));
  t.columns.push_back(re("polynomial_residual"));
  t.columns.push_back(re("moment_residual"));
  t.columns.push_back(re("jump_residual"));
  t.columns.push_back(re("condition"));
  per_lambda(t, cfg, [&](cplx lambda) {
    const greens::RootSplit roots = greens::classify_roots(coeffs, lambda, cfg.numerics.tol);
    const greens::GreenCoefficients alpha = greens::alpha_coefficients(roots, cfg.numerics.tol);
    std::vector<Cell> row{static_cast<long long>(roots.k())};
    const std::vector<cplx> all = roots.all();
    double poly = 0.0;
    for (cplx r : all) {
      row.emplace_back(r);
      // sum a_j r^j + r^n - lambda
      cplx s = -lambda, pw(1.0);
      for (int j = 0; j < n; ++j) {
        s += coeffs[static_cast<std::size_t>(j)] * pw;
        pw *= r;
      }
      s += pw;
      poly = std::max(poly, std::abs(s) / std::max(1.0, std::abs(pw)));
    }
    for (cplx a : alpha.alpha) row.emplace_back(a);
    double moments = 0.0;
    for (int p = 0; p + 1 < n; ++p) moments = std::max(moments, std::abs(greens::moment_residual(roots, alpha, p)));
    row.emplace_back(poly);
    row.emplace_back(moments / std::max(alpha.max_abs(), 1e-300));
    row.emplace_back(std::abs(greens::moment_residual(roots, alpha, n - 1) + 1.0));
    row.emplace_back(alpha.condition);
    return row;
  });
  return t;
}

Table cmd_det(const config::RunConfig& cfg) {
  Table t{"det", {cx("lambda")}, {}, json::object()};
  for (const auto& k : cfg.det.kinds) t.columns.push_back(cx(k == "detp" ? "det" + std::to_string(cfg.det.p) : k));
  t.columns.push_back(cx("trace"));
  const QuadratureGrid grid = cfg.grid();
  const bool front = cfg.problem.is_front();
  per_lambda(t, cfg, [&](cplx lambda) {
    std::vector<Cell> row;
    cplx trace(0.0);
    const auto basis = [&] { return greens::unperturbed_bases(cfg.system, lambda, cfg.numerics.tol); };
    for (const auto& k : cfg.det.kinds) {
      if (k == "det1") {
        if (front) fail(ErrorKind::Config, "det1 is defined for pulses only");
        const auto r = fredholm::det1(cfg.problem, lambda, grid, cfg.numerics.tol);
        trace = r.trace_used;
        row.emplace_back(r.value);
      } else if (k == "det2") {
        const auto r = front ? fronts::front_det2(cfg.system, lambda, grid, cfg.numerics.tol)
                             : fredholm::det2(cfg.system, lambda, grid, basis(), cfg.numerics.tol);
        trace = r.trace_used;
        row.emplace_back(r.value);
      } else {
        if (front) fail(ErrorKind::Config, "detp is defined for pulses only");
        const auto r = fredholm::detp(cfg.system, lambda, grid, basis(), cfg.det.p, cfg.numerics.tol);
        trace = r.trace_used;
        row.emplace_back(r.value);
      }
    }
    row.emplace_back(trace);
    return row;
  });
  return t;
}

Table cmd_evans(const config::RunConfig& cfg) {
  Table t{"evans",
          {cx("lambda"), cx("evans"), cx("c"), cx("ratio"), cx("det_transmission"), cx("det_swinton"),
           re("truncation_estimate")},
          {},
          json::object()};
  t.summary["matching_point"] = cfg.matching_point;
  per_lambda(t, cfg, [&](cplx lambda) {
    const evans::EvansResult r = evans::evans_function(cfg.system, lambda, cfg.matching_point, cfg.numerics);
    const cplx sw = evans::swinton_matrix(cfg.system, lambda, cfg.matching_point, cfg.numerics).determinant();
    return std::vector<Cell>{r.evans, r.c_lambda, r.ratio, r.det_transmission, sw, r.truncation_estimate};
  });
  return t;
}

Table cmd_compare(const config::RunConfig& cfg) {
  Table t{"compare",
          {cx("lambda"), cx("d"), cx("det_transmission"), cx("evans_ratio"), cx("det2"), cx("trace"),
           re("det2_relation_residual"), re("max_gap")},
          {},
          json::object()};
  per_lambda(t, cfg, [&](cplx lambda) {
    const evans::IdentityReport r = evans::identity_report(cfg.problem, lambda, cfg.numerics, cfg.matching_point);
    return std::vector<Cell>{r.d, r.det_transmission, r.evans_ratio, r.det2, r.system_trace, r.det2_relation_residual,
                             r.max_pairwise_gap};
  });
  return t;
}

Table cmd_locate(const config::RunConfig& cfg) {
  Table t{"locate", {cx("lambda"), re("residual"), in("iterations")}, {}, json::object()};
  const config::RegionOptions& r = cfg.locate;
  locate::LocateOptions opts;
  opts.winding.threads = cfg.threads;
  opts.separation = cfg.numerics.tol.separation;
  const locate::RootReport rep =
      locate::locate_roots(evaluator(cfg, r.function), locate::Contour{r.lower_left, r.upper_right, r.samples_per_edge},
                           r.function, opts);
  for (const auto& root : rep.roots)
    t.rows.push_back({root.lambda, root.residual, static_cast<long long>(root.iterations)});
  t.summary["winding"] = rep.winding;
  t.summary["function"] = locate::to_string(rep.function_used);
  t.summary["multiplicity_gap"] = rep.multiplicity_gap;
  return t;
}

Table cmd_scan(const config::RunConfig& cfg) {
  Table t{"scan", {cx("lambda"), cx("value"), in("flagged")}, {}, json::object()};
  const config::RegionOptions& r = cfg.scan;
  const auto rows = locate::scan(evaluator(cfg, r.function), r.lower_left, r.upper_right, r.nx, r.ny, cfg.threads);
  for (const auto& row : rows) t.rows.push_back({row.lambda, row.value, static_cast<long long>(row.flagged)});
  t.summary["function"] = locate::to_string(r.function);
  return t;
}

Table cmd_converge(const config::RunConfig& cfg) {
  Table t{"converge",
          {cx("lambda"), {"parameter", Kind::Text}, re("from"), re("to"), cx("value_from"), cx("value_to"), re("gap")},
          {},
          json::object()};
  const bool front = cfg.problem.is_front();
  auto value = [&](cplx lambda, double X, int N) {
    const QuadratureGrid g = build_grid(X, N, cfg.rule, cfg.numerics.panel_order, front);
    return front ? fronts::front_det2(cfg.system, lambda, g, cfg.numerics.tol).value
                 : fredholm::det1(cfg.problem, lambda, g, cfg.numerics.tol).value;
  };
  struct Job {
    cplx lambda;
    bool refine_n;
    double a, b;
  };
  std::vector<Job> jobs;
  for (cplx l : cfg.lambdas) {
    for (int n : cfg.converge.quad_points) jobs.push_back({l, true, double(n), 2.0 * n});
    for (double x : cfg.converge.half_widths) jobs.push_back({l, false, x, x + cfg.converge.half_width_step});
  }
  t.rows.resize(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    const double X = cfg.numerics.half_width;
    const int N = cfg.numerics.quad_points;
    const cplx va = j.refine_n ? value(j.lambda, X, int(j.a)) : value(j.lambda, j.a, N);
    const cplx vb = j.refine_n ? value(j.lambda, X, int(j.b)) : value(j.lambda, j.b, N);
    t.rows[i] = {j.lambda, std::string(j.refine_n ? "N" : "X"), j.a, j.b, va, vb, std::abs(va - vb)};
  });
  t.summary["function"] = front ? "front_det2" : "det1";
  return t;
}

Table run(const std::string& command, const config::RunConfig& cfg) {
  if (command == "roots") return cmd_roots(cfg);
  if (command == "det") return cmd_det(cfg);
  if (command == "evans") return cmd_evans(cfg);
  if (command == "compare") return cmd_compare(cfg);
  if (command == "locate") return cmd_locate(cfg);
  if (command == "scan") return cmd_scan(cfg);
  if (command == "converge") return cmd_converge(cfg);
  fail(ErrorKind::Config, "unknown command '" + command + "'");
}

std::string render_json(const Table& table, const config::RunConfig& cfg) {
  json doc;
  doc["version"] = version();
  doc["command"] = table.command;
  doc["config"] = cfg.resolved;
  doc["summary"] = table.summary;
  json cols = json::array();
  for (const auto& c : table.columns) cols.push_back(c.name);
  doc["columns"] = cols;
  json rows = json::array();
  for (const auto& r : table.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string& name = table.columns[i].name;
      if (const auto* z = std::get_if<cplx>(&r[i]))
        o[name] = json{{"re", num_json(z->real())}, {"im", num_json(z->imag())}};
      else if (const auto* d = std::get_if<double>(&r[i]))
        o[name] = num_json(*d);
      else if (const auto* n = std::get_if<long long>(&r[i]))
        o[name] = *n;
      else
        o[name] = std::get<std::string>(r[i]);
    }
    rows.push_back(std::move(o));
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string render_csv(const Table& table, const config::RunConfig& cfg) {
  std::ostringstream os;
  os << "# fredev " << version() << " " << table.command << "\n";
  os << "# config " << cfg.resolved.dump() << "\n";
  if (!table.summary.empty()) os << "# summary " << table.summary.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    const Column& c = table.columns[i];
    if (i) os << ",";
    if (c.kind == Kind::Complex)
      os << "re_" << c.name << ",im_" << c.name;
    else
      os << c.name;
  }
  os << "\n";
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      if (const auto* z = std::get_if<cplx>(&r[i]))
        os << num(z->real()) << "," << num(z->imag());
      else if (const auto* d = std::get_if<double>(&r[i]))
        os << num(*d);
      else if (const auto* n = std::get_if<long long>(&r[i]))
        os << *n;
      else
        os << std::get<std::string>(r[i]);
    }
    os << "\n";
  }
  return os.str();
}

std::string render(const Table& table, const config::RunConfig& cfg) {
  return cfg.format == "csv" ? render_csv(table, cfg) : render_json(table, cfg);
}

std::string render_error(const std::string& kind, const std::string& message) {
  json e;
  e["error"] = {{"kind", kind}, {"message", message}, {"version", version()}};
  return e.dump() + "\n";
}

}  // namespace fredev::commands
