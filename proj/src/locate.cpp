#include "fredev/locate.hpp"

#include <algorithm>
#include <cmath>

#include "fredev/errors.hpp"
#include "fredev/fredholm.hpp"
#include "fredev/fronts.hpp"
#include "fredev/parallel.hpp"

namespace fredev::locate {

std::string to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Det1: return "det1";
    case FunctionKind::EvansRatio: return "evans_ratio";
    case FunctionKind::FrontDet2: return "front_det2";
  }
  return "det1";
}

FunctionKind parse_function(const std::string& name) {
  if (name == "det1") return FunctionKind::Det1;
  if (name == "evans_ratio") return FunctionKind::EvansRatio;
  if (name == "front_det2") return FunctionKind::FrontDet2;
  fail(ErrorKind::Config, "unknown function '" + name + "' (expected det1, evans_ratio or front_det2)");
}

Evaluator det1_evaluator(const model::ScalarProblem& problem, const QuadratureGrid& grid, const Tolerances& tol) {
  return [problem, grid, tol](cplx l) { return fredholm::det1(problem, l, grid, tol).value; };
}

Evaluator evans_evaluator(const model::SystemProblem& system, const evans::IntegrationParams& params,
                          double matching_point) {
  return [system, params, matching_point](cplx l) { return evans::evans_ratio(system, l, matching_point, params); };
}

Evaluator front_det2_evaluator(const model::SystemProblem& system, const QuadratureGrid& grid, const Tolerances& tol) {
  return [system, grid, tol](cplx l) { return fronts::front_det2(system, l, grid, tol).value; };
}

std::vector<cplx> Contour::corners() const {
  const cplx a = lower_left, c = upper_right;
  return {a, cplx(c.real(), a.imag()), c, cplx(a.real(), c.imag())};
}

namespace {

struct Sample {
  double t;
  cplx value;
};

cplx checked(const Evaluator& f, cplx z) {
  const cplx v = f(z);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    fail(ErrorKind::NoConvergence, "function value is not finite on the contour");
  if (v == cplx(0.0)) fail(ErrorKind::PhaseJump, "function vanishes on the contour");
  return v;
}

double edge_phase(const Evaluator& f, cplx a, cplx b, int samples, const WindingOptions& opts, long& evals) {
  const int s = std::max(samples, 2);
  std::vector<Sample> init(static_cast<std::size_t>(s) + 1);
  parallel_for(init.size(), opts.threads, [&](std::size_t i) {
    const double t = static_cast<double>(i) / s;
    init[i] = {t, checked(f, a + t * (b - a))};
  });
  long count = static_cast<long>(init.size());
  evals += count;
  double phase = 0.0;
  std::vector<std::pair<Sample, Sample>> stack;
  for (std::size_t i = 0; i + 1 < init.size(); ++i) stack.emplace_back(init[i], init[i + 1]);
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    const double d = std::arg(hi.value / lo.value);
    if (std::abs(d) < kPi / 2) {
      phase += d;
      continue;
    }
    if (count >= opts.max_samples_per_edge)
      fail(ErrorKind::PhaseJump, "edge subdivision limit reached; a zero may lie on the contour");
    const double tm = 0.5 * (lo.t + hi.t);
    const Sample mid{tm, checked(f, a + tm * (b - a))};
    ++count;
    ++evals;
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  return phase;
}

bool inside(cplx z, cplx lo, cplx hi) {
  return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() && z.imag() <= hi.imag();
}

}  // namespace

WindingResult winding_detail(const Evaluator& f, const Contour& contour, const WindingOptions& opts) {
  const cplx lo = contour.lower_left, hi = contour.upper_right;
  if (!(hi.real() > lo.real() && hi.imag() > lo.imag())) fail(ErrorKind::Config, "contour rectangle is degenerate");
  const std::vector<cplx> c = contour.corners();
  WindingResult r;
  for (int e = 0; e < 4; ++e)
    r.phase += edge_phase(f, c[static_cast<std::size_t>(e)], c[static_cast<std::size_t>((e + 1) % 4)],
                          contour.samples_per_edge, opts, r.evaluations);
  const double w = r.phase / (2.0 * kPi);
  r.winding = static_cast<int>(std::lround(w));
  if (std::abs(w - r.winding) > opts.guard)
    fail(ErrorKind::PhaseJump, "accumulated phase is not close to a multiple of 2 pi");
  return r;
}

int winding_number(const Evaluator& f, const Contour& contour, const WindingOptions& opts) {
  return winding_detail(f, contour, opts).winding;
}

RefinedRoot refine_root(const Evaluator& f, cplx lambda0, const RefineOptions& opts) {
  const double h = opts.initial_step * std::max(1.0, std::abs(lambda0));
  cplx x0 = lambda0 - h, x1 = lambda0 + h, x2 = lambda0;
  cplx f0 = f(x0), f1 = f(x1), f2 = f(x2);
  const double scale = std::max({std::abs(f0), std::abs(f1), std::abs(f2)});
  const double target = opts.residual * (scale > 0.0 ? scale : 1.0);
  RefinedRoot out{x2, std::abs(f2), 0};
  if (out.residual < target) return out;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const cplx d21 = (f2 - f1) / (x2 - x1), d20 = (f2 - f0) / (x2 - x0), d10 = (f1 - f0) / (x1 - x0);
    const cplx a = (d21 - d10) / (x2 - x0);
    const cplx w = d21 + d20 - d10;
    const cplx root = std::sqrt(w * w - 4.0 * f2 * a);
    const cplx den = std::abs(w + root) >= std::abs(w - root) ? w + root : w - root;
    if (den == cplx(0.0) || !std::isfinite(std::abs(den)))
      fail(ErrorKind::NoConvergence, "Muller iteration stalled (flat function)");
    const cplx x3 = x2 - 2.0 * f2 / den;
    const cplx f3 = f(x3);
    out = {x3, std::abs(f3), it};
    if (out.residual < target) return out;
    // stagnation at the evaluation noise floor
    if (std::abs(x3 - x2) <= 1e-14 * std::max(1.0, std::abs(x3)) && out.residual < 1e-6 * scale) return out;
    x0 = x1, f0 = f1;
    x1 = x2, f1 = f2;
    x2 = x3, f2 = f3;
  }
  fail(ErrorKind::NoConvergence, "Muller iteration did not converge in " + std::to_string(opts.max_iterations) +
                                     " steps");
}

namespace {

struct Locator {
  const Evaluator& f;
  const LocateOptions& opts;
  std::vector<RefinedRoot> roots;
  bool gap = false;

  void refine_in(cplx lo, cplx hi, int expected) {
    const cplx center = 0.5 * (lo + hi);
    const std::vector<cplx> starts = {center, 0.75 * lo + 0.25 * hi, 0.25 * lo + 0.75 * hi};
    int found = 0;
    for (cplx s : starts) {
      try {
        const RefinedRoot r = refine_root(f, s, opts.refine);
        if (!inside(r.lambda, lo, hi)) continue;
        bool dup = false;
        for (const auto& q : roots)
          dup = dup || std::abs(q.lambda - r.lambda) <= opts.separation * std::max(1.0, std::abs(r.lambda));
        if (!dup) {
          roots.push_back(r);
          ++found;
        }
        if (found >= expected) break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence) throw;
      }
    }
    if (found != expected) gap = true;
  }

  void cell(cplx lo, cplx hi, int w, int depth) {
    if (w == 0) return;
    if (w == 1 || depth >= opts.max_depth) {
      refine_in(lo, hi, w);
      return;
    }
    // slightly off-centre split so that symmetric zeros do not sit on the cut
    for (double frac : {0.5 + 1.0 / 97.0, 0.5 - 1.0 / 89.0}) {
      const cplx m(lo.real() + frac * (hi.real() - lo.real()), lo.imag() + frac * (hi.imag() - lo.imag()));
      const cplx boxes[4][2] = {{lo, m}, {cplx(m.real(), lo.imag()), cplx(hi.real(), m.imag())}, {m, hi},
                                {cplx(lo.real(), m.imag()), cplx(m.real(), hi.imag())}};
      int ws[4];
      try {
        int sum = 0;
        for (int q = 0; q < 4; ++q) {
          ws[q] = winding_number(f, Contour{boxes[q][0], boxes[q][1], 16}, opts.winding);
          sum += ws[q];
        }
        if (sum != w) continue;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PhaseJump) throw;
        continue;
      }
      for (int q = 0; q < 4; ++q) cell(boxes[q][0], boxes[q][1], ws[q], depth + 1);
      return;
    }
    refine_in(lo, hi, w);
  }
};

}  // namespace

RootReport locate_roots(const Evaluator& f, const Contour& contour, FunctionKind kind, const LocateOptions& opts) {
  RootReport rep;
  rep.function_used = kind;
  rep.winding = winding_number(f, contour, opts.winding);
  Locator loc{f, opts, {}, false};
  loc.cell(contour.lower_left, contour.upper_right, rep.winding, 0);
  std::sort(loc.roots.begin(), loc.roots.end(), [](const RefinedRoot& a, const RefinedRoot& b) {
    return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real() : a.lambda.imag() < b.lambda.imag();
  });
  rep.roots = std::move(loc.roots);
  rep.multiplicity_gap = loc.gap || static_cast<int>(rep.roots.size()) != rep.winding;
  return rep;
}

std::vector<ScanRow> scan(const Evaluator& f, cplx lower_left, cplx upper_right, int nx, int ny, unsigned threads) {
  if (nx <= 0 || ny <= 0) return {};
  std::vector<ScanRow> rows(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  auto coord = [](double a, double b, int i, int n) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      rows[static_cast<std::size_t>(j) * nx + i].lambda =
          cplx(coord(lower_left.real(), upper_right.real(), i, nx), coord(lower_left.imag(), upper_right.imag(), j, ny));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    try {
      rows[i].value = f(rows[i].lambda);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EssentialSpectrum) throw;
      rows[i].flagged = true;
      rows[i].value = cplx(std::nan(""), std::nan(""));
    }
  });
  return rows;
}

}  // namespace fredev::locate
