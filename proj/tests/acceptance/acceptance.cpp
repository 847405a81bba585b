// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fredev/errors.hpp"
#include "fredev/evans.hpp"
#include "fredev/fredholm.hpp"
#include "fredev/fronts.hpp"
#include "fredev/greens.hpp"
#include "fredev/locate.hpp"
#include "fredev/model.hpp"

using namespace fredev;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_gap(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

int failures = 0;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

const QuadratureGrid& grid400() {
  static const QuadratureGrid g = build_grid(20.0, 400);
  return g;
}

cplx closed_form(cplx lambda) {
  const cplx s = std::sqrt(lambda);
  return (s - 1.0) / (s + 1.0);
}

// Ten right half-plane samples away from the bound states of the test pulses.
const std::vector<cplx>& right_half_plane() {
  static const std::vector<cplx> s{cplx(2.0, 0.0),  cplx(3.0, 1.0),  cplx(4.0, 0.0), cplx(5.0, -2.0),
                                   cplx(6.0, 3.0),  cplx(8.0, 0.0),  cplx(2.5, -0.5), cplx(10.0, 1.0),
                                   cplx(3.0, -3.0), cplx(7.0, 0.5)};
  return s;
}

Outcome green_identities() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> order(2, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_cont = 0.0, worst_moment = 0.0, worst_basis = 0.0, worst_jump = 0.0;
  int done = 0;
  while (done < 100) {
    const int n = order(rng);
    std::vector<cplx> a;
    for (int j = 0; j < n; ++j) a.emplace_back(0.5 * u(rng), 0.5 * u(rng));
    const cplx lambda(3.0 * u(rng), 3.0 * u(rng));
    greens::RootSplit roots;
    greens::GreenCoefficients alpha;
    try {
      roots = greens::classify_roots(a, lambda);
      if (roots.k() == 0 || roots.k() == n) continue;
      alpha = greens::alpha_coefficients(roots);
    } catch (const Error&) {
      continue;  // on or near the essential spectrum: resample
    }
    ++done;
    worst_cont = std::max(worst_cont, std::abs(greens::moment_residual(roots, alpha, 0)) / alpha.max_abs());
    for (int m = 0; m + 1 < n; ++m) worst_moment = std::max(worst_moment, std::abs(greens::moment_residual(roots, alpha, m)));
    const greens::UnperturbedBasis b = greens::UnperturbedBasis::from_roots(roots);
    const int k = b.k();
    for (int i = 0; i < 50; ++i) {
      const double x = -2.0 + 4.0 * i / 49.0;
      worst_basis = std::max({worst_basis, (b.z_plus(x) * b.y_minus(x) - CMatrix::Identity(k, k)).norm(),
                              (b.z_minus(x) * b.y_plus(x) - CMatrix::Identity(n - k, n - k)).norm(),
                              (b.z_plus(x) * b.y_plus(x)).norm(), (b.z_minus(x) * b.y_minus(x)).norm()});
    }
    // the lower branch at x = xi+ minus the upper branch at x = xi-
    const CMatrix jump = b.green(0.0, false) - b.green(0.0, true);
    worst_jump = std::max(worst_jump, (jump - CMatrix::Identity(n, n)).norm());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(worst_cont < 1e-12, "continuity residual " + fmt(worst_cont));
  o.require(worst_moment < 1e-10, "derivative-kernel residual " + fmt(worst_moment));
  o.require(worst_basis < 1e-10, "basis identities " + fmt(worst_basis));
  o.require(worst_jump < 1e-10, "matrix jump " + fmt(worst_jump));
  o.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  o.note("continuity/max|alpha| " + fmt(worst_cont) + ", moments " + fmt(worst_moment) + ", basis " + fmt(worst_basis) +
         ", jump " + fmt(worst_jump));
  return o;
}

Outcome resolvent_oracle() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.1, 8.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double x = u(rng), xi = u(rng);
    const cplx lambda(pos(rng), u(rng));
    const auto roots = greens::classify_roots(std::vector<cplx>{0.0, 0.0}, lambda);
    const auto alpha = greens::alpha_coefficients(roots);
    const cplx s = std::sqrt(lambda);
    worst = std::max(worst, std::abs(greens::scalar_green(x, xi, roots, alpha) + std::exp(-s * std::abs(x - xi)) / (2.0 * s)));
  }
  o.require(worst < 1e-12, "max error " + fmt(worst));
  o.note("max error " + fmt(worst));
  return o;
}

Outcome poschl_teller() {
  Outcome o;
  const auto p = model::builtin_problem("poschl_teller");
  double worst = 0.0;
  for (cplx l : {cplx(4.0), cplx(9.0), cplx(2.0, 1.0)})
    worst = std::max(worst, std::abs(fredholm::det1(p, l, grid400()).value - closed_form(l)));
  const double at1 = std::abs(fredholm::det1(p, 1.0, grid400()).value);
  const cplx root = locate::refine_root(locate::det1_evaluator(p, grid400()), 1.2).lambda;
  o.require(worst < 1e-6, "closed form " + fmt(worst));
  o.require(at1 < 1e-6, "|d(1)| " + fmt(at1));
  o.require(std::abs(root - 1.0) < 1e-6, "refined root error " + fmt(std::abs(root - 1.0)));
  o.note("closed-form error " + fmt(worst) + ", |d(1)| " + fmt(at1) + ", root error " + fmt(std::abs(root - 1.0)));
  return o;
}

Outcome transmission_identity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const evans::IntegrationParams ip;
  double worst = 0.0;
  for (const char* name : {"poschl_teller", "gaussian_pulse"}) {
    const auto p = model::builtin_problem(name);
    const auto sys = model::to_system(p);
    for (cplx l : right_half_plane()) {
      const cplx d = fredholm::det1(p, l, grid400()).value;
      const cplx dd = evans::transmission_matrix(sys, l, ip).determinant();
      worst = std::max(worst, rel_gap(d, dd));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(worst < 1e-5, "max relative gap " + fmt(worst));
  o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
  o.note("max relative gap " + fmt(worst));
  return o;
}

Outcome evans_identity() {
  Outcome o;
  const evans::IntegrationParams ip;
  double worst = 0.0, worst_shift = 0.0;
  for (const char* name : {"poschl_teller", "gaussian_pulse"}) {
    const auto p = model::builtin_problem(name);
    const auto sys = model::to_system(p);
    for (cplx l : right_half_plane()) {
      const cplx d = fredholm::det1(p, l, grid400()).value;
      const cplx r0 = evans::evans_ratio(sys, l, 0.0, ip);
      const cplx r1 = evans::evans_ratio(sys, l, 1.0, ip);
      worst = std::max(worst, rel_gap(d, r0));
      worst_shift = std::max(worst_shift, rel_gap(r0, r1));
    }
  }
  o.require(worst < 1e-5, "max relative gap " + fmt(worst));
  o.require(worst_shift < 1e-8, "matching-point shift " + fmt(worst_shift));
  o.note("max relative gap " + fmt(worst) + ", matching-point shift " + fmt(worst_shift));
  return o;
}

// tr(K^2) = 2 * integral over x < xi of tr(K(x, xi) K(xi, x)), with xi = x + t so that
// the kink sits on the boundary t = 0 and each panel sees a smooth integrand.
cplx trace_of_square(const model::SystemProblem& sys, cplx lambda) {
  const auto source = fredholm::system_source(greens::unperturbed_bases(sys, lambda), sys.perturbation);
  std::vector<double> xs, wx, ts, wt;
  composite_gauss(-14.0, 14.0, 56, 10, xs, wx);
  composite_gauss(0.0, 14.0, 56, 10, ts, wt);
  cplx sum(0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double x = xs[i], xi = xs[i] + ts[j];
      if (xi > 14.0) break;  // the perturbation is below 1e-11 there
      sum += wx[i] * wt[j] * (source(x, xi) * source(xi, x)).trace();
    }
  return 2.0 * sum;
}

Outcome det2_relation() {
  Outcome o;
  const evans::IntegrationParams ip;
  const std::vector<cplx> samples{cplx(4.0), cplx(9.0), cplx(2.0, 1.0), cplx(5.0, -2.0), cplx(3.0, 3.0)};
  double worst = 0.0, worst_p = 0.0;
  for (const char* name : {"poschl_teller", "gaussian_pulse"}) {
    const auto sys = model::to_system(model::builtin_problem(name));
    for (cplx l : samples) {
      const auto basis = greens::unperturbed_bases(sys, l);
      const cplx tau = fredholm::trace_system(sys, l, grid400(), basis);
      const cplx d2 = fredholm::det2(sys, l, grid400(), basis).value;
      const cplx dd = evans::transmission_matrix(sys, l, ip).determinant();
      worst = std::max(worst, rel_gap(dd, std::exp(tau) * d2));
      const cplx t2 = trace_of_square(sys, l);
      const cplx d3 = fredholm::detp(sys, l, grid400(), basis, 3).value;
      worst_p = std::max(worst_p, rel_gap(d3, d2 * std::exp(0.5 * t2)));
    }
  }
  o.require(worst < 1e-5, "relation residual " + fmt(worst));
  o.require(worst_p < 1e-6, "p = 3 vs p = 2 " + fmt(worst_p));
  o.note("relation residual " + fmt(worst) + ", p = 3 vs p = 2 " + fmt(worst_p));
  return o;
}

Outcome traces() {
  Outcome o;
  double w1 = 0.0, w2 = 0.0, w3 = 0.0;
  for (const char* name : {"poschl_teller", "sech_pulse", "gaussian_pulse", "biharmonic_demo"}) {
    const auto p = model::builtin_problem(name);
    const auto sys = model::to_system(p);
    // the fourth-order operator has essential spectrum on the positive axis
    const cplx first = p.order == 4 ? cplx(-4.0) : cplx(4.0);
    for (cplx l : {first, cplx(2.0, 1.0), cplx(9.0, -3.0)}) {
      const cplx ts = fredholm::trace_scalar(p, l);
      w1 = std::max(w1, std::abs(fredholm::series_coefficient(p, l, 1, grid400()) - ts));
      const auto both = fredholm::trace_system_both(sys, l, grid400(), greens::unperturbed_bases(sys, l));
      w2 = std::max(w2, std::abs(both.upper - ts));
      w3 = std::max(w3, both.gap);
    }
  }
  o.require(w1 < 1e-8, "series d1 " + fmt(w1));
  o.require(w2 < 1e-8, "system trace " + fmt(w2));
  o.require(w3 < 1e-8, "sign choices " + fmt(w3));
  o.note("series d1 " + fmt(w1) + ", system trace " + fmt(w2) + ", sign choices " + fmt(w3));
  return o;
}

Outcome normalization() {
  Outcome o;
  const auto p = model::builtin_problem("poschl_teller");
  const std::vector<double> ls{1e2, 1e3, 1e4};
  const auto gaps = fredholm::limit_normalization_check(p, ls, grid400());
  double worst = 0.0;
  for (std::size_t i = 0; i < ls.size(); ++i) worst = std::max(worst, std::abs(gaps[i] - std::abs(closed_form(ls[i]) - 1.0)));
  o.require(worst < 2e-3, "closed-form deviation " + fmt(worst));
  o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2], "not strictly decreasing");
  o.note("|d-1| = " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2]));
  return o;
}

Outcome winding() {
  Outcome o;
  const auto p = model::builtin_problem("poschl_teller");
  const auto d = locate::det1_evaluator(p, grid400());
  const auto e = locate::evans_evaluator(model::to_system(p), {});
  const locate::Contour around{cplx(0.5, -0.5), cplx(1.5, 0.5)}, away{cplx(2.0, -0.5), cplx(3.0, 0.5)};
  const int da = locate::winding_number(d, around), ea = locate::winding_number(e, around);
  const int db = locate::winding_number(d, away), eb = locate::winding_number(e, away);
  o.require(da == 1 && ea == 1, "around the bound state: " + std::to_string(da) + "/" + std::to_string(ea));
  o.require(db == 0 && eb == 0, "away from it: " + std::to_string(db) + "/" + std::to_string(eb));
  o.note("det1 " + std::to_string(da) + "," + std::to_string(db) + "; evans " + std::to_string(ea) + "," + std::to_string(eb));
  return o;
}

// Sign changes of f along (a, b), each bisected to width `tol`.
std::vector<std::pair<double, double>> real_zeros(const std::function<double(double)>& f, double a, double b, int n, double tol) {
  std::vector<std::pair<double, double>> out;
  double xp = a + (b - a) * 0.5 / n, fp = f(xp);
  for (int i = 1; i < n; ++i) {
    const double x = a + (b - a) * (i + 0.5) / n, fx = f(x);
    if ((fx > 0) != (fp > 0)) {
      double lo = xp, hi = x, flo = fp;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi), fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.emplace_back(lo, hi);
    }
    xp = x;
    fp = fx;
  }
  return out;
}

Outcome fronts_check() {
  Outcome o;
  // pulse limit
  double worst = 0.0;
  for (const char* name : {"poschl_teller", "gaussian_pulse"}) {
    const auto sys = model::to_system(model::builtin_problem(name));
    for (cplx l : {cplx(4.0), cplx(2.0, 1.0), cplx(9.0)}) {
      const auto basis = greens::unperturbed_bases(sys, l);
      worst = std::max(worst, std::abs(fronts::front_det2(sys, l, grid400()).value -
                                       fredholm::det2(sys, l, grid400(), basis).value));
    }
  }
  o.require(worst < 1e-8, "pulse limit " + fmt(worst));

  // interpolating front, v from 4 to 1 in u'' - v u = lambda u
  const auto front = model::to_system(model::builtin_problem("tanh_front", {{"amplitude", 1.5}, {"offset", -2.5}}));
  const QuadratureGrid split = build_grid(20.0, 400, QuadratureRule::GaussLegendre, 10, true);
  const evans::IntegrationParams ip;
  const auto zd = real_zeros([&](double l) { return fronts::front_det2(front, l, split).value.real(); }, 1.0, 4.0, 60, 1e-4);
  const auto ze = real_zeros([&](double l) { return fronts::front_evans_ratio(front, l, 0.0, ip).real(); }, 1.0, 4.0, 60, 1e-4);
  bool same = zd.size() == ze.size();
  for (std::size_t i = 0; same && i < zd.size(); ++i)
    same = std::max(zd[i].first, ze[i].first) <= std::min(zd[i].second, ze[i].second) + 1e-4;
  o.require(same, "zero sets differ (" + std::to_string(zd.size()) + " vs " + std::to_string(ze.size()) + ")");

  fronts::FrontSplit s;
  s.kappa_minus = {2.0};
  s.tau_plus = {-1.0};
  s.companion = true;
  const CMatrix b = fronts::front_reference(s).B;
  CMatrix expect(2, 2);
  expect << 0.0, 1.0, 2.0, 1.0;
  o.require(b == expect, "B differs from [[0,1],[2,1]]");
  o.note("pulse limit " + fmt(worst) + ", zeros in (1,4): det2 " + std::to_string(zd.size()) + ", evans " +
         std::to_string(ze.size()) + ", B exact");

  // informational: with a bump the two functions each have one zero in (-0.9, 0.9), at different places
  const auto bumped = model::to_system(
      model::builtin_problem("tanh_front", {{"amplitude", 1.5}, {"offset", -2.5}, {"bump", 3.0}}));
  const auto bd = real_zeros([&](double l) { return fronts::front_det2(bumped, l, split).value.real(); }, -0.9, 0.9, 18, 1e-4);
  const auto be = real_zeros([&](double l) { return fronts::front_evans_ratio(bumped, l, 0.0, ip).real(); }, -0.9, 0.9, 18, 1e-4);
  std::string info = "bumped front zeros: det2";
  for (const auto& z : bd) info += " " + fmt(z.first);
  info += ", evans";
  for (const auto& z : be) info += " " + fmt(z.first);
  o.note(info + " (informational)");
  return o;
}

Outcome convergence() {
  Outcome o;
  std::string info;
  for (const char* name : {"poschl_teller", "sech_pulse", "gaussian_pulse"}) {
    const auto p = model::builtin_problem(name);
    std::vector<cplx> d;
    for (int n : {100, 200, 400, 800}) d.push_back(fredholm::det1(p, 4.0, build_grid(20.0, n)).value);
    const double g1 = std::abs(d[0] - d[1]), g2 = std::abs(d[1] - d[2]), g3 = std::abs(d[2] - d[3]);
    o.require(g1 >= 10.0 * g2 && g2 >= 10.0 * g3, std::string(name) + " refinement ratios " + fmt(g1 / g2) + ", " + fmt(g2 / g3));
    info += std::string(name) + " ratios " + fmt(g1 / g2) + "/" + fmt(g2 / g3) + "; ";
  }
  // truncation on the sech-squared profile, whose kernel tails decay like e^{-2X}
  const auto pt = model::builtin_problem("poschl_teller");
  const double trunc = std::abs(fredholm::det1(pt, 4.0, build_grid(15.0, 300)).value -
                                fredholm::det1(pt, 4.0, build_grid(25.0, 500)).value);
  o.require(trunc < 1e-8, "truncation " + fmt(trunc));
  info += "truncation " + fmt(trunc) + "; ";
  const auto p = model::builtin_problem("poschl_teller");
  const double h = 1e-3;
  auto f = [&](cplx l) { return fredholm::det1(p, l, grid400()).value; };
  const cplx dx = (f(4.0 + h) - f(4.0 - h)) / (2 * h);
  const cplx dy = (f(cplx(4.0, h)) - f(cplx(4.0, -h))) / (2 * h);
  const double cr = std::abs(dx + cplx(0.0, 1.0) * dy);
  o.require(cr < 1e-6, "Cauchy-Riemann residual " + fmt(cr));
  o.note(info + "Cauchy-Riemann " + fmt(cr));
  return o;
}

}  // namespace

int main() {
  std::printf("fredev acceptance suite\n");
  run(1, "Green's-function identities", green_identities);
  run(2, "analytic resolvent oracle", resolvent_oracle);
  run(3, "Poschl-Teller closed form", poschl_teller);
  run(4, "det D = d", transmission_identity);
  run(5, "d = E/c and matching-point invariance", evans_identity);
  run(6, "det2 relation and p = 3 correction", det2_relation);
  run(7, "trace oracles", traces);
  run(8, "normalization at infinity", normalization);
  run(9, "winding numbers", winding);
  run(10, "fronts", fronts_check);
  run(11, "convergence and robustness", convergence);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
