#include "fredev/quadrature.hpp"

#include <cmath>

#include "fredev/errors.hpp"
#include "fredev/types.hpp"

namespace fredev {

QuadratureRule parse_rule(const std::string& name) {
  if (name == "gauss_legendre" || name == "gauss" || name == "gl") return QuadratureRule::GaussLegendre;
  if (name == "trapezoid") return QuadratureRule::Trapezoid;
  fail(ErrorKind::Config, "unknown quadrature rule '" + name + "'");
}

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::GaussLegendre ? "gauss_legendre" : "trapezoid";
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged node for the weight
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

void composite_gauss(double a, double b, int panels, int order, std::vector<double>& nodes,
                     std::vector<double>& weights) {
  std::vector<double> t, w;
  gauss_legendre(order, t, w);
  nodes.clear();
  weights.clear();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int q = 0; q < order; ++q) {
      nodes.push_back(mid + 0.5 * h * t[static_cast<std::size_t>(q)]);
      weights.push_back(0.5 * h * w[static_cast<std::size_t>(q)]);
    }
  }
}

QuadratureGrid build_grid(double X, int N, QuadratureRule rule, int panel_order, bool split_at_zero) {
  if (!(X > 0.0) || !std::isfinite(X)) fail(ErrorKind::Config, "grid half-width must be positive and finite");
  if (N < 2) fail(ErrorKind::Config, "grid needs at least 2 nodes");
  QuadratureGrid g;
  g.half_width = X;
  g.rule = rule;

  if (rule == QuadratureRule::Trapezoid) {
    g.panel_order = N;
    const double h = 2.0 * X / (N - 1);
    for (int i = 0; i < N; ++i) {
      g.nodes.push_back(i == N - 1 ? X : -X + i * h);
      g.weights.push_back((i == 0 || i == N - 1) ? 0.5 * h : h);
      g.panel_of.push_back(0);
    }
    g.edges = {-X, X};
    return g;
  }

  if (panel_order < 1 || panel_order > 64) fail(ErrorKind::Config, "panel order must be in [1, 64]");
  g.panel_order = panel_order;
  int panels = (N + panel_order - 1) / panel_order;
  if (split_at_zero && panels % 2 == 1) ++panels;
  composite_gauss(-X, X, panels, panel_order, g.nodes, g.weights);
  const double h = 2.0 * X / panels;
  for (int p = 0; p <= panels; ++p) g.edges.push_back(p == panels ? X : -X + p * h);
  if (split_at_zero) g.edges[static_cast<std::size_t>(panels / 2)] = 0.0;
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < panel_order; ++q) g.panel_of.push_back(p);
  return g;
}

}  // namespace fredev
