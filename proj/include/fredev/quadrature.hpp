#pragma once

#include <string>
#include <vector>

namespace fredev {

enum class QuadratureRule { GaussLegendre, Trapezoid };

QuadratureRule parse_rule(const std::string& name);
std::string to_string(QuadratureRule rule);

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct QuadratureGrid {
  double half_width = 0.0;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  int panel_order = 10;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> edges;       // panel edges, size panels+1 (trapezoid: {-X, X})
  std::vector<int> panel_of;       // panel index of each node

  std::size_t size() const { return nodes.size(); }
  std::size_t panels() const { return edges.size() - 1; }
  /// First node index of panel p; nodes of a panel are contiguous.
  std::size_t panel_begin(std::size_t p) const { return p * static_cast<std::size_t>(panel_order); }
};

/// Composite Gauss-Legendre grid with ceil(N/order) equal panels, or an
/// N-point trapezoid rule. With `split_at_zero` the panel count is made even
/// so that x = 0 is a panel edge.
QuadratureGrid build_grid(double X, int N, QuadratureRule rule = QuadratureRule::GaussLegendre,
                          int panel_order = 10, bool split_at_zero = false);

/// Composite Gauss-Legendre rule on [a, b] with `panels` panels of `order` points.
void composite_gauss(double a, double b, int panels, int order, std::vector<double>& nodes,
                     std::vector<double>& weights);

}  // namespace fredev
