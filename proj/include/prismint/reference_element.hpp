#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace prismint {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 7;

// Number of PDE components of the elasticity model (displacements in 3D).
inline constexpr int kNumEquations = 3;

/// Point in the reference prism: the triangular coordinates (xi1, xi2) with
/// xi1, xi2 >= 0, xi1 + xi2 <= 1, and the vertical coordinate xi3 in [-1, 1].
struct RefCoords {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
};

bool inside_reference_prism(const RefCoords& xi, double tol = 1e-12);

/// Shape functions per element for approximation order p: (p+1)^2 (p+2) / 2.
int shape_count(int p);

/// Quadrature points of the prism rule for order p (triangle rule for degree
/// 2p tensored with (p+1)-point Gauss-Legendre).
int quadrature_point_count(int p);

struct QuadratureRule {
  int order_p = 0;
  std::vector<RefCoords> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Values and reference-coordinate derivatives of every shape function at one
/// point. Row 0 holds function values, rows 1..3 the d/dxi1..d/dxi3
/// derivatives; within a row the shape-function index varies fastest.
struct ShapePointValues {
  int n_shape = 0;
  std::vector<double> data;  // [4][n_shape]

  double value(int deriv, int dof) const { return data[static_cast<std::size_t>(deriv) * n_shape + dof]; }
  double& value(int deriv, int dof) { return data[static_cast<std::size_t>(deriv) * n_shape + dof]; }
};

struct ShapeTable {
  int order_p = 0;
  int n_shape = 0;
  std::vector<ShapePointValues> per_point;

  std::size_t entry_count() const { return per_point.size() * 4u * static_cast<std::size_t>(n_shape); }
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for degree <= 2n-1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_1d(int n);

/// Symmetric rule on the unit triangle, exact for total degree <= poly_degree.
/// Supported degrees: 2, 4, 6, 8, 10, 12, 14 with 3, 6, 12, 16, 25, 33, 42
/// points; weights sum to 1/2. Throws UnsupportedDegreeError otherwise.
std::pair<std::vector<std::array<double, 2>>, std::vector<double>> triangle_rule(int poly_degree);

/// Tensor-product prism rule for approximation order p in [1, 7].
QuadratureRule prism_quadrature(int p);

/// Exponent pair (a, b) of a triangle monomial xi1^a xi2^b.
struct TriMonomial {
  int a = 0;
  int b = 0;
};

/// The complete monomial set {xi1^a xi2^b : a+b <= p}, ordered by total degree
/// and lexicographically by (a, b) within a degree.
std::vector<TriMonomial> triangle_monomials(int p);

/// Legendre polynomial P_k and its derivative at x.
std::pair<double, double> legendre_value_and_derivative(int k, double x);

/// Evaluates the full prism basis at one point. Basis index is
/// tri_index * (p+1) + vert_index with the triangle monomials above and the
/// vertical Legendre polynomials P_0..P_p(xi3).
ShapePointValues shape_values(int p, const RefCoords& xi);

/// shape_values at every point of the rule. The rule must be built for the
/// same p (configuration error otherwise).
ShapeTable tabulate_shapes(int p, const QuadratureRule& rule);

}  // namespace prismint
