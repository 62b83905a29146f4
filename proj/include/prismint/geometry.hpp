#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "prismint/reference_element.hpp"

namespace prismint {

/// Multi-linear prism defined by its six vertices: bottom triangle 0,1,2
/// (counterclockwise seen from above), top triangle 3,4,5 stacked above them.
struct PrismGeometry {
  std::array<std::array<double, 3>, 6> vertices{};
};

/// The prism that maps onto itself (identity reference-to-real mapping).
PrismGeometry reference_prism_geometry();

/// Determinant and inverse of the reference-to-real Jacobian at one point.
/// inv[k][i] holds d(xi_k)/d(x_i); column i is the gradient of xi w.r.t. x_i.
struct JacobianTerms {
  double det = 0.0;
  std::array<std::array<double, 3>, 3> inv{};
};

/// Number of reals in one precomputed Jacobian record: det followed by the
/// row-major inverse.
inline constexpr int kJacobianRecordSize = 10;

/// Shape values with derivatives taken w.r.t. physical coordinates. Row 0 is
/// identical to the reference row 0.
struct PhysicalShapeValues {
  int n_shape = 0;
  std::vector<double> data;  // [4][n_shape]

  double value(int deriv, int dof) const { return data[static_cast<std::size_t>(deriv) * n_shape + dof]; }
  double& value(int deriv, int dof) { return data[static_cast<std::size_t>(deriv) * n_shape + dof]; }
};

/// Values of the six multi-linear vertex functions at xi.
std::array<double, 6> geometry_shape_values(const RefCoords& xi);

/// Derivatives of the vertex functions, [deriv index 0..2][vertex 0..5].
std::array<std::array<double, 6>, 3> geometry_shape_derivs(const RefCoords& xi);

std::array<std::array<double, 3>, 3> jacobian_matrix(const PrismGeometry& geom, const RefCoords& xi);

/// Jacobian determinant and inverse at xi. Throws InvertedElementError when
/// det <= 0; element_id is only used to label that error.
JacobianTerms jacobian_terms(const PrismGeometry& geom, const RefCoords& xi,
                             std::int64_t element_id = -1);

/// Chain rule: converts reference derivatives to physical ones, copying the
/// value row unchanged.
PhysicalShapeValues physical_derivatives(const ShapePointValues& ref_vals, const JacobianTerms& jt);

/// Jacobian records for all elements at all rule points, element-major then
/// point-major, kJacobianRecordSize reals each.
std::vector<double> precompute_all_jacobian_terms(std::span<const PrismGeometry> geoms,
                                                  const QuadratureRule& rule);

inline constexpr std::uint64_t kDefaultMeshSeed = 0x5072697342657631ull;

/// Unit box split into nx*ny*nz cells of two prisms each. distortion = 0
/// produces right prisms; distortion in (0, 0.3) perturbs interior grid nodes
/// deterministically from the seed, keeping boundary nodes (and the total
/// volume) fixed. Every generated element is validated against the densest
/// supported quadrature rule.
std::vector<PrismGeometry> generate_box_mesh(int nx, int ny, int nz, double distortion,
                                             std::uint64_t seed = kDefaultMeshSeed);

}  // namespace prismint
