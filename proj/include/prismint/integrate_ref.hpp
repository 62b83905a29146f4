#pragma once

#include <cstdint>
#include <vector>

#include "prismint/coefficients.hpp"
#include "prismint/geometry.hpp"
#include "prismint/reference_element.hpp"

namespace prismint {

/// Dense element stiffness matrix in the canonical layout: row-major with
/// global row index i_DOF * n_eq + i_E (and columns likewise).
struct ElementStiffness {
  int order_p = 0;
  int n_eq = 0;
  int n_shape = 0;
  std::vector<double> data;

  int dim() const { return n_eq * n_shape; }
  std::size_t index(int i_eq, int i_dof, int j_eq, int j_dof) const {
    return (static_cast<std::size_t>(i_dof) * n_eq + i_eq) * dim() +
           static_cast<std::size_t>(j_dof) * n_eq + j_eq;
  }
  double at(int i_eq, int i_dof, int j_eq, int j_dof) const {
    return data[index(i_eq, i_dof, j_eq, j_dof)];
  }
  double& at(int i_eq, int i_dof, int j_eq, int j_dof) {
    return data[index(i_eq, i_dof, j_eq, j_dof)];
  }
};

/// Reference integrator: the full loop nest over quadrature points, shape
/// function pairs, derivative indices and equation indices, in double
/// precision, for an arbitrary coefficient array. Serves as the correctness
/// oracle for everything else.
ElementStiffness integrate_generic(const PrismGeometry& geom, const QuadCoefficients& coeffs,
                                   const ShapeTable& shapes, const QuadratureRule& rule,
                                   const PreviousSolution* old_solution = nullptr,
                                   std::int64_t element_id = -1);

/// Elasticity integrator: per shape-function pair the 3x3 block is updated
/// with the 63-flop form implied by the isotropic coefficient sparsity.
/// Agrees with integrate_generic(elasticity_tensor(mat), ...) to round-off.
/// When block_update_flops is given it accumulates the instrumented flop
/// count of the executed block updates.
ElementStiffness integrate_optimized(const PrismGeometry& geom, const MaterialData& mat,
                                     const ShapeTable& shapes, const QuadratureRule& rule,
                                     std::int64_t element_id = -1,
                                     std::uint64_t* block_update_flops = nullptr);

/// Block-update flops of the sequential elasticity path: N_sh^2 * N_Q * 63.
std::uint64_t flop_count_reference(int p);

}  // namespace prismint
