#pragma once

#include <cstdint>
#include <vector>

#include "prismint/reference_element.hpp"

namespace prismint {

/// Weak-form coefficient array c[i_E][j_E][i_D][j_D] with i_D, j_D in 0..3
/// (0 = undifferentiated term, 1..3 = spatial derivatives).
struct CoefficientTensor {
  int n_eq = 0;
  std::vector<double> entries;        // [n_eq][n_eq][4][4]
  std::vector<std::uint8_t> nonzero;  // same shape, 1 where entries != 0

  static CoefficientTensor zeros(int n_eq);

  std::size_t index(int ie, int je, int id, int jd) const {
    return ((static_cast<std::size_t>(ie) * n_eq + je) * 4 + id) * 4 + jd;
  }
  double at(int ie, int je, int id, int jd) const { return entries[index(ie, je, id, jd)]; }
  void set(int ie, int je, int id, int jd, double value);
};

/// Per-quadrature-point coefficient tensors.
struct QuadCoefficients {
  std::vector<CoefficientTensor> per_point;
};

struct MaterialData {
  double young_E = 1.0;
  double poisson_nu = 0.0;
};

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Lame parameters from (E, nu); nu = 0.5 is rejected (incompressible).
LameParameters lame_parameters(const MaterialData& mat);

/// Degrees of freedom from previous iterations/time steps; optional input for
/// problem-dependent coefficient evaluation.
struct PreviousSolution {
  int n_eq = 0;
  int n_shape = 0;
  std::vector<double> dofs;  // [n_eq][n_shape]

  bool empty() const { return dofs.empty(); }
};

/// Isotropic linear-elasticity tensor for n_eq = 3:
/// c[i][k][j][l] = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk), stored at
/// equation indices (i, k) and derivative slots (j+1, l+1). Slots with
/// i_D = 0 or j_D = 0 stay zero.
CoefficientTensor elasticity_tensor(const MaterialData& mat);

/// Coefficients at a quadrature point. The linear elastostatics model has
/// element-constant coefficients, so this is the identity on base; the
/// signature carries the previous solution so quasi-linear problems can slot
/// in without interface changes.
CoefficientTensor coefficients_at_point(const CoefficientTensor& base,
                                        const PreviousSolution* old_solution, const RefCoords& xi);

/// Expands a base tensor to all points of a rule through coefficients_at_point.
QuadCoefficients expand_coefficients(const CoefficientTensor& base, const QuadratureRule& rule,
                                     const PreviousSolution* old_solution = nullptr);

}  // namespace prismint
