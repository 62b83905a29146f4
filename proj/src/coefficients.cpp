#include "prismint/coefficients.hpp"

#include <string>

#include "prismint/errors.hpp"

namespace prismint {

CoefficientTensor CoefficientTensor::zeros(int n_eq) {
  CoefficientTensor t;
  t.n_eq = n_eq;
  t.entries.assign(static_cast<std::size_t>(n_eq) * n_eq * 16, 0.0);
  t.nonzero.assign(t.entries.size(), 0);
  return t;
}

void CoefficientTensor::set(int ie, int je, int id, int jd, double value) {
  const std::size_t k = index(ie, je, id, jd);
  entries[k] = value;
  nonzero[k] = value != 0.0 ? 1 : 0;
}

LameParameters lame_parameters(const MaterialData& mat) {
  if (mat.young_E <= 0.0) {
    throw DomainError("material: Young modulus must be positive");
  }
  if (mat.poisson_nu <= -1.0 || mat.poisson_nu > 0.5) {
    throw DomainError("material: Poisson ratio must lie in (-1, 0.5]");
  }
  if (mat.poisson_nu == 0.5) {
    throw DomainError("material: nu = 0.5 (incompressible) has no finite Lame lambda");
  }
  LameParameters lame;
  lame.mu = mat.young_E / (2.0 * (1.0 + mat.poisson_nu));
  lame.lambda = mat.young_E * mat.poisson_nu /
                ((1.0 + mat.poisson_nu) * (1.0 - 2.0 * mat.poisson_nu));
  return lame;
}

CoefficientTensor elasticity_tensor(const MaterialData& mat) {
  const LameParameters lame = lame_parameters(mat);
  CoefficientTensor t = CoefficientTensor::zeros(3);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) {
        for (int l = 0; l < 3; ++l) {
          double c = 0.0;
          if (i == j && k == l) c += lame.lambda;
          if (i == k && j == l) c += lame.mu;
          if (i == l && k == j) c += lame.mu;
          if (c != 0.0) {
            t.set(i, k, j + 1, l + 1, c);
          }
        }
      }
    }
  }
  return t;
}

CoefficientTensor coefficients_at_point(const CoefficientTensor& base,
                                        const PreviousSolution* old_solution, const RefCoords& xi) {
  (void)old_solution;
  (void)xi;
  return base;
}

QuadCoefficients expand_coefficients(const CoefficientTensor& base, const QuadratureRule& rule,
                                     const PreviousSolution* old_solution) {
  QuadCoefficients q;
  q.per_point.reserve(rule.points.size());
  for (const RefCoords& xi : rule.points) {
    q.per_point.push_back(coefficients_at_point(base, old_solution, xi));
  }
  return q;
}

}  // namespace prismint
