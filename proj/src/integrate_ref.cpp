#include "prismint/integrate_ref.hpp"

#include <string>

#include "prismint/errors.hpp"
#include "prismint/flop_costs.hpp"

namespace prismint {

namespace {

struct SparseCoeffTerm {
  int i_eq, j_eq, i_d, j_d;
  double value;
};

// Nonzero coefficient entries in (i_D, j_D, i_E, j_E) loop order. Iterating
// this list accumulates bit-identically to the full nest, since skipped terms
// contribute exact zeros.
std::vector<SparseCoeffTerm> sparse_terms(const CoefficientTensor& c) {
  std::vector<SparseCoeffTerm> terms;
  for (int i_d = 0; i_d < 4; ++i_d) {
    for (int j_d = 0; j_d < 4; ++j_d) {
      for (int i_e = 0; i_e < c.n_eq; ++i_e) {
        for (int j_e = 0; j_e < c.n_eq; ++j_e) {
          if (c.nonzero[c.index(i_e, j_e, i_d, j_d)]) {
            terms.push_back({i_e, j_e, i_d, j_d, c.at(i_e, j_e, i_d, j_d)});
          }
        }
      }
    }
  }
  return terms;
}

void check_consistency(const ShapeTable& shapes, const QuadratureRule& rule) {
  if (shapes.order_p != rule.order_p) {
    throw ConfigError("integrator: shape table (p=" + std::to_string(shapes.order_p) +
                      ") and rule (p=" + std::to_string(rule.order_p) + ") disagree");
  }
  if (shapes.per_point.size() != rule.points.size()) {
    throw ConfigError("integrator: shape table tabulated at " +
                      std::to_string(shapes.per_point.size()) + " points, rule has " +
                      std::to_string(rule.points.size()));
  }
}

}  // namespace

ElementStiffness integrate_generic(const PrismGeometry& geom, const QuadCoefficients& coeffs,
                                   const ShapeTable& shapes, const QuadratureRule& rule,
                                   const PreviousSolution* old_solution, std::int64_t element_id) {
  check_consistency(shapes, rule);
  if (coeffs.per_point.size() != rule.points.size()) {
    throw ConfigError("integrate_generic: coefficient array covers " +
                      std::to_string(coeffs.per_point.size()) + " points, rule has " +
                      std::to_string(rule.points.size()));
  }
  const int n_sh = shapes.n_shape;
  const int n_eq = coeffs.per_point.front().n_eq;
  if (old_solution && !old_solution->empty() &&
      (old_solution->n_eq != n_eq || old_solution->n_shape != n_sh)) {
    throw ConfigError("integrate_generic: previous-solution shape mismatch");
  }

  ElementStiffness a;
  a.order_p = shapes.order_p;
  a.n_eq = n_eq;
  a.n_shape = n_sh;
  a.data.assign(static_cast<std::size_t>(a.dim()) * a.dim(), 0.0);

  for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
    const JacobianTerms jt = jacobian_terms(geom, rule.points[iq], element_id);
    const PhysicalShapeValues psi = physical_derivatives(shapes.per_point[iq], jt);
    const CoefficientTensor& cq = coeffs.per_point[iq];
    if (cq.n_eq != n_eq) {
      throw ConfigError("integrate_generic: inconsistent n_eq across points");
    }
    const auto terms = sparse_terms(cq);
    const double dw = jt.det * rule.weights[iq];
    for (int i_dof = 0; i_dof < n_sh; ++i_dof) {
      for (int j_dof = 0; j_dof < n_sh; ++j_dof) {
        for (const SparseCoeffTerm& t : terms) {
          a.at(t.i_eq, i_dof, t.j_eq, j_dof) +=
              dw * t.value * psi.value(t.i_d, i_dof) * psi.value(t.j_d, j_dof);
        }
      }
    }
  }
  return a;
}

ElementStiffness integrate_optimized(const PrismGeometry& geom, const MaterialData& mat,
                                     const ShapeTable& shapes, const QuadratureRule& rule,
                                     std::int64_t element_id, std::uint64_t* block_update_flops) {
  check_consistency(shapes, rule);
  const LameParameters lame = lame_parameters(mat);
  const int n_sh = shapes.n_shape;
  std::uint64_t counted = 0;

  ElementStiffness a;
  a.order_p = shapes.order_p;
  a.n_eq = kNumEquations;
  a.n_shape = n_sh;
  a.data.assign(static_cast<std::size_t>(a.dim()) * a.dim(), 0.0);

  // Matches the (lambda + mu) + mu accumulation of the assembled tensor.
  const double lambda_two_mu = (lame.lambda + lame.mu) + lame.mu;

  for (std::size_t iq = 0; iq < rule.points.size(); ++iq) {
    const JacobianTerms jt = jacobian_terms(geom, rule.points[iq], element_id);
    const PhysicalShapeValues psi = physical_derivatives(shapes.per_point[iq], jt);
    const double dw = jt.det * rule.weights[iq];
    const double scaled[3] = {dw * lame.lambda, dw * lame.mu, dw * lambda_two_mu};
    for (int i_dof = 0; i_dof < n_sh; ++i_dof) {
      const double u[3] = {psi.value(1, i_dof), psi.value(2, i_dof), psi.value(3, i_dof)};
      for (int j_dof = 0; j_dof < n_sh; ++j_dof) {
        const double v[3] = {psi.value(1, j_dof), psi.value(2, j_dof), psi.value(3, j_dof)};
        for (const flops::BlockTerm& t : flops::kElasticityBlockTerms) {
          a.at(t.row, i_dof, t.col, j_dof) += scaled[t.coeff] * u[t.du] * v[t.dv];
        }
        counted += flops::kBlockUpdate;
      }
    }
  }
  if (block_update_flops) {
    *block_update_flops += counted;
  }
  return a;
}

std::uint64_t flop_count_reference(int p) {
  const std::uint64_t n_sh = static_cast<std::uint64_t>(shape_count(p));
  const std::uint64_t n_q = static_cast<std::uint64_t>(quadrature_point_count(p));
  return n_sh * n_sh * n_q * flops::kBlockUpdate;
}

}  // namespace prismint
