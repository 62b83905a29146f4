#pragma once

#include <array>
#include <cstdint>

namespace prismint::flops {

// Operation costs (mul/add/div each counted as one flop) used both by the
// instrumented counters and by the closed-form models. Changing any code path
// below requires updating its constant; the model-vs-counter equality tests
// pin them together.

/// One 3x3 block update: 21 nonzero isotropic-elasticity tensor entries, each
/// costing one scale, one multiply and one accumulate.
inline constexpr std::uint64_t kBlockUpdate = 63;

/// Physical derivatives of one shape function (3 directions x (3 mul + 2 add)).
inline constexpr std::uint64_t kPsiPerShape = 15;

/// Vertex-function derivative evaluation at a point (vertical blending
/// factors, barycentric complement, three halvings).
inline constexpr std::uint64_t kGeomShapeDerivs = 9;

/// Jacobian assembly: 9 entries, 6 mul + 5 add each.
inline constexpr std::uint64_t kJacobianAssembly = 99;

/// Determinant from the first cofactor column: 3 mul + 2 add.
inline constexpr std::uint64_t kJacobianDet = 5;

/// Inverse from 9 signed cofactors (27), one reciprocal, 9 scalings.
inline constexpr std::uint64_t kJacobianInverse = 37;

/// det * weight.
inline constexpr std::uint64_t kDetWeight = 1;

/// Scaled coefficient values lambda*dw, mu*dw, (lambda+2mu)*dw.
inline constexpr std::uint64_t kCoefficientScale = 3;

/// Lame parameters plus lambda+2mu from (E, nu): counted from the exact
/// expression sequence in the kernels.
inline constexpr std::uint64_t kMaterialSetup = 10;

/// Index of the scaled coefficient value used by a block-update term.
enum : int { kLambda = 0, kMu = 1, kLambdaTwoMu = 2 };

struct BlockTerm {
  std::int8_t row;    // i_E: block row
  std::int8_t col;    // j_E: block column
  std::int8_t du;     // derivative index into the test-function gradient
  std::int8_t dv;     // derivative index into the trial-function gradient
  std::int8_t coeff;  // kLambda / kMu / kLambdaTwoMu
};

/// The nonzero entries of the isotropic elasticity tensor, enumerated in the
/// order (i_E, j_E, i_D, j_D) ascending. B[row][col] += coeff * u[du] * v[dv].
inline constexpr std::array<BlockTerm, 21> kElasticityBlockTerms = {{
    {0, 0, 0, 0, kLambdaTwoMu},
    {0, 0, 1, 1, kMu},
    {0, 0, 2, 2, kMu},
    {0, 1, 0, 1, kLambda},
    {0, 1, 1, 0, kMu},
    {0, 2, 0, 2, kLambda},
    {0, 2, 2, 0, kMu},
    {1, 0, 0, 1, kMu},
    {1, 0, 1, 0, kLambda},
    {1, 1, 0, 0, kMu},
    {1, 1, 1, 1, kLambdaTwoMu},
    {1, 1, 2, 2, kMu},
    {1, 2, 1, 2, kLambda},
    {1, 2, 2, 1, kMu},
    {2, 0, 0, 2, kMu},
    {2, 0, 2, 0, kLambda},
    {2, 1, 1, 2, kMu},
    {2, 1, 2, 1, kLambda},
    {2, 2, 0, 0, kMu},
    {2, 2, 1, 1, kMu},
    {2, 2, 2, 2, kLambdaTwoMu},
}};

static_assert(kElasticityBlockTerms.size() * 3 == kBlockUpdate);

}  // namespace prismint::flops
