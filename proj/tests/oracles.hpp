#pragma once

// Test-only oracles, independent of the library's integration paths: an exact
// polynomial algebra with closed-form integrals over the reference prism, a
// dense symmetric eigensolver, and small helpers shared across suites.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "prismint/geometry.hpp"
#include "prismint/integrate_ref.hpp"
#include "prismint/reference_element.hpp"

namespace testutil {

/// Integral of xi1^a xi2^b over the unit triangle: a! b! / (a+b+2)!.
double tri_monomial_integral(int a, int b);

/// Integral of xi3^c over [-1, 1].
double vertical_monomial_integral(int c);

/// Sparse polynomial in (xi1, xi2, xi3) with exact monomial arithmetic.
class Poly3 {
 public:
  Poly3() = default;
  static Poly3 monomial(int a, int b, int c, double coeff);

  Poly3& operator+=(const Poly3& other);
  Poly3 operator*(const Poly3& other) const;
  Poly3 scaled(double factor) const;
  Poly3 derivative(int axis) const;  // 0 -> xi1, 1 -> xi2, 2 -> xi3

  double eval(double x1, double x2, double x3) const;
  double integral_over_reference_prism() const;

 private:
  std::map<std::array<int, 3>, double> terms_;
};

/// Monomial coefficients of the Legendre polynomial P_k, constant term first.
/// Exact dyadic rationals up to k = 7.
std::vector<double> legendre_monomial_coeffs(int k);

/// Basis function dof of order p as an exact polynomial.
Poly3 basis_polynomial(int p, int dof);

/// Eigenvalues of a dense symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

double frobenius_norm(const std::vector<double>& a);
double rel_frobenius_diff(const std::vector<double>& a, const std::vector<double>& b);

/// Max |(A u)_i| for the canonical stiffness layout.
double apply_inf_norm(const prismint::ElementStiffness& a, const std::vector<double>& u);
double matrix_inf_norm(const prismint::ElementStiffness& a);

/// Deterministic points strictly inside the reference prism.
std::vector<prismint::RefCoords> random_interior_points(int count, std::uint64_t seed);

/// Coefficients, in the order-p basis, of the affine field g . x + c mapped
/// through an affine prism geometry (constant Jacobian required).
std::vector<double> interpolate_affine_field(int p, const prismint::PrismGeometry& geom,
                                             const std::array<double, 3>& gradient, double constant);

/// Prism translated/stretched/sheared by an affine map (keeps J constant).
prismint::PrismGeometry affine_prism(const std::array<std::array<double, 3>, 3>& a,
                                     const std::array<double, 3>& shift);

}  // namespace testutil
