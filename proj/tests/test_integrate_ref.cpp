#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "prismint/coefficients.hpp"
#include "prismint/errors.hpp"
#include "prismint/integrate_ref.hpp"

using namespace prismint;

namespace {

struct Fixture {
  QuadratureRule rule;
  ShapeTable shapes;
};

Fixture make_fixture(int p) {
  Fixture f;
  f.rule = prism_quadrature(p);
  f.shapes = tabulate_shapes(p, f.rule);
  return f;
}

ElementStiffness elasticity_generic(const PrismGeometry& geom, const MaterialData& mat,
                                    const Fixture& f) {
  const QuadCoefficients coeffs = expand_coefficients(elasticity_tensor(mat), f.rule);
  return integrate_generic(geom, coeffs, f.shapes, f.rule);
}

// Canonical-layout vector for one displacement field given per-equation basis
// coefficients.
std::vector<double> pack_displacement(const std::array<std::vector<double>, 3>& per_eq) {
  const std::size_t n_sh = per_eq[0].size();
  std::vector<double> u(3 * n_sh);
  for (std::size_t dof = 0; dof < n_sh; ++dof) {
    for (int e = 0; e < 3; ++e) {
      u[dof * 3 + e] = per_eq[e][dof];
    }
  }
  return u;
}

const PrismGeometry kAffine =
    testutil::affine_prism({{{0.9, 0.15, -0.05}, {0.1, 1.1, 0.2}, {-0.08, 0.05, 0.8}}},
                           {0.4, -0.7, 0.25});

}  // namespace

TEST_SUITE_BEGIN("integrate_ref");

TEST_CASE("rigid translations carry no stiffness (p=1)") {
  const Fixture f = make_fixture(1);
  const MaterialData mat{5.0, 0.3};
  const ElementStiffness a = elasticity_generic(kAffine, mat, f);
  const double scale = testutil::matrix_inf_norm(a);
  REQUIRE(scale > 0.0);
  for (int e = 0; e < 3; ++e) {
    std::array<std::vector<double>, 3> per_eq;
    for (int k = 0; k < 3; ++k) {
      per_eq[k].assign(f.shapes.n_shape, 0.0);
    }
    per_eq[e][0] = 1.0;  // constant mode, unit amplitude on one equation
    const std::vector<double> u = pack_displacement(per_eq);
    CHECK(testutil::apply_inf_norm(a, u) <= 1e-12 * scale);
  }
}

TEST_CASE("identity prism, p=2 Laplace entries match the polynomial oracle") {
  const Fixture f = make_fixture(2);
  CoefficientTensor laplace = CoefficientTensor::zeros(1);
  for (int d = 1; d <= 3; ++d) {
    laplace.set(0, 0, d, d, 1.0);
  }
  const QuadCoefficients coeffs = expand_coefficients(laplace, f.rule);
  const ElementStiffness a =
      integrate_generic(reference_prism_geometry(), coeffs, f.shapes, f.rule);

  const int pairs[5][2] = {{0, 0}, {3, 7}, {11, 2}, {17, 17}, {5, 14}};
  for (const auto& pr : pairs) {
    const testutil::Poly3 pr_r = testutil::basis_polynomial(2, pr[0]);
    const testutil::Poly3 pr_s = testutil::basis_polynomial(2, pr[1]);
    testutil::Poly3 integrand;
    for (int d = 0; d < 3; ++d) {
      integrand += pr_r.derivative(d) * pr_s.derivative(d);
    }
    const double exact = integrand.integral_over_reference_prism();
    const double got = a.at(0, pr[0], 0, pr[1]);
    CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("rigid rotations are annihilated on affine prisms (p=3)") {
  const Fixture f = make_fixture(3);
  const MaterialData mat{2.0, 0.28};
  const ElementStiffness a = elasticity_generic(kAffine, mat, f);
  const double scale = testutil::matrix_inf_norm(a);

  const std::array<std::array<double, 3>, 3> axes = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (const auto& omega : axes) {
    // u = omega x x: each component is a linear field in x.
    std::array<std::vector<double>, 3> per_eq;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> g{};
      // (omega x x)_i = eps_ijk omega_j x_k
      const int j1 = (i + 1) % 3, k1 = (i + 2) % 3;
      g[k1] += omega[j1];
      g[j1] -= omega[k1];
      per_eq[i] = testutil::interpolate_affine_field(3, kAffine, g, 0.0);
    }
    const std::vector<double> u = pack_displacement(per_eq);
    CHECK(testutil::apply_inf_norm(a, u) <= 1e-10 * scale);
  }
}

TEST_CASE("optimized equals generic for every order on right and distorted prisms") {
  const PrismGeometry right = generate_box_mesh(1, 1, 1, 0.0)[0];
  const PrismGeometry distorted = generate_box_mesh(2, 2, 2, 0.2, 5)[9];
  const MaterialData mat{3.0, 0.25};
  for (int p = 1; p <= 7; ++p) {
    const Fixture f = make_fixture(p);
    for (const PrismGeometry& geom : {right, distorted}) {
      const ElementStiffness gen = elasticity_generic(geom, mat, f);
      const ElementStiffness opt = integrate_optimized(geom, mat, f.shapes, f.rule);
      CHECK(testutil::rel_frobenius_diff(gen.data, opt.data) <= 1e-12);
    }
  }
}

TEST_CASE("elasticity matrices are symmetric") {
  const MaterialData mat{7.0, 0.2};
  for (int p : {1, 2, 3, 4}) {
    const Fixture f = make_fixture(p);
    const ElementStiffness a = integrate_optimized(kAffine, mat, f.shapes, f.rule);
    const int dim = a.dim();
    double num = 0.0, den = 0.0;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const double d = a.data[static_cast<std::size_t>(r) * dim + c] -
                         a.data[static_cast<std::size_t>(c) * dim + r];
        num += d * d;
        den += a.data[static_cast<std::size_t>(r) * dim + c] *
               a.data[static_cast<std::size_t>(r) * dim + c];
      }
    }
    CHECK(std::sqrt(num / den) <= 1e-12);
  }
}

TEST_CASE("element matrices are positive semi-definite at low orders") {
  const MaterialData mat{4.0, 0.3};
  const PrismGeometry distorted = generate_box_mesh(2, 2, 2, 0.15, 3)[4];
  for (int p : {1, 2, 3}) {
    const Fixture f = make_fixture(p);
    const ElementStiffness a = integrate_optimized(distorted, mat, f.shapes, f.rule);
    const int dim = a.dim();
    std::vector<double> sym(a.data.size());
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        sym[static_cast<std::size_t>(r) * dim + c] =
            0.5 * (a.data[static_cast<std::size_t>(r) * dim + c] +
                   a.data[static_cast<std::size_t>(c) * dim + r]);
      }
    }
    const std::vector<double> eig = testutil::symmetric_eigenvalues(sym, dim);
    double min_e = eig[0], max_e = eig[0];
    for (double e : eig) {
      min_e = std::min(min_e, e);
      max_e = std::max(max_e, e);
    }
    CHECK(max_e > 0.0);
    CHECK(min_e >= -1e-10 * max_e);
  }
}

TEST_CASE("previous-solution hook and validation errors") {
  const Fixture f2 = make_fixture(2);
  const Fixture f3 = make_fixture(3);
  const MaterialData mat{1.0, 0.0};
  const QuadCoefficients coeffs = expand_coefficients(elasticity_tensor(mat), f2.rule);

  // Absent previous solution behaves like zeros.
  PreviousSolution old;
  old.n_eq = 3;
  old.n_shape = f2.shapes.n_shape;
  old.dofs.assign(3u * f2.shapes.n_shape, 0.0);
  const ElementStiffness with_old =
      integrate_generic(kAffine, coeffs, f2.shapes, f2.rule, &old);
  const ElementStiffness without =
      integrate_generic(kAffine, coeffs, f2.shapes, f2.rule, nullptr);
  CHECK(with_old.data == without.data);

  CHECK_THROWS_AS(integrate_generic(kAffine, coeffs, f3.shapes, f2.rule), ConfigError);
  CHECK_THROWS_AS(integrate_optimized(kAffine, mat, f3.shapes, f2.rule), ConfigError);

  PrismGeometry bad = reference_prism_geometry();
  std::swap(bad.vertices[0], bad.vertices[1]);
  CHECK_THROWS_AS(integrate_optimized(bad, mat, f2.shapes, f2.rule, 3), InvertedElementError);
}

TEST_CASE("sequential flop model and the instrumented counter") {
  CHECK(flop_count_reference(1) == 13608);
  CHECK(flop_count_reference(5) == 150028200);
  CHECK(flop_count_reference(7) == 1755758592ull);

  const MaterialData mat{1.0, 0.2};
  for (int p : {1, 2, 3}) {
    const Fixture f = make_fixture(p);
    // Geometry must not affect the instrumented count.
    std::uint64_t flops_a = 0, flops_b = 0;
    (void)integrate_optimized(kAffine, mat, f.shapes, f.rule, -1, &flops_a);
    (void)integrate_optimized(generate_box_mesh(2, 2, 2, 0.2, 5)[3], mat, f.shapes, f.rule, -1,
                              &flops_b);
    CHECK(flops_a == flop_count_reference(p));
    CHECK(flops_b == flop_count_reference(p));
  }
}

TEST_SUITE_END();
