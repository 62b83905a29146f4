#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "prismint/coefficients.hpp"
#include "prismint/errors.hpp"
#include "prismint/flop_costs.hpp"

using namespace prismint;

TEST_SUITE_BEGIN("coefficients");

TEST_CASE("Lame parameters from closed forms") {
  {
    const LameParameters lame = lame_parameters({1.0, 0.0});
    CHECK(lame.lambda == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lame.mu == doctest::Approx(0.5).epsilon(1e-15));
  }
  {
    const LameParameters lame = lame_parameters({2.5, 0.25});
    CHECK(lame.lambda == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lame.mu == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(lame_parameters({1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(lame_parameters({-1.0, 0.2}), DomainError);
  CHECK_THROWS_AS(lame_parameters({1.0, -1.0}), DomainError);
}

TEST_CASE("elasticity tensor entries and sparsity") {
  const CoefficientTensor t = elasticity_tensor({1.0, 0.0});
  CHECK(t.n_eq == 3);
  // (i_E, j_E, i_D, j_D) = (0, 0, 1, 1) carries lambda + 2 mu.
  CHECK(t.at(0, 0, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  int nonzeros = 0;
  for (int ie = 0; ie < 3; ++ie) {
    for (int je = 0; je < 3; ++je) {
      for (int id = 0; id < 4; ++id) {
        for (int jd = 0; jd < 4; ++jd) {
          const double v = t.at(ie, je, id, jd);
          if (id == 0 || jd == 0) {
            CHECK(v == 0.0);
          }
          if (v != 0.0) ++nonzeros;
          CHECK((t.nonzero[t.index(ie, je, id, jd)] != 0) == (v != 0.0));
        }
      }
    }
  }
  CHECK(nonzeros == 21);
}

TEST_CASE("major symmetry, exhaustively") {
  const CoefficientTensor t = elasticity_tensor({71.0, 0.31});
  for (int ie = 0; ie < 3; ++ie) {
    for (int je = 0; je < 3; ++je) {
      for (int id = 0; id < 4; ++id) {
        for (int jd = 0; jd < 4; ++jd) {
          CHECK(t.at(ie, je, id, jd) == t.at(je, ie, jd, id));
        }
      }
    }
  }
}

TEST_CASE("block-update term table matches the assembled tensor") {
  const MaterialData mat{3.7, 0.21};
  const LameParameters lame = lame_parameters(mat);
  const CoefficientTensor t = elasticity_tensor(mat);
  const double values[3] = {lame.lambda, lame.mu, (lame.lambda + lame.mu) + lame.mu};

  int seen = 0;
  for (const flops::BlockTerm& term : flops::kElasticityBlockTerms) {
    CHECK(t.at(term.row, term.col, term.du + 1, term.dv + 1) ==
          doctest::Approx(values[term.coeff]).epsilon(1e-15));
    ++seen;
  }
  CHECK(seen == 21);
}

TEST_CASE("coefficients_at_point is the identity for the constant model") {
  const CoefficientTensor base = elasticity_tensor({2.0, 0.3});
  const CoefficientTensor out = coefficients_at_point(base, nullptr, {0.1, 0.2, 0.5});
  CHECK(out.entries == base.entries);

  PreviousSolution old;
  old.n_eq = 3;
  old.n_shape = 6;
  old.dofs.assign(18, 0.0);
  const CoefficientTensor with_old = coefficients_at_point(base, &old, {0.1, 0.2, 0.5});
  CHECK(with_old.entries == base.entries);

  const QuadratureRule rule = prism_quadrature(2);
  const QuadCoefficients q = expand_coefficients(base, rule);
  REQUIRE(q.per_point.size() == static_cast<std::size_t>(rule.size()));
  for (const CoefficientTensor& c : q.per_point) {
    CHECK(c.entries == base.entries);
  }
}

TEST_SUITE_END();
