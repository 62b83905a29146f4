#include "prismint/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <string>

#include "prismint/errors.hpp"

namespace prismint {

PrismGeometry reference_prism_geometry() {
  PrismGeometry g;
  g.vertices = {{{0.0, 0.0, -1.0},
                 {1.0, 0.0, -1.0},
                 {0.0, 1.0, -1.0},
                 {0.0, 0.0, 1.0},
                 {1.0, 0.0, 1.0},
                 {0.0, 1.0, 1.0}}};
  return g;
}

std::array<double, 6> geometry_shape_values(const RefCoords& xi) {
  const double l0 = 1.0 - xi.xi1 - xi.xi2;
  const double l1 = xi.xi1;
  const double l2 = xi.xi2;
  const double zm = 0.5 * (1.0 - xi.xi3);
  const double zp = 0.5 * (1.0 + xi.xi3);
  return {l0 * zm, l1 * zm, l2 * zm, l0 * zp, l1 * zp, l2 * zp};
}

std::array<std::array<double, 6>, 3> geometry_shape_derivs(const RefCoords& xi) {
  const double l0 = 1.0 - xi.xi1 - xi.xi2;
  const double l1 = xi.xi1;
  const double l2 = xi.xi2;
  const double zm = 0.5 * (1.0 - xi.xi3);
  const double zp = 0.5 * (1.0 + xi.xi3);
  std::array<std::array<double, 6>, 3> d{};
  d[0] = {-zm, zm, 0.0, -zp, zp, 0.0};
  d[1] = {-zm, 0.0, zm, -zp, 0.0, zp};
  d[2] = {-0.5 * l0, -0.5 * l1, -0.5 * l2, 0.5 * l0, 0.5 * l1, 0.5 * l2};
  return d;
}

std::array<std::array<double, 3>, 3> jacobian_matrix(const PrismGeometry& geom, const RefCoords& xi) {
  const auto dn = geometry_shape_derivs(xi);
  std::array<std::array<double, 3>, 3> jac{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int v = 0; v < 6; ++v) {
        sum += dn[j][v] * geom.vertices[v][i];
      }
      jac[i][j] = sum;
    }
  }
  return jac;
}

JacobianTerms jacobian_terms(const PrismGeometry& geom, const RefCoords& xi, std::int64_t element_id) {
  const auto j = jacobian_matrix(geom, xi);
  // Closed-form 3x3 inversion via the signed cofactors.
  const double c00 = j[1][1] * j[2][2] - j[1][2] * j[2][1];
  const double c01 = j[1][2] * j[2][0] - j[1][0] * j[2][2];
  const double c02 = j[1][0] * j[2][1] - j[1][1] * j[2][0];
  const double det = j[0][0] * c00 + j[0][1] * c01 + j[0][2] * c02;
  if (!(det > 0.0)) {
    throw InvertedElementError(element_id, xi.xi1, xi.xi2, xi.xi3, det);
  }
  const double c10 = j[0][2] * j[2][1] - j[0][1] * j[2][2];
  const double c11 = j[0][0] * j[2][2] - j[0][2] * j[2][0];
  const double c12 = j[0][1] * j[2][0] - j[0][0] * j[2][1];
  const double c20 = j[0][1] * j[1][2] - j[0][2] * j[1][1];
  const double c21 = j[0][2] * j[1][0] - j[0][0] * j[1][2];
  const double c22 = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const double inv_det = 1.0 / det;
  JacobianTerms out;
  out.det = det;
  out.inv = {{{c00 * inv_det, c10 * inv_det, c20 * inv_det},
              {c01 * inv_det, c11 * inv_det, c21 * inv_det},
              {c02 * inv_det, c12 * inv_det, c22 * inv_det}}};
  return out;
}

PhysicalShapeValues physical_derivatives(const ShapePointValues& ref_vals, const JacobianTerms& jt) {
  PhysicalShapeValues out;
  out.n_shape = ref_vals.n_shape;
  out.data.resize(ref_vals.data.size());
  for (int dof = 0; dof < ref_vals.n_shape; ++dof) {
    out.value(0, dof) = ref_vals.value(0, dof);
  }
  for (int i = 0; i < 3; ++i) {
    for (int dof = 0; dof < ref_vals.n_shape; ++dof) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) {
        sum += ref_vals.value(k + 1, dof) * jt.inv[k][i];
      }
      out.value(i + 1, dof) = sum;
    }
  }
  return out;
}

std::vector<double> precompute_all_jacobian_terms(std::span<const PrismGeometry> geoms,
                                                  const QuadratureRule& rule) {
  std::vector<double> buffer;
  buffer.resize(geoms.size() * rule.points.size() * kJacobianRecordSize);
  std::size_t offset = 0;
  for (std::size_t e = 0; e < geoms.size(); ++e) {
    for (const RefCoords& xi : rule.points) {
      const JacobianTerms jt = jacobian_terms(geoms[e], xi, static_cast<std::int64_t>(e));
      buffer[offset++] = jt.det;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          buffer[offset++] = jt.inv[r][c];
        }
      }
    }
  }
  return buffer;
}

namespace {

// Portable uniform double in [-0.5, 0.5] from the raw engine output, so the
// generated meshes are identical across standard library implementations.
double signed_unit(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u - 0.5;
}

}  // namespace

std::vector<PrismGeometry> generate_box_mesh(int nx, int ny, int nz, double distortion,
                                             std::uint64_t seed) {
  if (nx < 1 || ny < 1 || nz < 1) {
    throw DomainError("generate_box_mesh: all dimensions must be >= 1");
  }
  if (distortion < 0.0 || distortion >= 0.3) {
    throw DomainError("generate_box_mesh: distortion must lie in [0, 0.3)");
  }
  const double hx = 1.0 / nx, hy = 1.0 / ny, hz = 1.0 / nz;

  auto node_index = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * (ny + 1) + j) * (nx + 1) + i;
  };
  std::vector<std::array<double, 3>> nodes((nx + 1) * static_cast<std::size_t>(ny + 1) * (nz + 1));
  std::mt19937_64 rng(seed);
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        std::array<double, 3> p = {i * hx, j * hy, k * hz};
        // Interior nodes only; boundary nodes stay put so the box (and its
        // volume) is preserved exactly. The RNG is advanced for every node to
        // keep node positions independent of the interior/boundary pattern.
        const double u0 = signed_unit(rng);
        const double u1 = signed_unit(rng);
        const double u2 = signed_unit(rng);
        if (distortion > 0.0 && i > 0 && i < nx && j > 0 && j < ny && k > 0 && k < nz) {
          p[0] += distortion * hx * u0;
          p[1] += distortion * hy * u1;
          p[2] += distortion * hz * u2;
        }
        nodes[node_index(i, j, k)] = p;
      }
    }
  }

  std::vector<PrismGeometry> mesh;
  mesh.reserve(2u * nx * ny * static_cast<std::size_t>(nz));
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const auto n00 = nodes[node_index(i, j, k)];
        const auto n10 = nodes[node_index(i + 1, j, k)];
        const auto n01 = nodes[node_index(i, j + 1, k)];
        const auto n11 = nodes[node_index(i + 1, j + 1, k)];
        const auto m00 = nodes[node_index(i, j, k + 1)];
        const auto m10 = nodes[node_index(i + 1, j, k + 1)];
        const auto m01 = nodes[node_index(i, j + 1, k + 1)];
        const auto m11 = nodes[node_index(i + 1, j + 1, k + 1)];
        PrismGeometry a;
        a.vertices = {n00, n10, n11, m00, m10, m11};
        PrismGeometry b;
        b.vertices = {n00, n11, n01, m00, m11, m01};
        mesh.push_back(a);
        mesh.push_back(b);
      }
    }
  }

  // Validate against the densest supported rule; bounded distortion should
  // never trip this.
  const QuadratureRule rule = prism_quadrature(kMaxOrder);
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    for (const RefCoords& xi : rule.points) {
      (void)jacobian_terms(mesh[e], xi, static_cast<std::int64_t>(e));
    }
  }
  return mesh;
}

}  // namespace prismint
