#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prismint/geometry.hpp"
#include "prismint/integrate_ref.hpp"
#include "prismint/reference_element.hpp"

namespace prismint {

/// Raw little-endian float32 payloads.
void write_f32_file(const std::string& path, std::span<const float> values);
std::vector<float> read_f32_file(const std::string& path);

/// Shape table flattened to [i_Q][i_D][i_DOF] with i_DOF fastest-varying.
std::vector<float> flatten_shape_table(const ShapeTable& table);

/// Quadrature rule flattened to [i_Q][xi1, xi2, xi3, w].
std::vector<float> flatten_quadrature(const QuadratureRule& rule);

void save_shape_table(const std::string& path, const ShapeTable& table);
void save_quadrature(const std::string& path, const QuadratureRule& rule);

/// Stiffness-matrix container: an 8-byte magic, a 4-byte little-endian JSON
/// header length, the JSON header (p, n_eq, element id, dim), then the dense
/// payload as little-endian float32 in the canonical layout.
void save_stiffness(const std::string& path, const ElementStiffness& a, std::int64_t element_id);
ElementStiffness load_stiffness(const std::string& path, std::int64_t* element_id = nullptr);

/// Mesh as JSON: {"vertices": [[x,y,z],...], "elements": [[v0..v5],...]}.
std::string mesh_to_json(std::span<const PrismGeometry> mesh);
std::vector<PrismGeometry> mesh_from_json(const std::string& json_text);
void save_mesh(const std::string& path, std::span<const PrismGeometry> mesh);
std::vector<PrismGeometry> load_mesh(const std::string& path);

}  // namespace prismint
