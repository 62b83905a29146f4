#include "prismint/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "prismint/errors.hpp"

namespace prismint {

namespace {

constexpr char kStiffnessMagic[8] = {'P', 'R', 'I', 'S', 'T', 'I', 'F', '1'};

void put_u32_le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_f32_le(std::string& out, std::span<const float> values) {
  for (const float f : values) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32_le(out, bits);
  }
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) {
    throw IoError("short write to '" + path + "'");
  }
}

}  // namespace

void write_f32_file(const std::string& path, std::span<const float> values) {
  std::string blob;
  blob.reserve(values.size() * 4);
  append_f32_le(blob, values);
  write_file(path, blob);
}

std::vector<float> read_f32_file(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() % 4 != 0) {
    throw IoError("'" + path + "' is not a float32 payload (size not a multiple of 4)");
  }
  std::vector<float> out(blob.size() / 4);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t bits = get_u32_le(p + 4 * i);
    std::memcpy(&out[i], &bits, 4);
  }
  return out;
}

std::vector<float> flatten_shape_table(const ShapeTable& table) {
  std::vector<float> flat;
  flat.reserve(table.entry_count());
  for (const ShapePointValues& pv : table.per_point) {
    for (const double v : pv.data) {
      flat.push_back(static_cast<float>(v));
    }
  }
  return flat;
}

std::vector<float> flatten_quadrature(const QuadratureRule& rule) {
  std::vector<float> flat;
  flat.reserve(rule.points.size() * 4);
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    flat.push_back(static_cast<float>(rule.points[i].xi1));
    flat.push_back(static_cast<float>(rule.points[i].xi2));
    flat.push_back(static_cast<float>(rule.points[i].xi3));
    flat.push_back(static_cast<float>(rule.weights[i]));
  }
  return flat;
}

void save_shape_table(const std::string& path, const ShapeTable& table) {
  write_f32_file(path, flatten_shape_table(table));
}

void save_quadrature(const std::string& path, const QuadratureRule& rule) {
  write_f32_file(path, flatten_quadrature(rule));
}

void save_stiffness(const std::string& path, const ElementStiffness& a, std::int64_t element_id) {
  nlohmann::json header;
  header["p"] = a.order_p;
  header["n_eq"] = a.n_eq;
  header["n_shape"] = a.n_shape;
  header["dim"] = a.dim();
  header["element_id"] = element_id;
  const std::string header_text = header.dump();

  std::string blob(kStiffnessMagic, sizeof(kStiffnessMagic));
  put_u32_le(blob, static_cast<std::uint32_t>(header_text.size()));
  blob += header_text;
  std::vector<float> payload(a.data.begin(), a.data.end());
  append_f32_le(blob, payload);
  write_file(path, blob);
}

ElementStiffness load_stiffness(const std::string& path, std::int64_t* element_id) {
  const std::string blob = read_file(path);
  if (blob.size() < sizeof(kStiffnessMagic) + 4 ||
      std::memcmp(blob.data(), kStiffnessMagic, sizeof(kStiffnessMagic)) != 0) {
    throw IoError("'" + path + "' is not a stiffness container");
  }
  const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data());
  const std::uint32_t header_len = get_u32_le(p + sizeof(kStiffnessMagic));
  const std::size_t header_off = sizeof(kStiffnessMagic) + 4;
  if (blob.size() < header_off + header_len) {
    throw IoError("'" + path + "': truncated header");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.substr(header_off, header_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("'" + path + "': bad header: " + e.what());
  }
  ElementStiffness a;
  a.order_p = header.at("p").get<int>();
  a.n_eq = header.at("n_eq").get<int>();
  a.n_shape = header.at("n_shape").get<int>();
  if (element_id) {
    *element_id = header.value("element_id", std::int64_t{-1});
  }
  const std::size_t n = static_cast<std::size_t>(a.dim()) * a.dim();
  const std::size_t payload_off = header_off + header_len;
  if (blob.size() != payload_off + n * 4) {
    throw IoError("'" + path + "': payload size mismatch");
  }
  a.data.resize(n);
  const unsigned char* q = p + payload_off;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bits = get_u32_le(q + 4 * i);
    float f;
    std::memcpy(&f, &bits, 4);
    a.data[i] = static_cast<double>(f);
  }
  return a;
}

std::string mesh_to_json(std::span<const PrismGeometry> mesh) {
  // Vertices are deduplicated by exact coordinates so shared mesh nodes come
  // back shared.
  std::map<std::array<double, 3>, std::size_t> seen;
  nlohmann::json vertices = nlohmann::json::array();
  nlohmann::json elements = nlohmann::json::array();
  for (const PrismGeometry& g : mesh) {
    nlohmann::json conn = nlohmann::json::array();
    for (const auto& v : g.vertices) {
      auto [it, inserted] = seen.try_emplace(v, seen.size());
      if (inserted) {
        vertices.push_back({v[0], v[1], v[2]});
      }
      conn.push_back(it->second);
    }
    elements.push_back(conn);
  }
  nlohmann::json j;
  j["format"] = "prismint-mesh";
  j["version"] = 1;
  j["vertices"] = vertices;
  j["elements"] = elements;
  return j.dump();
}

std::vector<PrismGeometry> mesh_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("mesh: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "prismint-mesh") {
    throw IoError("mesh: missing or wrong format tag");
  }
  const auto& vertices = j.at("vertices");
  std::vector<PrismGeometry> mesh;
  for (const auto& conn : j.at("elements")) {
    if (conn.size() != 6) {
      throw IoError("mesh: prism connectivity must list 6 vertices");
    }
    PrismGeometry g;
    for (int v = 0; v < 6; ++v) {
      const std::size_t idx = conn[v].get<std::size_t>();
      if (idx >= vertices.size()) {
        throw IoError("mesh: vertex index out of range");
      }
      g.vertices[v] = {vertices[idx][0].get<double>(), vertices[idx][1].get<double>(),
                       vertices[idx][2].get<double>()};
    }
    mesh.push_back(g);
  }
  return mesh;
}

void save_mesh(const std::string& path, std::span<const PrismGeometry> mesh) {
  write_file(path, mesh_to_json(mesh));
}

std::vector<PrismGeometry> load_mesh(const std::string& path) {
  return mesh_from_json(read_file(path));
}

}  // namespace prismint
