#include "cliff/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint8_t bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
  }
  return v;
}

Error io_error(const std::filesystem::path& path, const std::string& what) {
  return Error(ErrorKind::IoError, path.string() + ": " + what);
}

}  // namespace

Json grid_to_json(const Grid& g) {
  return Json{{"r", g.r}, {"shape", g.shape}, {"origin", g.origin}, {"spacing", g.spacing}};
}

Grid grid_from_json(const Json& j) {
  try {
    Grid g = make_grid(j.at("shape").get<std::vector<std::size_t>>(),
                       j.at("origin").get<std::vector<double>>(),
                       j.at("spacing").get<std::vector<double>>());
    if (j.contains("r") && j.at("r").get<int>() != g.r) {
      throw Error(ErrorKind::InvalidArgument, "grid r does not match its shape");
    }
    return g;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed grid: ") + e.what());
  }
}

Json field_header(const Field& f) {
  return Json{{"signature", signature_to_json(f.signature())},
              {"grid", grid_to_json(f.grid())},
              {"kind", std::string(to_string(f.kind()))},
              {"components", f.components()}};
}

Field empty_field_from_header(const Json& header) {
  if (!header.is_object() || !header.contains("signature") || !header.contains("grid") ||
      !header.contains("kind")) {
    throw Error(ErrorKind::InvalidArgument, "field header needs signature, grid and kind");
  }
  const Signature sig = signature_from_json(header.at("signature"));
  Grid grid = grid_from_json(header.at("grid"));
  const FieldKind kind = field_kind_from_string(header.at("kind").get<std::string>());
  Field f(std::move(grid), sig, kind);
  if (header.contains("components") && header.at("components").get<int>() != f.components()) {
    throw Error(ErrorKind::ShapeMismatch, "component count does not match the field kind");
  }
  return f;
}

Json field_to_json(const Field& f) {
  Json j = field_header(f);
  const std::size_t dim = f.signature().dimension();
  const bool complex = f.signature().is_complex();
  Json data = Json::array();
  for (std::size_t node = 0; node < f.node_count(); ++node) {
    Json comps = Json::array();
    for (int c = 0; c < f.components(); ++c) {
      const std::size_t off = node * f.node_stride() + static_cast<std::size_t>(c) * dim;
      Json coeffs = Json::array();
      for (std::size_t k = 0; k < dim; ++k) {
        if (complex) {
          coeffs.push_back(Json::array({f.real()[off + k], f.imag()[off + k]}));
        } else {
          coeffs.push_back(f.real()[off + k]);
        }
      }
      comps.push_back(std::move(coeffs));
    }
    data.push_back(std::move(comps));
  }
  j["data"] = std::move(data);
  return j;
}

Field field_from_json(const Json& j) {
  Field f = empty_field_from_header(j);
  const std::size_t dim = f.signature().dimension();
  const bool complex = f.signature().is_complex();
  try {
    const Json& data = j.at("data");
    if (!data.is_array() || data.size() != f.node_count()) {
      throw Error(ErrorKind::ShapeMismatch, "field data does not match the grid node count");
    }
    for (std::size_t node = 0; node < f.node_count(); ++node) {
      const Json& comps = data[node];
      if (!comps.is_array() || comps.size() != static_cast<std::size_t>(f.components())) {
        throw Error(ErrorKind::ShapeMismatch, "wrong component count at node " + std::to_string(node));
      }
      for (int c = 0; c < f.components(); ++c) {
        const Json& coeffs = comps[static_cast<std::size_t>(c)];
        if (!coeffs.is_array() || coeffs.size() != dim) {
          throw Error(ErrorKind::ShapeMismatch, "wrong coefficient count at node " + std::to_string(node));
        }
        const std::size_t off = node * f.node_stride() + static_cast<std::size_t>(c) * dim;
        for (std::size_t k = 0; k < dim; ++k) {
          const Json& v = coeffs[k];
          if (v.is_array()) {
            if (!complex || v.size() != 2) {
              throw Error(ErrorKind::InvalidArgument, "complex coefficient in a real field");
            }
            f.real()[off + k] = v[0].get<double>();
            f.imag()[off + k] = v[1].get<double>();
          } else {
            f.real()[off + k] = v.get<double>();
          }
        }
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed field data: ") + e.what());
  }
  return f;
}

void write_field_bin(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  const std::string header = field_header(f).dump();
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = to_little_endian(static_cast<std::uint64_t>(header.size()));
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  const bool complex = f.signature().is_complex();
  std::vector<double> buffer;
  buffer.reserve(complex ? 2 * f.real().size() : f.real().size());
  for (std::size_t i = 0; i < f.real().size(); ++i) {
    buffer.push_back(to_little_endian(f.real()[i]));
    if (complex) buffer.push_back(to_little_endian(f.imag()[i]));
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(double)));
  if (!out) throw io_error(path, "write failed");
}

Field read_field_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path, "cannot open for reading");
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw io_error(path, "bad magic");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  len = to_little_endian(len);
  if (!in || len > (1u << 24)) throw io_error(path, "bad header length");
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  if (!in) throw io_error(path, "truncated header");
  Json j;
  try {
    j = Json::parse(header);
  } catch (const Json::exception& e) {
    throw io_error(path, std::string("header is not JSON: ") + e.what());
  }
  Field f = empty_field_from_header(j);
  const bool complex = f.signature().is_complex();
  std::vector<double> buffer(complex ? 2 * f.real().size() : f.real().size());
  in.read(reinterpret_cast<char*>(buffer.data()),
          static_cast<std::streamsize>(buffer.size() * sizeof(double)));
  if (!in) throw io_error(path, "truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw io_error(path, "trailing bytes");
  for (std::size_t i = 0; i < f.real().size(); ++i) {
    if (complex) {
      f.real()[i] = to_little_endian(buffer[2 * i]);
      f.imag()[i] = to_little_endian(buffer[2 * i + 1]);
    } else {
      f.real()[i] = to_little_endian(buffer[i]);
    }
  }
  return f;
}

void write_field_json(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  out << field_to_json(f).dump() << '\n';
  if (!out) throw io_error(path, "write failed");
}

Field read_field_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw io_error(path, std::string("not JSON: ") + e.what());
  }
  return field_from_json(j);
}

void write_field(const Field& f, const std::filesystem::path& path) {
  if (path.extension() == ".bin") {
    write_field_bin(f, path);
  } else {
    write_field_json(f, path);
  }
}

Field read_field(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? read_field_bin(path) : read_field_json(path);
}

}  // namespace cliff
