#pragma once

#include <filesystem>
#include <string_view>

#include "cliff/field.hpp"
#include "cliff/json_io.hpp"

namespace cliff {

// Header shared by both containers:
// {"signature":{...},"grid":{"r","shape","origin","spacing"},"kind","components"}
Json field_header(const Field& f);
Field empty_field_from_header(const Json& header);

Json grid_to_json(const Grid& g);
Grid grid_from_json(const Json& j);

// .field.json: header members plus "data": [node][component][blade], each
// coefficient a number (real) or [re, im].
Json field_to_json(const Field& f);
Field field_from_json(const Json& j);

// .field.bin: "CLFIELD1", uint64 LE header length, header JSON, then LE
// float64 coefficients in node, component, blade order (complex as re, im).
void write_field_bin(const Field& f, const std::filesystem::path& path);
Field read_field_bin(const std::filesystem::path& path);

void write_field_json(const Field& f, const std::filesystem::path& path);
Field read_field_json(const std::filesystem::path& path);

// Dispatch on ".bin" / ".json" extension.
void write_field(const Field& f, const std::filesystem::path& path);
Field read_field(const std::filesystem::path& path);

}  // namespace cliff
