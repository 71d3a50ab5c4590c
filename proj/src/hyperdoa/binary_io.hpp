#pragma once

// File container shared by datasets and models: one line of UTF-8 JSON
// (the header) terminated by '\n', followed by a little-endian float64
// payload whose byte length the header records.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "hyperdoa/error.hpp"
#include "json.hpp"

namespace hyperdoa::io {

inline void append_le_u64(std::string& out, std::uint64_t bits) {
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  out.append(bytes, 8);
}

inline void append_le(std::string& out, double v) { append_le_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void append_le(std::string& out, std::span<const double> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(double));
  } else {
    for (double v : values) append_le(out, v);
  }
}

inline std::uint64_t read_le_u64(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return bits;
}

inline double read_le_double(const char* p) { return std::bit_cast<double>(read_le_u64(p)); }

inline void read_le(const char* p, std::span<double> out) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data(), p, out.size() * sizeof(double));
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = read_le_double(p + 8 * i);
  }
}

struct Container {
  nlohmann::ordered_json header;
  std::string payload;
};

inline void write_container(const std::string& path, const nlohmann::ordered_json& header, const std::string& payload) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const std::string line = header.dump();
  os.write(line.data(), static_cast<std::streamsize>(line.size()));
  os.put('\n');
  os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!os) throw IoError("write to '" + path + "' failed");
}

// Reads and validates the container: format tag, version, payload length.
inline Container read_container(const std::string& path, const std::string& format, int version) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw FormatError("'" + path + "': missing header");
  Container c;
  try {
    c.header = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + path + "': malformed header: " + e.what());
  }
  if (!c.header.is_object() || c.header.value("format", std::string{}) != format)
    throw FormatError("'" + path + "': not a " + format + " file");
  const int got = c.header.value("format_version", -1);
  if (got != version)
    throw VersionError("'" + path + "': format_version " + std::to_string(got) + ", expected " +
                       std::to_string(version));
  const auto expected = c.header.value("payload_bytes", std::uint64_t{0});
  c.payload.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  if (c.payload.size() != expected)
    throw FormatError("'" + path + "': payload is " + std::to_string(c.payload.size()) + " bytes, header says " +
                      std::to_string(expected) + " (truncated or corrupt)");
  return c;
}

}  // namespace hyperdoa::io
