#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "vardiff/errors.hpp"

namespace vardiff::detail {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

template <typename T>
void write_le(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& what) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw FormatError(what + ": truncated header");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

inline void write_f32_payload(std::ostream& out, std::span<const float> values) {
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
}

inline void read_f32_payload(std::istream& in, std::span<float> values,
                             const std::string& what) {
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(values.size_bytes()))) {
    throw FormatError(what + ": payload shorter than declared dimensions");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(what + ": trailing bytes after payload");
  }
}

}  // namespace vardiff::detail
