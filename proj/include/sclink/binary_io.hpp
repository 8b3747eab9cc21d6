#pragma once

#include "sclink/types.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace sclink::binary {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

inline void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }
inline void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }
inline void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

template <typename T>
T get(std::istream& is, const std::string& what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  require(static_cast<size_t>(is.gcount()) == sizeof v, what + ": file truncated");
  return v;
}

inline void expect_magic(std::istream& is, const std::string& magic, const std::string& what) {
  std::string buf(magic.size(), '\0');
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  require(is.gcount() == static_cast<std::streamsize>(magic.size()) && buf == magic,
          what + ": bad magic, not a " + magic + " file");
}

}  // namespace sclink::binary
