#include "arnli/serialize.hpp"

#include <bit>
#include <cstring>

#include "arnli/errors.hpp"

namespace arnli::io {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void Writer::str(std::string_view s) {
  u64(s.size());
  buf_.append(s);
}

void Writer::f64s(const std::vector<double>& v) {
  u64(v.size());
  for (double d : v) f64(d);
}

void Writer::strs(const std::vector<std::string>& v) {
  u64(v.size());
  for (const auto& s : v) str(s);
}

std::string_view Reader::raw(std::size_t n) {
  if (n > remaining()) throw FormatError("model file is truncated");
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Reader::u8() { return static_cast<std::uint8_t>(raw(1)[0]); }

std::uint32_t Reader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(b[i])} << (8 * i);
  return v;
}

std::uint64_t Reader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(b[i])} << (8 * i);
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

std::string Reader::str() {
  const std::size_t n = count(1);
  return std::string(raw(n));
}

std::size_t Reader::count(std::size_t min_item_size) {
  const std::uint64_t n = u64();
  if (min_item_size > 0 && n > remaining() / min_item_size) {
    throw FormatError("model file is truncated or corrupt (length field " + std::to_string(n) + ")");
  }
  return static_cast<std::size_t>(n);
}

std::vector<double> Reader::f64s() {
  std::vector<double> v(count(8));
  for (auto& d : v) d = f64();
  return v;
}

std::vector<std::string> Reader::strs() {
  std::vector<std::string> v(count(8));
  for (auto& s : v) s = str();
  return v;
}

}  // namespace arnli::io
