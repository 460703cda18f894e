#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Little-endian binary encoding primitives.
namespace arnli::io {

std::uint64_t fnv1a64(std::string_view bytes);

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v);
  void str(std::string_view s);  // u64 length + bytes
  void raw(std::string_view s) { buf_.append(s); }
  void f64s(const std::vector<double>& v);
  void strs(const std::vector<std::string>& v);

  const std::string& bytes() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Every read past the end throws FormatError.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : data_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64();
  std::string str();
  std::string_view raw(std::size_t n);
  std::vector<double> f64s();
  std::vector<std::string> strs();
  // A count that cannot fit in the remaining bytes at `min_item_size` each.
  std::size_t count(std::size_t min_item_size);

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace arnli::io
