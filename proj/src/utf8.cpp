#include "arnli/utf8.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace arnli::utf8 {

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    // Ill-formed sequences decode to U+FFFD rather than failing.
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(char32_t c) {
  std::string out;
  uint8_t buf[4];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, 4, static_cast<UChar32>(c), error);
  if (error) return "\xEF\xBF\xBD";
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t c : s) out += encode(c);
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char b : s) {
    if ((b & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_punct_or_symbol(char32_t c) {
  switch (c) {
    case U'،':  // ،
    case U'؛':  // ؛
    case U'؟':  // ؟
      return true;
    default:
      break;
  }
  const uint32_t mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

std::string_view trim(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t len = static_cast<int32_t>(s.size());
  int32_t begin = -1;
  int32_t end = 0;
  int32_t i = 0;
  while (i < len) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c >= 0 && is_space(static_cast<char32_t>(c))) continue;
    if (begin < 0) begin = start;
    end = i;
  }
  if (begin < 0) return s.substr(0, 0);
  return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
}

}  // namespace arnli::utf8
