#pragma once

#include <string>
#include <string_view>

// UTF-8 helpers and Unicode character classes (backed by ICU).
namespace arnli::utf8 {

std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
std::string encode(char32_t c);

// Number of code points.
std::size_t length(std::string_view s);

bool is_space(char32_t c);

// Unicode general categories P* and S*, plus the Arabic marks ، ؛ ؟.
bool is_punct_or_symbol(char32_t c);

bool is_digit(char32_t c);

std::string_view trim(std::string_view s);

}  // namespace arnli::utf8
