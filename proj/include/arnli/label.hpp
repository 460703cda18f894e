#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace arnli {

// The enumerator order is the canonical label order used for tie-breaking
// everywhere: Contradiction < Entailment < Neutral.
enum class Label : std::uint8_t { Contradiction = 0, Entailment = 1, Neutral = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::Contradiction, Label::Entailment, Label::Neutral};

inline constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }
inline constexpr Label label_at(std::size_t i) { return static_cast<Label>(i); }

std::string_view to_string(Label l);

// Case-insensitive match against the English label names.
std::optional<Label> parse_label(std::string_view s);

}  // namespace arnli
