#include "arnli/label.hpp"

#include <algorithm>
#include <cctype>

namespace arnli {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::Contradiction:
      return "Contradiction";
    case Label::Entailment:
      return "Entailment";
    case Label::Neutral:
      return "Neutral";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Label l : kAllLabels) {
    std::string name(to_string(l));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == name) return l;
  }
  return std::nullopt;
}

}  // namespace arnli
