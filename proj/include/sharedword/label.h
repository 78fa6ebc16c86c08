#pragma once

#include <string_view>

namespace sharedword {

enum class Label { kPositive, kNegative };

std::string_view to_string(Label label);
// Accepts "positive"/"negative" and "1"/"0". Throws InvalidInputError.
Label parse_label(std::string_view text);

inline Label flip(Label label) {
  return label == Label::kPositive ? Label::kNegative : Label::kPositive;
}

}  // namespace sharedword
