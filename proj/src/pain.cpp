#include "osteomorph/pain.hpp"

namespace osteomorph {

PainCategory categorize_pain(int baseline, int followup) noexcept {
  const long delta = static_cast<long>(followup) - static_cast<long>(baseline);
  if (delta >= kPainChangeThreshold) return PainCategory::kWorsened;
  if (delta <= -kPainChangeThreshold) return PainCategory::kImproved;
  return PainCategory::kNoChange;
}

const char* to_string(PainCategory category) {
  switch (category) {
    case PainCategory::kWorsened: return "Worsened";
    case PainCategory::kImproved: return "Improved";
    case PainCategory::kNoChange: return "NoChange";
  }
  return "?";
}

std::optional<PainCategory> parse_pain_category(std::string_view text) {
  for (auto c : kAllPainCategories) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

}  // namespace osteomorph
