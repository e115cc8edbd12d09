#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace osteomorph {

enum class PainCategory { kWorsened = 0, kImproved = 1, kNoChange = 2 };

inline constexpr std::array<PainCategory, 3> kAllPainCategories = {
    PainCategory::kWorsened, PainCategory::kImproved, PainCategory::kNoChange};

// A change of at least two points in either direction counts.
inline constexpr int kPainChangeThreshold = 2;

PainCategory categorize_pain(int baseline, int followup) noexcept;

const char* to_string(PainCategory category);
std::optional<PainCategory> parse_pain_category(std::string_view text);

struct PainRecord {
  std::string subject_id;
  int baseline_pain = 0;
  int followup_pain = 0;

  PainCategory category() const noexcept {
    return categorize_pain(baseline_pain, followup_pain);
  }
};

}  // namespace osteomorph
