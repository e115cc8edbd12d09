#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osteomorph/pain.hpp"

namespace osteomorph {

enum class Split { kTrain, kVal, kTest };

const char* to_string(Split split);
std::optional<Split> parse_split(std::string_view text);

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path gt_mask;
  std::optional<std::filesystem::path> pred_mask;
  std::optional<std::filesystem::path> prob_map;
  Split split = Split::kTrain;
  // Present only when both pain columns are filled; subject_id == image_id.
  std::optional<PainRecord> pain;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  // Relative paths in entries resolve against this directory.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : base_dir / p;
  }
  std::vector<const ManifestEntry*> in_split(Split split) const;
};

inline constexpr std::string_view kManifestHeader =
    "image_id,gt_mask,pred_mask,prob_map,split,baseline_pain,followup_pain";

// Blank lines and lines starting with '#' are ignored. Errors cite the
// 1-based line number.
DatasetManifest parse_manifest(std::istream& in, std::filesystem::path base_dir = {});
DatasetManifest load_manifest(const std::filesystem::path& path);

void write_manifest(const DatasetManifest& manifest, std::ostream& out);

}  // namespace osteomorph
