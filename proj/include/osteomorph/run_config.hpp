#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osteomorph/label_mask.hpp"
#include "osteomorph/manifest.hpp"
#include "osteomorph/seg_metrics.hpp"

namespace osteomorph {

struct RunConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path output_dir;
  std::vector<Label> bones{kFemur, kTibia};
  Aggregation aggregation = Aggregation::kMacro;
  std::optional<int> knn_k;
  // 0 x 0 keeps native resolution.
  int resize_w = 640;
  int resize_h = 640;
  bool emit_plots = false;
  std::optional<Split> split;  // nullopt selects every entry
  std::string model = "pred";
  int jobs = 1;

  // Canonical key=value text of every setting that can change output
  // content; output_dir and jobs are excluded.
  std::string canonical() const;
  // 16 hex digits of FNV-1a 64 over canonical().
  std::string hash() const;
};

// Keys shared by the config file and the command-line flags.
// manifest, out, bones, agg, k, plots, split, resize, model, jobs
using Settings = std::map<std::string, std::string>;

// Plain key=value lines; blank lines and '#' comments are ignored.
Settings read_settings_file(const std::filesystem::path& path);

// Later maps win: merge_settings(defaults_file, cli) gives CLI precedence.
Settings merge_settings(Settings base, const Settings& overrides);

// Throws kInvalidArgument for unknown keys or bad values.
RunConfig config_from_settings(const Settings& settings);

}  // namespace osteomorph
