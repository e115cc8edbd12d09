#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "osteomorph/run_config.hpp"

namespace osteomorph {

// Process exit statuses shared by every batch command.
enum ExitStatus : int { kExitSuccess = 0, kExitPartial = 1, kExitInputError = 2 };

struct RunResult {
  int exit_code = kExitSuccess;
  std::vector<std::string> warnings;  // one per skipped image or bone
  std::vector<std::filesystem::path> outputs;
};

// Per-image ShapeFeatures CSV, per-category GroupStats CSV and, with
// emit_plots, one mean +- std SVG per metric and bone.
RunResult cmd_morph(const RunConfig& config, std::ostream& log);

// Per-image and aggregated segmentation metrics per bone, plus per-image
// cross-entropy for entries with a probability map.
RunResult cmd_eval(const RunConfig& config, std::ostream& log);

// KNN pain-status classification: fit on train, choose k on val (unless
// fixed), report on test for ground-truth features and, where prediction
// masks exist, for predicted-mask features.
RunResult cmd_classify(const RunConfig& config, std::ostream& log);

// Runs a command by name ("morph", "eval", "classify"), mapping Error to
// kExitInputError after logging it.
int run_command(const std::string& name, const RunConfig& config, std::ostream& log);

// First line of every CSV output.
std::string csv_header_comment(const std::string& command, const RunConfig& config);

}  // namespace osteomorph
