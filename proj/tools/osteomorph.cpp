// osteomorph: bone-mask morphometry, segmentation scoring and pain-status
// classification from the command line.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "osteomorph/error.hpp"
#include "osteomorph/mask_io.hpp"
#include "osteomorph/report.hpp"
#include "osteomorph/run_config.hpp"
#include "osteomorph/synth.hpp"

namespace {

using osteomorph::Settings;

struct PipelineFlags {
  std::string config_file;
  Settings cli;
};

// Registers the shared flags; only flags given on the command line land in
// `flags.cli`, so config-file values survive where no flag overrides them.
void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
  cmd->add_option("--config", flags.config_file, "key=value config file");
  for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"manifest", "dataset manifest CSV"},
           {"out", "output directory"},
           {"bones", "comma list of femur,tibia"},
           {"agg", "macro or micro"},
           {"k", "fixed KNN neighbour count (default: chosen on val)"},
           {"split", "all, train, val or test"},
           {"resize", "WxH analysis resolution or none (default 640x640)"},
           {"model", "name of the prediction source in reports"},
           {"jobs", "worker threads for per-image processing"}}) {
    const std::string key = name;
    cmd->add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags.cli[key] = v; }, help);
  }
  cmd->add_flag_function(
      "--plots", [&flags](std::int64_t) { flags.cli["plots"] = "true"; }, "emit SVG plots");
}

int run_pipeline(const std::string& name, const PipelineFlags& flags) {
  try {
    Settings settings;
    if (!flags.config_file.empty()) settings = osteomorph::read_settings_file(flags.config_file);
    settings = osteomorph::merge_settings(std::move(settings), flags.cli);
    const auto config = osteomorph::config_from_settings(settings);
    return osteomorph::run_command(name, config, std::cerr);
  } catch (const osteomorph::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return osteomorph::kExitInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bone-mask morphometry, segmentation scoring and pain classification"};
  app.require_subcommand(1);

  PipelineFlags morph_flags, eval_flags, classify_flags;
  auto* morph = app.add_subcommand("morph", "shape features and pain-group statistics");
  add_pipeline_flags(morph, morph_flags);
  auto* eval = app.add_subcommand("eval", "segmentation metrics against ground truth");
  add_pipeline_flags(eval, eval_flags);
  auto* classify = app.add_subcommand("classify", "KNN pain-status classification");
  add_pipeline_flags(classify, classify_flags);

  auto* synth = app.add_subcommand("synth", "paint a synthetic mask or a demo dataset");
  std::string out;
  std::string shape = "disk";
  std::vector<double> dims{100.0};
  double angle = 0.0;
  std::vector<double> center;
  int label = osteomorph::kFemur;
  std::string canvas = "640x640";
  bool dataset = false;
  int per_category = 4;
  std::uint64_t seed = 7;
  synth->add_option("--out", out, "mask file (.png/.pgm) or dataset directory")->required();
  synth->add_option("--shape", shape, "disk, ellipse or rect");
  synth->add_option("--dims", dims, "radius | semi-axes a,b | sides w,h")->delimiter(',');
  synth->add_option("--angle", angle, "ellipse rotation in degrees");
  synth->add_option("--center", center, "x,y (default: canvas center)")->delimiter(',');
  synth->add_option("--label", label, "label to paint (1 femur, 2 tibia)");
  synth->add_option("--canvas", canvas, "WxH (dataset: W only is used)");
  synth->add_flag("--dataset", dataset, "write the knee-like demo dataset and manifest");
  synth->add_option("--per-category", per_category, "demo dataset images per pain category");
  synth->add_option("--seed", seed, "demo dataset random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? osteomorph::kExitSuccess : osteomorph::kExitInputError;
  }

  if (morph->parsed()) return run_pipeline("morph", morph_flags);
  if (eval->parsed()) return run_pipeline("eval", eval_flags);
  if (classify->parsed()) return run_pipeline("classify", classify_flags);

  try {
    int cw = 0, ch = 0;
    if (std::sscanf(canvas.c_str(), "%dx%d", &cw, &ch) != 2) {
      throw osteomorph::Error(osteomorph::ErrorCode::kInvalidArgument,
                              fmt::format("--canvas '{}' is not WxH", canvas));
    }
    if (dataset) {
      osteomorph::DemoDatasetOptions options;
      options.images_per_category = per_category;
      options.canvas = cw;
      options.seed = seed;
      std::cerr << "wrote " << osteomorph::write_demo_dataset(out, options).string() << '\n';
      return osteomorph::kExitSuccess;
    }
    osteomorph::SyntheticSpec spec;
    const auto kind = osteomorph::parse_shape_kind(shape);
    if (!kind) {
      throw osteomorph::Error(osteomorph::ErrorCode::kInvalidArgument,
                              fmt::format("unknown shape '{}'", shape));
    }
    spec.shape = *kind;
    if (dims.empty() || dims.size() > 2) {
      throw osteomorph::Error(osteomorph::ErrorCode::kInvalidArgument,
                              "--dims takes one or two values");
    }
    spec.dim_x = dims[0];
    spec.dim_y = dims.size() > 1 ? dims[1] : dims[0];
    spec.angle_deg = angle;
    if (!center.empty()) {
      if (center.size() != 2) {
        throw osteomorph::Error(osteomorph::ErrorCode::kInvalidArgument,
                                "--center takes x,y");
      }
      spec.center = osteomorph::Point2{center[0], center[1]};
    }
    if (label < 0 || label > 255) {
      throw osteomorph::Error(osteomorph::ErrorCode::kInvalidArgument,
                              fmt::format("--label {} out of range", label));
    }
    spec.label = static_cast<osteomorph::Label>(label);
    spec.canvas_w = cw;
    spec.canvas_h = ch;
    osteomorph::write_mask(osteomorph::render_shape(spec), out);
    std::cerr << "wrote " << out << '\n';
    return osteomorph::kExitSuccess;
  } catch (const osteomorph::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return osteomorph::kExitInputError;
  }
}
