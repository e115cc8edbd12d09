#include "osteomorph/report.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>
#include <variant>

#include <fmt/core.h>

#include <json.hpp>

#include "osteomorph/classifier.hpp"
#include "osteomorph/error.hpp"
#include "osteomorph/manifest.hpp"
#include "osteomorph/mask_io.hpp"
#include "osteomorph/morphometry.hpp"
#include "osteomorph/probability_map.hpp"
#include "osteomorph/seg_metrics.hpp"
#include "osteomorph/svg_chart.hpp"

namespace osteomorph {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

template <class T>
using Outcome = std::variant<T, std::string>;  // value or failure reason

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results keep index
// order, so output does not depend on scheduling.
template <class T>
std::vector<Outcome<T>> map_indexed(std::size_t n, int jobs,
                                    const std::function<T(std::size_t)>& fn) {
  std::vector<Outcome<T>> results(n, Outcome<T>(std::string("not run")));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (const std::exception& e) {
        results[i] = std::string(e.what());
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  }
  return results;
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo,
                fmt::format("output directory {} is not writable: {}", dir.string(), ec.message()));
  }
}

void write_file(const fs::path& path, const std::string& content, RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  result.outputs.push_back(path);
}

std::vector<const ManifestEntry*> select_entries(const DatasetManifest& manifest,
                                                 const RunConfig& config) {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : manifest.entries) {
    if (!config.split || e.split == *config.split) out.push_back(&e);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                fmt::format("no images selected (split {})",
                            config.split ? to_string(*config.split) : "all"));
  }
  return out;
}

LabelMask load_for_analysis(const fs::path& path, const RunConfig& config) {
  auto mask = load_mask(path);
  if (config.resize_w > 0 && config.resize_h > 0) {
    return resize_nearest(mask, config.resize_w, config.resize_h);
  }
  return mask;
}

void warn(RunResult& result, std::ostream& log, std::string message) {
  log << "warning: " << message << '\n';
  result.warnings.push_back(std::move(message));
}

std::string f6(double v) { return fmt::format("{:.6f}", v); }
std::string f2(double v) { return fmt::format("{:.2f}", v); }

// ---------------------------------------------------------------- morph

struct BoneOutcome {
  Label bone;
  std::optional<ShapeFeatures> features;
  std::string error;
};

}  // namespace

std::string csv_header_comment(const std::string& command, const RunConfig& config) {
  return fmt::format("# osteomorph {} config={}", command, config.hash());
}

RunResult cmd_morph(const RunConfig& config, std::ostream& log) {
  const auto manifest = load_manifest(config.manifest_path);
  const auto entries = select_entries(manifest, config);
  prepare_output_dir(config.output_dir);
  RunResult result;

  const auto outcomes = map_indexed<std::vector<BoneOutcome>>(
      entries.size(), config.jobs, [&](std::size_t i) {
        const auto mask = load_for_analysis(manifest.resolve(entries[i]->gt_mask), config);
        std::vector<BoneOutcome> bones;
        for (Label bone : config.bones) {
          BoneOutcome o{bone, std::nullopt, {}};
          try {
            o.features = compute_shape_features(mask, bone);
          } catch (const Error& e) {
            o.error = e.what();
          }
          bones.push_back(std::move(o));
        }
        return bones;
      });

  // One row per image; columns repeat per selected bone and stay empty where
  // that bone could not be measured.
  std::string features_csv = csv_header_comment("morph", config) + "\n";
  features_csv += "image_id,pain_category";
  for (Label bone : config.bones) {
    for (const char* col : {"area_px2", "perimeter_px", "circularity", "semi_major_px",
                            "semi_minor_px", "eccentricity"}) {
      features_csv += fmt::format(",{}_{}", bone_name(bone), col);
    }
  }
  features_csv += "\n";
  std::vector<CategorizedShape> categorized;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = *entries[i];
    if (const auto* err = std::get_if<std::string>(&outcomes[i])) {
      warn(result, log, fmt::format("{}: skipped: {}", entry.image_id, *err));
      continue;
    }
    std::string row = fmt::format("{},{}", entry.image_id,
                                  entry.pain ? to_string(entry.pain->category()) : "");
    bool measured = false;
    for (const auto& o : std::get<std::vector<BoneOutcome>>(outcomes[i])) {
      if (!o.features) {
        warn(result, log, fmt::format("{} {}: skipped: {}", entry.image_id, bone_name(o.bone),
                                      o.error));
        row += ",,,,,,";
        continue;
      }
      measured = true;
      const auto& f = *o.features;
      row += fmt::format(",{},{},{},{},{},{}", f6(f.area), f6(f.perimeter), f6(f.circularity),
                         f6(f.semi_major), f6(f.semi_minor), f6(f.eccentricity));
      if (entry.pain) categorized.push_back({f, entry.pain->category()});
    }
    if (measured) features_csv += row + "\n";
  }
  write_file(config.output_dir / "features.csv", features_csv, result);

  std::string groups_csv = csv_header_comment("morph", config) + "\n";
  groups_csv += "bone,category,metric,mean,std,n\n";
  std::vector<GroupStats> stats;
  if (categorized.empty()) {
    warn(result, log, "no images with pain records; group statistics are empty");
  } else {
    stats = group_stats(categorized);
  }
  for (const auto& g : stats) {
    groups_csv += fmt::format("{},{},{},{},{},{}\n", bone_name(g.bone), to_string(g.category),
                              to_string(g.metric), f6(g.mean), f6(g.std), g.n);
  }
  write_file(config.output_dir / "group_stats.csv", groups_csv, result);

  if (config.emit_plots) {
    for (Label bone : config.bones) {
      for (ShapeMetric metric : {ShapeMetric::kCircularity, ShapeMetric::kEccentricity}) {
        std::vector<ErrorBar> bars;
        for (PainCategory cat : kAllPainCategories) {
          for (const auto& g : stats) {
            if (g.bone == bone && g.metric == metric && g.category == cat) {
              bars.push_back({to_string(cat), g.mean, g.std, g.n});
            }
          }
        }
        BarChartOptions options;
        options.title = fmt::format("{} {} by pain category (mean +- std)", bone_name(bone),
                                    to_string(metric));
        options.y_label = to_string(metric);
        options.header_comment = fmt::format("osteomorph morph config={}", config.hash());
        write_file(config.output_dir /
                       fmt::format("{}_{}.svg", bone_name(bone), to_string(metric)),
                   render_bar_chart(bars, options), result);
      }
    }
  }

  result.exit_code = result.warnings.empty() ? kExitSuccess : kExitPartial;
  return result;
}

// ----------------------------------------------------------------- eval

namespace {

struct EvalImage {
  std::vector<ConfusionCounts> counts;  // one per configured bone
  std::optional<double> ce_loss;
  std::string ce_error;
};

std::string flag_list(const SegMetrics& m) {
  std::string s;
  const auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += ';';
    s += name;
  };
  add(m.precision_degenerate, "precision");
  add(m.recall_degenerate, "recall");
  add(m.overlap_degenerate, "dice;iou");
  return s;
}

}  // namespace

RunResult cmd_eval(const RunConfig& config, std::ostream& log) {
  const auto manifest = load_manifest(config.manifest_path);
  const auto selected = select_entries(manifest, config);
  RunResult result;

  std::vector<const ManifestEntry*> entries;
  for (const auto* e : selected) {
    if (e->pred_mask) {
      entries.push_back(e);
    } else {
      warn(result, log, fmt::format("{}: missing pred_mask", e->image_id));
    }
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no selected entry has a pred_mask");
  }
  prepare_output_dir(config.output_dir);

  const auto outcomes = map_indexed<EvalImage>(entries.size(), config.jobs, [&](std::size_t i) {
    const auto& entry = *entries[i];
    const auto gt_native = load_mask(manifest.resolve(entry.gt_mask));
    const auto pred_native = load_mask(manifest.resolve(*entry.pred_mask));
    if (gt_native.width() != pred_native.width() || gt_native.height() != pred_native.height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("prediction is {}x{} but ground truth is {}x{}",
                              pred_native.width(), pred_native.height(), gt_native.width(),
                              gt_native.height()));
    }
    EvalImage out;
    if (entry.prob_map) {
      try {
        out.ce_loss =
            sparse_ce_loss(load_probability_map(manifest.resolve(*entry.prob_map)), gt_native);
      } catch (const Error& e) {
        out.ce_error = e.what();
      }
    }
    const bool resize = config.resize_w > 0 && config.resize_h > 0;
    const auto gt = resize ? resize_nearest(gt_native, config.resize_w, config.resize_h)
                           : gt_native;
    const auto pred = resize ? resize_nearest(pred_native, config.resize_w, config.resize_h)
                             : pred_native;
    for (Label bone : config.bones) out.counts.push_back(confusion_counts(pred, gt, bone));
    return out;
  });

  const std::string header = csv_header_comment("eval", config);
  std::string per_image = header + "\n";
  per_image += "image_id,bone,tp,tn,fp,fn,acc,precision,recall,dice,iou,degenerate\n";
  std::string losses = header + "\nimage_id,ce_loss\n";
  std::vector<std::vector<ConfusionCounts>> by_bone(config.bones.size());
  std::vector<double> loss_values;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = *entries[i];
    if (const auto* err = std::get_if<std::string>(&outcomes[i])) {
      warn(result, log, fmt::format("{}: skipped: {}", entry.image_id, *err));
      continue;
    }
    const auto& image = std::get<EvalImage>(outcomes[i]);
    for (std::size_t b = 0; b < config.bones.size(); ++b) {
      const auto& c = image.counts[b];
      const auto m = metrics_from_counts(c);
      per_image += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", entry.image_id,
                               bone_name(config.bones[b]), c.tp, c.tn, c.fp, c.fn, f2(m.acc),
                               f2(m.precision), f2(m.recall), f2(m.dice), f2(m.iou),
                               flag_list(m));
      by_bone[b].push_back(c);
    }
    if (image.ce_loss) {
      losses += fmt::format("{},{}\n", entry.image_id, f6(*image.ce_loss));
      loss_values.push_back(*image.ce_loss);
    } else if (!image.ce_error.empty()) {
      warn(result, log, fmt::format("{}: cross-entropy skipped: {}", entry.image_id,
                                    image.ce_error));
    }
  }
  if (by_bone.front().empty()) {
    throw Error(ErrorCode::kEmptyInput, "no image could be evaluated");
  }

  std::string table = fmt::format("{} aggregation={} images={}\n", header,
                                  to_string(config.aggregation), by_bone.front().size());
  table += "model,bone,acc,precision,recall,dice,iou\n";
  for (std::size_t b = 0; b < config.bones.size(); ++b) {
    const auto m = aggregate_metrics(by_bone[b], config.aggregation);
    table += fmt::format("{},{},{},{},{},{},{}\n", config.model, bone_name(config.bones[b]),
                         f2(m.acc), f2(m.precision), f2(m.recall), f2(m.dice), f2(m.iou));
  }
  write_file(config.output_dir / "metrics.csv", table, result);
  write_file(config.output_dir / "metrics_per_image.csv", per_image, result);
  if (!loss_values.empty()) {
    std::sort(loss_values.begin(), loss_values.end());
    double sum = 0.0;
    for (double v : loss_values) sum += v;
    losses += fmt::format("mean,{}\n", f6(sum / static_cast<double>(loss_values.size())));
    write_file(config.output_dir / "ce_loss.csv", losses, result);
  }

  result.exit_code = result.warnings.empty() ? kExitSuccess : kExitPartial;
  return result;
}

// ------------------------------------------------------------- classify

namespace {

struct LabelledFeatures {
  std::vector<FeatureVector> vectors;
  std::vector<PainCategory> labels;
};

LabelledFeatures extract_split(const DatasetManifest& manifest,
                               const std::vector<const ManifestEntry*>& entries, bool use_pred,
                               const RunConfig& config, RunResult& result, std::ostream& log) {
  const auto outcomes = map_indexed<FeatureVector>(entries.size(), config.jobs, [&](std::size_t i) {
    const auto& e = *entries[i];
    const auto mask =
        load_for_analysis(manifest.resolve(use_pred ? *e.pred_mask : e.gt_mask), config);
    const auto femur = compute_shape_features(mask, kFemur);
    const auto tibia = compute_shape_features(mask, kTibia);
    return make_feature_vector(e.image_id, femur, tibia);
  });
  LabelledFeatures out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (const auto* err = std::get_if<std::string>(&outcomes[i])) {
      warn(result, log, fmt::format("{} ({} mask): skipped: {}", entries[i]->image_id,
                                    use_pred ? "pred" : "gt", *err));
      continue;
    }
    out.vectors.push_back(std::get<FeatureVector>(outcomes[i]));
    out.labels.push_back(entries[i]->pain->category());
  }
  return out;
}

Json report_json(const std::string& source, const RunConfig& config, const KnnModel& model,
                 const KSelection* selection, const ClassificationReport& r,
                 std::size_t n_train) {
  Json j;
  j["producer"] = {{"command", "classify"}, {"config", config.hash()}};
  j["source"] = source;
  j["k"] = model.k();
  if (selection) {
    Json sweep = Json::array();
    for (const auto& [k, acc] : selection->accuracy_by_k) {
      sweep.push_back({{"k", k}, {"val_accuracy", acc}});
    }
    j["k_selection"] = sweep;
  } else {
    j["k_selection"] = "fixed";
  }
  Json dropped = Json::array();
  for (auto d : model.dropped_dimensions()) dropped.push_back(kFeatureNames[d]);
  j["dropped_dimensions"] = dropped;
  j["n_train"] = n_train;
  std::size_t n_test = 0;
  for (const auto& row : r.confusion) {
    for (auto v : row) n_test += v;
  }
  j["n_test"] = n_test;
  j["accuracy"] = r.accuracy;
  j["macro_f1"] = r.macro_f1;
  Json per_class = Json::object();
  for (PainCategory c : kAllPainCategories) {
    const auto& m = r.per_class[static_cast<std::size_t>(c)];
    per_class[to_string(c)] = {{"precision", m.precision}, {"recall", m.recall},
                               {"f1", m.f1},               {"support", m.support},
                               {"present", m.present}};
  }
  j["per_class"] = per_class;
  Json labels = Json::array();
  for (PainCategory c : kAllPainCategories) labels.push_back(to_string(c));
  j["confusion"] = {{"labels", labels}, {"rows_true_cols_predicted", r.confusion}};
  j["absent_classes"] = r.absent_classes;
  return j;
}

}  // namespace

RunResult cmd_classify(const RunConfig& config, std::ostream& log) {
  const auto manifest = load_manifest(config.manifest_path);
  prepare_output_dir(config.output_dir);
  RunResult result;

  std::array<std::vector<const ManifestEntry*>, 3> by_split;
  for (const auto& e : manifest.entries) {
    if (!e.pain) {
      warn(result, log, fmt::format("{}: no pain record; excluded", e.image_id));
      continue;
    }
    by_split[static_cast<std::size_t>(e.split)].push_back(&e);
  }
  const auto train = extract_split(manifest, by_split[0], false, config, result, log);
  const auto val = extract_split(manifest, by_split[1], false, config, result, log);
  const auto test = extract_split(manifest, by_split[2], false, config, result, log);
  for (auto [split, set] : {std::pair{Split::kTrain, &train}, std::pair{Split::kVal, &val},
                            std::pair{Split::kTest, &test}}) {
    if (set->vectors.empty() && !(split == Split::kVal && config.knn_k)) {
      throw Error(ErrorCode::kEmptyInput,
                  fmt::format("{} split has no usable images", to_string(split)));
    }
  }
  if (std::all_of(train.labels.begin(), train.labels.end(),
                  [&](PainCategory c) { return c == train.labels.front(); })) {
    throw Error(ErrorCode::kDegenerateLabels,
                fmt::format("degenerate training labels: every training image is {}",
                            to_string(train.labels.front())));
  }

  std::optional<KSelection> selection;
  int k = 0;
  if (config.knn_k) {
    k = *config.knn_k;
  } else {
    selection = select_k(train.vectors, train.labels, val.vectors, val.labels);
    k = selection->k;
  }
  const auto model = KnnModel::fit(train.vectors, train.labels, k);
  for (auto d : model.dropped_dimensions()) {
    log << "note: constant feature " << kFeatureNames[d] << " dropped\n";
  }

  std::string table = csv_header_comment("classify", config) + "\nsource,acc,f1\n";
  const auto gt_report = evaluate(model, test.vectors, test.labels);
  write_file(config.output_dir / "classification_gt.json",
             report_json("gt", config, model, selection ? &*selection : nullptr, gt_report,
                         train.vectors.size())
                     .dump(2) +
                 "\n",
             result);
  table += fmt::format("gt,{},{}\n", f2(gt_report.accuracy), f2(gt_report.macro_f1));

  std::vector<const ManifestEntry*> pred_entries;
  for (const auto* e : by_split[2]) {
    if (e->pred_mask) pred_entries.push_back(e);
  }
  if (!pred_entries.empty()) {
    const auto pred_test = extract_split(manifest, pred_entries, true, config, result, log);
    if (pred_test.vectors.empty()) {
      warn(result, log, "no usable prediction masks in the test split");
    } else {
      const auto pred_report = evaluate(model, pred_test.vectors, pred_test.labels);
      write_file(config.output_dir / "classification_pred.json",
                 report_json(config.model, config, model, selection ? &*selection : nullptr,
                             pred_report, train.vectors.size())
                         .dump(2) +
                     "\n",
                 result);
      table += fmt::format("{},{},{}\n", config.model, f2(pred_report.accuracy),
                           f2(pred_report.macro_f1));
    }
  }
  write_file(config.output_dir / "classification_summary.csv", table, result);

  result.exit_code = result.warnings.empty() ? kExitSuccess : kExitPartial;
  return result;
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log) {
  try {
    RunResult r;
    if (name == "morph") r = cmd_morph(config, log);
    else if (name == "eval") r = cmd_eval(config, log);
    else if (name == "classify") r = cmd_classify(config, log);
    else throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown command '{}'", name));
    for (const auto& p : r.outputs) log << "wrote " << p.string() << '\n';
    return r.exit_code;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace osteomorph
