#include "osteomorph/manifest.hpp"

#include <charconv>
#include <fstream>
#include <unordered_set>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

[[noreturn]] void malformed(std::size_t line_no, std::string_view what) {
  throw Error(ErrorCode::kMalformedRow, fmt::format("manifest line {}: {}", line_no, what));
}

}  // namespace

const char* to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<const ManifestEntry*> DatasetManifest::in_split(Split split) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(&e);
  }
  return out;
}

DatasetManifest parse_manifest(std::istream& in, std::filesystem::path base_dir) {
  DatasetManifest manifest;
  manifest.base_dir = std::move(base_dir);
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kManifestHeader) {
        malformed(line_no, fmt::format("expected header '{}'", kManifestHeader));
      }
      header_seen = true;
      continue;
    }

    const auto f = split_fields(line);
    if (f.size() != 7) malformed(line_no, fmt::format("expected 7 fields, got {}", f.size()));

    ManifestEntry entry;
    entry.image_id = std::string(f[0]);
    if (entry.image_id.empty()) malformed(line_no, "empty image_id");
    if (f[1].empty()) malformed(line_no, "empty gt_mask");
    entry.gt_mask = std::string(f[1]);
    if (!f[2].empty()) entry.pred_mask = std::string(f[2]);
    if (!f[3].empty()) entry.prob_map = std::string(f[3]);

    const auto split = parse_split(f[4]);
    if (!split) {
      throw Error(ErrorCode::kUnknownSplit,
                  fmt::format("manifest line {}: unknown split '{}' (expected train, val or test)",
                              line_no, f[4]));
    }
    entry.split = *split;

    if (f[5].empty() != f[6].empty()) {
      malformed(line_no, "baseline_pain and followup_pain must both be set or both empty");
    }
    if (!f[5].empty()) {
      const auto baseline = parse_int(f[5]);
      const auto followup = parse_int(f[6]);
      if (!baseline || !followup) malformed(line_no, "pain scores must be integers");
      entry.pain = PainRecord{entry.image_id, *baseline, *followup};
    }

    if (!seen.insert(entry.image_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  fmt::format("manifest line {}: duplicate image_id '{}'", line_no,
                              entry.image_id));
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!header_seen) malformed(line_no, "missing header");
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("manifest not found: {}", path.string()));
  }
  return parse_manifest(in, path.parent_path());
}

void write_manifest(const DatasetManifest& manifest, std::ostream& out) {
  out << kManifestHeader << '\n';
  for (const auto& e : manifest.entries) {
    out << e.image_id << ',' << e.gt_mask.generic_string() << ','
        << (e.pred_mask ? e.pred_mask->generic_string() : "") << ','
        << (e.prob_map ? e.prob_map->generic_string() : "") << ',' << to_string(e.split) << ',';
    if (e.pain) out << e.pain->baseline_pain << ',' << e.pain->followup_pain;
    else out << ',';
    out << '\n';
  }
}

}  // namespace osteomorph
