#include "osteomorph/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("setting {}='{}': expected {}", key, value, expected));
}

int parse_positive(const std::string& key, const std::string& value, bool allow_zero) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || v < 0 ||
      (!allow_zero && v == 0)) {
    bad_value(key, value, allow_zero ? "a non-negative integer" : "a positive integer");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

}  // namespace

std::string RunConfig::canonical() const {
  std::string bone_list;
  for (Label b : bones) {
    if (!bone_list.empty()) bone_list += ',';
    bone_list += bone_name(b);
  }
  return fmt::format("agg={}\nbones={}\nk={}\nmanifest={}\nmodel={}\nplots={}\nresize={}x{}\nsplit={}\n",
                     to_string(aggregation), bone_list, knn_k ? std::to_string(*knn_k) : "auto",
                     manifest_path.generic_string(), model, emit_plots ? 1 : 0, resize_w,
                     resize_h, split ? to_string(*split) : "all");
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", h);
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("config file not found: {}", path.string()));
  }
  Settings settings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("{}:{}: expected key=value", path.string(), line_no));
    }
    settings[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return settings;
}

Settings merge_settings(Settings base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

RunConfig config_from_settings(const Settings& settings) {
  static const std::set<std::string> kKnown = {"manifest", "out",    "bones", "agg",   "k",
                                               "plots",    "split", "resize", "model", "jobs"};
  RunConfig cfg;
  for (const auto& [key, value] : settings) {
    if (!kKnown.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown setting '{}'", key));
    }
    if (key == "manifest") {
      cfg.manifest_path = value;
    } else if (key == "out") {
      cfg.output_dir = value;
    } else if (key == "bones") {
      cfg.bones.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto token = trim(value.substr(start, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - start));
        if (!token.empty()) {
          const Label b = parse_bone(token);
          if (std::find(cfg.bones.begin(), cfg.bones.end(), b) == cfg.bones.end()) {
            cfg.bones.push_back(b);
          }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (cfg.bones.empty()) bad_value(key, value, "a non-empty list of femur,tibia");
      std::sort(cfg.bones.begin(), cfg.bones.end());
    } else if (key == "agg") {
      const auto mode = parse_aggregation(value);
      if (!mode) bad_value(key, value, "macro or micro");
      cfg.aggregation = *mode;
    } else if (key == "k") {
      if (value.empty() || value == "auto") cfg.knn_k.reset();
      else cfg.knn_k = parse_positive(key, value, false);
    } else if (key == "plots") {
      cfg.emit_plots = parse_bool(key, value);
    } else if (key == "split") {
      if (value == "all") {
        cfg.split.reset();
      } else {
        const auto s = parse_split(value);
        if (!s) bad_value(key, value, "all, train, val or test");
        cfg.split = *s;
      }
    } else if (key == "resize") {
      if (value == "none" || value == "0") {
        cfg.resize_w = cfg.resize_h = 0;
      } else {
        const auto x = value.find('x');
        if (x == std::string::npos) bad_value(key, value, "WxH or none");
        cfg.resize_w = parse_positive(key, value.substr(0, x), false);
        cfg.resize_h = parse_positive(key, value.substr(x + 1), false);
      }
    } else if (key == "model") {
      if (value.empty() || value.find(',') != std::string::npos) {
        bad_value(key, value, "a non-empty name without commas");
      }
      cfg.model = value;
    } else if (key == "jobs") {
      cfg.jobs = parse_positive(key, value, false);
    }
  }
  if (cfg.manifest_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a manifest path is required");
  }
  if (cfg.output_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "an output directory is required");
  }
  return cfg;
}

}  // namespace osteomorph
