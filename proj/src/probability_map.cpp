#include "osteomorph/probability_map.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

static_assert(std::endian::native == std::endian::little,
              "probability map I/O assumes a little-endian host");

std::uint32_t read_u32(const std::vector<char>& bytes, std::size_t offset) {
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + offset, sizeof(v));
  return v;
}

}  // namespace

ProbabilityMap::ProbabilityMap(int width, int height, int classes, std::vector<double> probs)
    : width_(width), height_(height), classes_(classes), probs_(std::move(probs)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("probability map dimensions must be positive, got {}x{}", width,
                            height));
  }
  if (classes < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("probability map needs at least 2 classes, got {}", classes));
  }
  if (probs_.size() != pixel_count() * static_cast<std::size_t>(classes)) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("expected {} probabilities, got {}",
                            pixel_count() * static_cast<std::size_t>(classes), probs_.size()));
  }
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    double sum = 0.0;
    for (double p : pixel(i)) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::kInvalidProbabilities,
                    fmt::format("pixel {} has invalid probability {}", i, p));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::kInvalidProbabilities,
                  fmt::format("pixel {} probabilities sum to {}", i, sum));
    }
  }
}

ProbabilityMap load_probability_map(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound,
                fmt::format("probability map not found: {}", path.string()));
  }
  std::ifstream in(path, std::ios::binary);
  std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < 12) {
    throw Error(ErrorCode::kIo, fmt::format("{}: truncated header", path.string()));
  }
  const std::uint32_t w = read_u32(bytes, 0);
  const std::uint32_t h = read_u32(bytes, 4);
  const std::uint32_t c = read_u32(bytes, 8);
  const std::uint64_t count = std::uint64_t{w} * h * c;
  if (w == 0 || h == 0 || c < 2 || w > (1u << 16) || h > (1u << 16) || c > 256 ||
      bytes.size() != 12 + count * sizeof(float)) {
    throw Error(ErrorCode::kIo,
                fmt::format("{}: header {}x{}x{} does not match payload of {} bytes",
                            path.string(), w, h, c, bytes.size() - 12));
  }
  std::vector<double> probs(count);
  for (std::size_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + 12 + i * sizeof(float), sizeof(f));
    probs[i] = f;
  }
  return ProbabilityMap(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c),
                        std::move(probs));
}

void write_probability_map(const ProbabilityMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(map.width()),
                                   static_cast<std::uint32_t>(map.height()),
                                   static_cast<std::uint32_t>(map.classes())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (double p : map.values()) {
    const auto f = static_cast<float>(p);
    out.write(reinterpret_cast<const char*>(&f), sizeof(f));
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write failed: {}", path.string()));
}

}  // namespace osteomorph
