#include "osteomorph/mask_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "osteomorph/error.hpp"

namespace osteomorph {
namespace {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("mask file not found: {}", path.string()));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kUnreadableImage, fmt::format("cannot open {}", path.string()));
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PngReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* reader = static_cast<PngReader*>(png_get_io_ptr(png));
  if (reader->pos + length > reader->bytes->size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, reader->bytes->data() + reader->pos, length);
  reader->pos += length;
}

void on_png_error(png_structp png, png_const_charp message) {
  auto* buffer = static_cast<std::string*>(png_get_error_ptr(png));
  *buffer = message;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

// Uses the low-level API: the simplified one may apply gamma conversion,
// which would alter label values.
GrayImage decode_png(const std::vector<std::uint8_t>& bytes,
                     const std::filesystem::path& path) {
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error,
                                           on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kUnreadableImage, fmt::format("{}: libpng init failed", path.string()));
  }
  PngReader reader{&bytes, 0};
  GrayImage out;
  std::vector<png_bytep> rows;
  volatile bool wrong_format = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kUnreadableImage, fmt::format("{}: {}", path.string(), message));
  }
  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    wrong_format = true;
  } else {
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.pixels.resize(static_cast<std::size_t>(out.width) *
                      static_cast<std::size_t>(out.height));
    rows.resize(static_cast<std::size_t>(out.height));
    for (std::size_t y = 0; y < rows.size(); ++y) {
      rows[y] = out.pixels.data() + y * static_cast<std::size_t>(out.width);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (wrong_format) {
    throw Error(ErrorCode::kUnreadableImage,
                fmt::format("{}: not an 8-bit single-channel PNG", path.string()));
  }
  return out;
}

// Minimal tokenizer for the PGM header: whitespace separated, '#' comments.
class PgmHeader {
 public:
  PgmHeader(const std::vector<std::uint8_t>& bytes, std::size_t pos)
      : bytes_(bytes), pos_(pos) {}

  int next_int(const std::filesystem::path& path) {
    skip_space_and_comments();
    std::size_t start = pos_;
    int value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1 << 24) break;
      ++pos_;
    }
    if (pos_ == start) {
      throw Error(ErrorCode::kUnreadableImage, fmt::format("{}: malformed PGM header", path.string()));
    }
    return value;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
};

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes,
                     const std::filesystem::path& path) {
  const bool binary = bytes[1] == '5';
  PgmHeader header(bytes, 2);
  GrayImage out;
  out.width = header.next_int(path);
  out.height = header.next_int(path);
  const int maxval = header.next_int(path);
  if (out.width <= 0 || out.height <= 0 || maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::kUnreadableImage,
                fmt::format("{}: unsupported PGM (need 8-bit, maxval {})", path.string(), maxval));
  }
  const std::size_t count =
      static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  out.pixels.resize(count);
  if (binary) {
    header.advance();  // single whitespace byte after maxval
    if (bytes.size() < header.pos() + count) {
      throw Error(ErrorCode::kUnreadableImage, fmt::format("{}: truncated PGM data", path.string()));
    }
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(header.pos()), count,
                out.pixels.begin());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = header.next_int(path);
      if (v > maxval) {
        throw Error(ErrorCode::kUnreadableImage,
                    fmt::format("{}: sample {} exceeds maxval", path.string(), v));
      }
      out.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

}  // namespace

LabelMask load_mask(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                                '\r', '\n', 0x1a, '\n'};
  GrayImage image;
  if (bytes.size() >= kPngSignature.size() &&
      std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    image = decode_png(bytes, path);
  } else if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2')) {
    image = decode_pgm(bytes, path);
  } else {
    throw Error(ErrorCode::kUnreadableImage,
                fmt::format("{}: neither PNG nor PGM", path.string()));
  }

  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    if (image.pixels[i] > kMaxLabel) {
      const auto w = static_cast<std::size_t>(image.width);
      throw Error(ErrorCode::kInvalidLabel,
                  fmt::format("{}: invalid label value {} at (x={}, y={})", path.string(),
                              image.pixels[i], i % w, i / w));
    }
  }
  return LabelMask(image.width, image.height, std::move(image.pixels));
}

void write_mask(const LabelMask& mask, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png") {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(mask.width());
    image.height = static_cast<png_uint_32>(mask.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, mask.labels().data(), 0,
                                 nullptr)) {
      throw Error(ErrorCode::kIo, fmt::format("{}: {}", path.string(), image.message));
    }
    return;
  }
  if (ext == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
    out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(mask.labels().data()),
              static_cast<std::streamsize>(mask.size()));
    if (!out) throw Error(ErrorCode::kIo, fmt::format("write failed: {}", path.string()));
    return;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("{}: mask output must be .png or .pgm", path.string()));
}

LabelMask resize_nearest(const LabelMask& mask, int target_w, int target_h) {
  if (target_w <= 0 || target_h <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("resize target must be positive, got {}x{}", target_w, target_h));
  }
  if (target_w == mask.width() && target_h == mask.height()) return mask;

  const auto sw = static_cast<std::int64_t>(mask.width());
  const auto sh = static_cast<std::int64_t>(mask.height());
  std::vector<int> src_x(static_cast<std::size_t>(target_w));
  for (std::int64_t x = 0; x < target_w; ++x) {
    src_x[static_cast<std::size_t>(x)] = static_cast<int>(((2 * x + 1) * sw) / (2 * target_w));
  }
  std::vector<Label> labels(static_cast<std::size_t>(target_w) *
                            static_cast<std::size_t>(target_h));
  for (std::int64_t y = 0; y < target_h; ++y) {
    const int sy = static_cast<int>(((2 * y + 1) * sh) / (2 * target_h));
    for (int x = 0; x < target_w; ++x) {
      labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(target_w) +
             static_cast<std::size_t>(x)] = mask.at(src_x[static_cast<std::size_t>(x)], sy);
    }
  }
  return LabelMask(target_w, target_h, std::move(labels));
}

}  // namespace osteomorph
