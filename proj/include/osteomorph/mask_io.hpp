#pragma once

#include <filesystem>

#include "osteomorph/label_mask.hpp"

namespace osteomorph {

// Reads an 8-bit single-channel PNG or PGM (P5/P2). The format is detected
// from the file signature, not the extension. Pixel value v becomes label v;
// any value above kMaxLabel is rejected with its coordinates.
LabelMask load_mask(const std::filesystem::path& path);

// Writes PNG for ".png" and binary PGM for ".pgm"; other extensions throw.
void write_mask(const LabelMask& mask, const std::filesystem::path& path);

// Nearest-neighbour resampling. Output pixel x samples source column
// floor((x + 0.5) * src_w / target_w), so resizing to the source size is the
// identity and no label outside the input set can appear.
LabelMask resize_nearest(const LabelMask& mask, int target_w, int target_h);

}  // namespace osteomorph
