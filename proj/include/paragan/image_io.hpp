#pragma once

#include <filesystem>
#include <string>

#include "paragan/tensor.hpp"

namespace paragan {

// Maps [-1, 1] float channels to 8-bit PNG and back. Gray (C=1) and RGB
// (C=3) only; the affine map is v/127.5 - 1 on load and its rounded inverse
// on save, so a save/load round trip stays within 1/255 per pixel.

inline unsigned char to_u8(float v) {
    const float q = (v + 1.0f) * 127.5f;
    const long r = std::lround(q);
    return static_cast<unsigned char>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

inline float from_u8(unsigned char b) { return float(b) / 127.5f - 1.0f; }

// image is {C, H, W}. Throws on I/O failure or unsupported channel count.
void write_png(const std::filesystem::path& path, const Tensor<float>& image);

// Returns {C, H, W} in [-1, 1]. Throws with the filename on undecodable input.
Tensor<float> read_png(const std::filesystem::path& path);

}  // namespace paragan
