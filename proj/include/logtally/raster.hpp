// Copyright 2026 the logtally authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOGTALLY_RASTER_HPP_
#define LOGTALLY_RASTER_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "logtally/error.hpp"

namespace logtally {

/// Pixel position as (row, col), top-left origin.
struct PixelCoord {
    int row = 0;
    int col = 0;

    bool operator==(const PixelCoord&) const = default;
};

/// Single-channel 8-bit image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int row, int col) const {
        return data[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return data[static_cast<std::size_t>(row) * width + col];
    }
    std::size_t pixel_count() const { return data.size(); }
};

/// Interleaved 8-bit RGB image, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h);

    std::array<std::uint8_t, 3> pixel(int row, int col) const {
        const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set_pixel(int row, int col, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
        const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
    std::size_t pixel_count() const { return data.size() / 3; }
};

/// Binary foreground mask. Values are strictly 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int row, int col) const {
        return data[static_cast<std::size_t>(row) * width + col];
    }
    void set(int row, int col, std::uint8_t v) {
        data[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0;
    }
    bool inside(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    std::size_t foreground_count() const;
    std::size_t pixel_count() const { return data.size(); }
};

/// Connected-component labeling, 0 = background, components numbered 1..N
/// in raster-scan order of first encounter.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels;
    int component_count = 0;

    LabelMap() = default;
    LabelMap(int w, int h);

    std::uint32_t at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
    std::uint32_t& at(int row, int col) {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
};

enum class BinarizeMode {
    luma,          // weighted gray value above threshold
    red_dominant,  // red above threshold and strictly the largest channel
    channel,       // a single chosen channel above threshold
};

/// How an image is reduced to a foreground mask. Thresholds compare
/// strictly: a value equal to the threshold is background.
struct BinarizePolicy {
    BinarizeMode mode = BinarizeMode::red_dominant;
    int threshold = 127;  // valid range [0, 255]
    int channel = 0;      // used by BinarizeMode::channel, one of {0, 1, 2}

    void validate() const;
};

/// Integer rec601 luma, rounded half up. luma(v, v, v) == v for all v.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Collapse an RGB image to 8-bit gray via luma.
GrayImage to_gray(const RgbImage& img);

BinaryMask binarize(const RgbImage& img, const BinarizePolicy& policy);

/// On single-channel input every mode reduces to value > threshold;
/// there are no color channels to compare.
BinaryMask binarize(const GrayImage& img, const BinarizePolicy& policy);

/// Expand a mask to an 8-bit image with foreground 255, background 0.
GrayImage mask_to_gray(const BinaryMask& mask);

/// Foreground support of a label map (any nonzero label).
BinaryMask labels_to_mask(const LabelMap& lm);

}  // namespace logtally

#endif  // LOGTALLY_RASTER_HPP_
