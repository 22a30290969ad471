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

#ifndef LOGTALLY_IMAGE_IO_HPP_
#define LOGTALLY_IMAGE_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "logtally/raster.hpp"

namespace logtally {

enum class PixelFormat { gray8, gray16, rgb8 };

/// Decoded raster in one of the three formats the toolkit understands.
/// Samples are row-major, one per pixel for gray and three for RGB;
/// 8-bit formats still store each sample in the low byte of a uint16.
struct DecodedImage {
    PixelFormat format = PixelFormat::gray8;
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;

    GrayImage as_gray8() const;  // requires format == gray8
    RgbImage as_rgb8() const;    // requires format == rgb8
};

/// Decode PNG, PGM (P5) or PPM (P6) from memory. The container is picked
/// by magic bytes. Throws DecodeError on malformed input.
DecodedImage decode_image(const std::uint8_t* bytes, std::size_t len);

/// Read and decode an image file. Throws DecodeError if the file cannot
/// be opened or parsed.
DecodedImage read_image(const std::string& path);

/// Reduce a decoded image to a foreground mask. RGB and 8-bit gray inputs
/// go through the binarize policy; 16-bit gray is treated as a stored
/// label map, so any nonzero value is foreground.
BinaryMask decoded_to_mask(const DecodedImage& img,
                           const BinarizePolicy& policy);

/// Interpret a decoded gray image as a label map. Values are component
/// ids; they are renumbered to 1..N in raster order of first encounter.
/// RGB input is rejected.
LabelMap decoded_to_labels(const DecodedImage& img);

void write_png(const std::string& path, const GrayImage& img);
void write_png(const std::string& path, const RgbImage& img);

/// In-memory PNG encoders backing the write_png family; the service uses
/// them to build fixtures and responses without touching disk.
std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const RgbImage& img);
std::vector<std::uint8_t> encode_png_labels(const LabelMap& lm);

/// Store a label map as 16-bit grayscale PNG, pixel value == label.
/// Labels above 65535 are rejected.
void write_png_labels(const std::string& path, const LabelMap& lm);

void write_pgm(const std::string& path, const GrayImage& img);
void write_ppm(const std::string& path, const RgbImage& img);

/// Store a label map as a 16-bit binary PGM (maxval 65535).
void write_pgm_labels(const std::string& path, const LabelMap& lm);

/// Whole-file helpers used by the command line tool and the service.
std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes);

}  // namespace logtally

#endif  // LOGTALLY_IMAGE_IO_HPP_
