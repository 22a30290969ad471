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

#include "logtally/raster.hpp"

#include <algorithm>

namespace logtally {

namespace {

void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) {
        throw InvalidInput("image dimensions must be positive, got " +
                           std::to_string(w) + "x" + std::to_string(h));
    }
}

}  // namespace

GrayImage::GrayImage(int w, int h, std::uint8_t fill) {
    check_dims(w, h);
    width = w;
    height = h;
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

RgbImage::RgbImage(int w, int h) {
    check_dims(w, h);
    width = w;
    height = h;
    data.assign(static_cast<std::size_t>(w) * h * 3, 0);
}

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill) {
    check_dims(w, h);
    width = w;
    height = h;
    data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::foreground_count() const {
    return static_cast<std::size_t>(
        std::count(data.begin(), data.end(), std::uint8_t{1}));
}

LabelMap::LabelMap(int w, int h) {
    check_dims(w, h);
    width = w;
    height = h;
    labels.assign(static_cast<std::size_t>(w) * h, 0);
}

void BinarizePolicy::validate() const {
    if (threshold < 0 || threshold > 255) {
        throw InvalidInput("binarize threshold must be in [0, 255], got " +
                           std::to_string(threshold));
    }
    if (mode == BinarizeMode::channel && (channel < 0 || channel > 2)) {
        throw InvalidInput("channel index must be 0, 1 or 2, got " +
                           std::to_string(channel));
    }
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // 0.299 R + 0.587 G + 0.114 B in exact integer arithmetic.
    const unsigned v = 299u * r + 587u * g + 114u * b + 500u;
    return static_cast<std::uint8_t>(v / 1000u);
}

GrayImage to_gray(const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("to_gray requires a non-empty image");
    }
    GrayImage out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        out.data[i] = luma(img.data[3 * i], img.data[3 * i + 1],
                           img.data[3 * i + 2]);
    }
    return out;
}

BinaryMask binarize(const RgbImage& img, const BinarizePolicy& policy) {
    policy.validate();
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("binarize requires a non-empty image");
    }
    BinaryMask out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    const int t = policy.threshold;
    switch (policy.mode) {
    case BinarizeMode::luma:
        for (std::size_t i = 0; i < n; ++i) {
            out.data[i] = luma(img.data[3 * i], img.data[3 * i + 1],
                               img.data[3 * i + 2]) > t;
        }
        break;
    case BinarizeMode::red_dominant:
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t r = img.data[3 * i];
            const std::uint8_t g = img.data[3 * i + 1];
            const std::uint8_t b = img.data[3 * i + 2];
            out.data[i] = r > t && r > g && r > b;
        }
        break;
    case BinarizeMode::channel:
        for (std::size_t i = 0; i < n; ++i) {
            out.data[i] = img.data[3 * i + policy.channel] > t;
        }
        break;
    }
    return out;
}

BinaryMask binarize(const GrayImage& img, const BinarizePolicy& policy) {
    policy.validate();
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidInput("binarize requires a non-empty image");
    }
    BinaryMask out(img.width, img.height);
    const int t = policy.threshold;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = img.data[i] > t;
    }
    return out;
}

GrayImage mask_to_gray(const BinaryMask& mask) {
    if (mask.width <= 0 || mask.height <= 0) {
        throw InvalidInput("mask_to_gray requires a non-empty mask");
    }
    GrayImage out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        out.data[i] = mask.data[i] ? 255 : 0;
    }
    return out;
}

BinaryMask labels_to_mask(const LabelMap& lm) {
    if (lm.width <= 0 || lm.height <= 0) {
        throw InvalidInput("labels_to_mask requires a non-empty label map");
    }
    BinaryMask out(lm.width, lm.height);
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        out.data[i] = lm.labels[i] != 0;
    }
    return out;
}

}  // namespace logtally
