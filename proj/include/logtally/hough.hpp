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

#ifndef LOGTALLY_HOUGH_HPP_
#define LOGTALLY_HOUGH_HPP_

#include <vector>

#include "logtally/raster.hpp"

namespace logtally {

struct HoughParams {
    int r_min = 5;
    int r_max = 60;
    int radius_step = 1;
    /// Fraction of a circle's perimeter (2 pi r) that must vote for a
    /// candidate before it is reported.
    double vote_threshold = 0.4;
    /// Candidates closer than this to an already accepted, higher scored
    /// center are suppressed.
    double nms_min_center_dist = 5.0;

    void validate() const;
};

struct Circle {
    PixelCoord center;
    int radius = 0;
    double score = 0.0;  // votes normalized by perimeter
};

/// Foreground pixels with at least one 4-neighbor that is background or
/// outside the frame, in raster order.
std::vector<PixelCoord> boundary_pixels(const BinaryMask& mask);

/// Circle detection by voting. Every boundary pixel votes for all integer
/// centers whose distance to it is within half a pixel of each candidate
/// radius. Scores are votes over perimeter; candidates at or above
/// vote_threshold survive, then greedy suppression keeps the best center
/// in each neighborhood. Results are sorted by descending score with ties
/// broken by (row, col, radius), so the output is deterministic.
std::vector<Circle> detect_circles(const BinaryMask& mask,
                                   const HoughParams& params = {});

/// Single-radius variant for gray input: binarize at > 127, then vote for
/// r_fixed only. r_fixed must lie within [r_min, r_max].
std::vector<Circle> detect_centroids_fixed_radius(const GrayImage& img,
                                                  int r_fixed,
                                                  const HoughParams& params = {});

}  // namespace logtally

#endif  // LOGTALLY_HOUGH_HPP_
