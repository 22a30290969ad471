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

#include "logtally/hough.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logtally/error.hpp"

namespace logtally {

namespace {

// Per radius: column offsets of the +/-0.5 annulus for each row offset.
// ranges[dy + r] = [dx_lo, dx_hi] with dx_lo >= 0; the annulus contains
// +/-dx for dx in that range. (r +/- 0.5)^2 is never an integer, so the
// membership test has no boundary ties.
struct AnnulusRows {
    int radius;
    int reach;
    std::vector<std::pair<int, int>> ranges;
};

AnnulusRows make_annulus(int r, double half_width) {
    AnnulusRows a;
    a.radius = r;
    a.reach = static_cast<int>(std::floor(r + half_width));
    const double lo_d = std::max(r - half_width, 0.0);
    const double lo = lo_d * lo_d;
    const double hi = (r + half_width) * (r + half_width);
    a.ranges.resize(2 * a.reach + 1, {1, 0});
    for (int dy = -a.reach; dy <= a.reach; ++dy) {
        const double rem_hi = hi - static_cast<double>(dy) * dy;
        if (rem_hi < 0.0) continue;
        const int dx_hi = static_cast<int>(std::floor(std::sqrt(rem_hi)));
        const double rem_lo = lo - static_cast<double>(dy) * dy;
        int dx_lo = 0;
        if (rem_lo > 0.0) {
            dx_lo = static_cast<int>(std::ceil(std::sqrt(rem_lo)));
            // Guard the sqrt against rounding on either side.
            while (static_cast<double>(dx_lo) * dx_lo < rem_lo) ++dx_lo;
            while (dx_lo > 0 &&
                   static_cast<double>(dx_lo - 1) * (dx_lo - 1) > rem_lo) {
                --dx_lo;
            }
        }
        if (dx_lo <= dx_hi) a.ranges[dy + a.reach] = {dx_lo, dx_hi};
    }
    return a;
}

std::vector<Circle> detect_from_boundary(const std::vector<PixelCoord>& edge,
                                         int width, int height,
                                         const std::vector<int>& radii,
                                         const HoughParams& params,
                                         double half_width) {
    std::vector<Circle> candidates;
    const std::size_t plane = static_cast<std::size_t>(width) * height;
    std::vector<std::uint32_t> votes(plane);

    for (int r : radii) {
        std::fill(votes.begin(), votes.end(), 0);
        const AnnulusRows annulus = make_annulus(r, half_width);
        for (const PixelCoord& p : edge) {
            for (int dy = -annulus.reach; dy <= annulus.reach; ++dy) {
                const int cr = p.row + dy;
                if (cr < 0 || cr >= height) continue;
                const auto [dx_lo, dx_hi] = annulus.ranges[dy + annulus.reach];
                if (dx_lo > dx_hi) continue;
                std::uint32_t* row =
                    votes.data() + static_cast<std::size_t>(cr) * width;
                const int neg_lo = std::max(p.col - dx_hi, 0);
                const int neg_hi = std::min(p.col - dx_lo, width - 1);
                for (int cc = neg_lo; cc <= neg_hi; ++cc) ++row[cc];
                // Avoid double-counting dx == 0.
                const int pos_lo = std::max(p.col + std::max(dx_lo, 1), 0);
                const int pos_hi = std::min(p.col + dx_hi, width - 1);
                for (int cc = pos_lo; cc <= pos_hi; ++cc) ++row[cc];
            }
        }
        const double perimeter = 2.0 * std::numbers::pi * r;
        const double needed = params.vote_threshold * perimeter;
        for (int cr = 0; cr < height; ++cr) {
            for (int cc = 0; cc < width; ++cc) {
                const std::uint32_t v =
                    votes[static_cast<std::size_t>(cr) * width + cc];
                if (v == 0) continue;
                const double score = static_cast<double>(v) / perimeter;
                if (static_cast<double>(v) >= needed) {
                    candidates.push_back({{cr, cc}, r, score});
                }
            }
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Circle& a, const Circle& b) {
                  if (a.score != b.score) return a.score > b.score;
                  if (a.center.row != b.center.row) {
                      return a.center.row < b.center.row;
                  }
                  if (a.center.col != b.center.col) {
                      return a.center.col < b.center.col;
                  }
                  return a.radius < b.radius;
              });

    std::vector<Circle> accepted;
    const double min_d2 =
        params.nms_min_center_dist * params.nms_min_center_dist;
    for (const Circle& c : candidates) {
        bool keep = true;
        for (const Circle& a : accepted) {
            const double dr = c.center.row - a.center.row;
            const double dc = c.center.col - a.center.col;
            if (dr * dr + dc * dc < min_d2) {
                keep = false;
                break;
            }
        }
        if (keep) accepted.push_back(c);
    }
    return accepted;
}

}  // namespace

void HoughParams::validate() const {
    if (r_min <= 0 || r_max < r_min) {
        throw InvalidInput("hough radii must satisfy 0 < r_min <= r_max");
    }
    if (radius_step <= 0) {
        throw InvalidInput("hough radius_step must be positive");
    }
    if (!(vote_threshold > 0.0) || vote_threshold > 1.0) {
        throw InvalidInput("hough vote_threshold must be in (0, 1]");
    }
    if (nms_min_center_dist < 0.0) {
        throw InvalidInput("hough nms_min_center_dist must be non-negative");
    }
}

std::vector<PixelCoord> boundary_pixels(const BinaryMask& mask) {
    if (mask.width <= 0 || mask.height <= 0) {
        throw InvalidInput("boundary_pixels requires a non-empty mask");
    }
    std::vector<PixelCoord> out;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            const bool edge = r == 0 || !mask.at(r - 1, c) ||
                              r == mask.height - 1 || !mask.at(r + 1, c) ||
                              c == 0 || !mask.at(r, c - 1) ||
                              c == mask.width - 1 || !mask.at(r, c + 1);
            if (edge) out.push_back({r, c});
        }
    }
    return out;
}

std::vector<Circle> detect_circles(const BinaryMask& mask,
                                   const HoughParams& params) {
    params.validate();
    const std::vector<PixelCoord> edge = boundary_pixels(mask);
    std::vector<int> radii;
    for (int r = params.r_min; r <= params.r_max; r += params.radius_step) {
        radii.push_back(r);
    }
    return detect_from_boundary(edge, mask.width, mask.height, radii, params,
                                0.5);
}

std::vector<Circle> detect_centroids_fixed_radius(const GrayImage& img,
                                                  int r_fixed,
                                                  const HoughParams& params) {
    params.validate();
    if (r_fixed < params.r_min || r_fixed > params.r_max) {
        throw InvalidInput("r_fixed must lie within [r_min, r_max]");
    }
    BinarizePolicy policy;
    policy.mode = BinarizeMode::luma;
    policy.threshold = 127;
    const BinaryMask mask = binarize(img, policy);
    const std::vector<PixelCoord> edge = boundary_pixels(mask);
    // Inner boundary pixels of a rasterized disc sit roughly half a pixel
    // inside the nominal radius, so a single-radius sweep needs a wider
    // accumulation band than the multi-radius search, where neighboring
    // radius bins absorb that bias.
    return detect_from_boundary(edge, mask.width, mask.height, {r_fixed},
                                params, 1.0);
}

}  // namespace logtally
