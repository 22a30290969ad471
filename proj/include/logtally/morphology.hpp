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

#ifndef LOGTALLY_MORPHOLOGY_HPP_
#define LOGTALLY_MORPHOLOGY_HPP_

#include <variant>
#include <vector>

#include "logtally/components.hpp"
#include "logtally/raster.hpp"

namespace logtally {

/// 3x3 structuring elements. square3 is the full 8-neighborhood,
/// cross3 the 4-neighborhood plus center.
enum class StructuringElement { square3, cross3 };

/// Per-pixel Euclidean distances, row-major doubles.
struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    DistanceField() = default;
    DistanceField(int w, int h);

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
};

/// Rendering mode for reference masks derived from instance labels.
struct GroundTruthMode {
    enum class Kind {
        flat_red,              // uniform (255,0,0) over every instance
        red_gradient_capped,   // red ramp, radius capped by max_diameter/2
        gray_gradient_full,    // gray ramp over the full instance radius
    };

    Kind kind = Kind::flat_red;
    int max_diameter = 0;  // required positive for red_gradient_capped

    static GroundTruthMode flat_red() { return {Kind::flat_red, 0}; }
    static GroundTruthMode red_gradient_capped(int max_diameter) {
        return {Kind::red_gradient_capped, max_diameter};
    }
    static GroundTruthMode gray_gradient_full() {
        return {Kind::gray_gradient_full, 0};
    }

    void validate() const;
};

/// Iterated binary erosion. Pixels outside the frame count as background,
/// so foreground touching the border shrinks from that side too.
/// iterations == 0 returns the input unchanged.
BinaryMask erode(const BinaryMask& mask, StructuringElement se,
                 int iterations);

/// Iterated binary dilation, the adjoint of erode under complement.
/// Nothing grows in from outside the frame.
BinaryMask dilate(const BinaryMask& mask, StructuringElement se,
                  int iterations);

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel, where everything outside the frame is background.
/// Background pixels get 0.
DistanceField edt(const BinaryMask& mask);

/// Threshold erosion: keep pixels whose Euclidean distance to background
/// is strictly greater than radius. radius == 0 returns the input.
BinaryMask dynamic_erode(const BinaryMask& mask, double radius);

/// Morphological reconstruction of mask from marker by repeated geodesic
/// dilation, computed with the two-scan plus FIFO propagation scheme, so
/// cost is near linear instead of one full pass per dilation step.
/// Requires marker <= mask pointwise and equal dimensions.
GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask,
                      Connectivity conn = Connectivity::eight);
DistanceField reconstruct(const DistanceField& marker,
                          const DistanceField& mask,
                          Connectivity conn = Connectivity::eight);

/// Peak regions of a distance field: pixels where the field exceeds its
/// reconstruction from (field - h), one region per local maximum deeper
/// than h relative to its surroundings. The marker is clamped at zero so
/// an all-zero field yields no regions. Returns one centroid per region
/// (coordinate means, rounded half up), in raster order of the regions'
/// first pixels.
std::vector<PixelCoord> h_maxima_centroids(const DistanceField& field,
                                           double h,
                                           Connectivity conn =
                                               Connectivity::eight);

/// Intensity of the radial ramp used by the gradient ground-truth modes:
/// 255 at the center, 0 from ramp_radius outward, linear in between,
/// rounded half up.
std::uint8_t gradient_intensity(double distance, double ramp_radius);

/// Render a reference image from instance labels. flat_red and
/// red_gradient_capped produce RGB; gray_gradient_full produces grayscale.
/// Gradients fall off with distance from each instance centroid over the
/// instance's equivalent radius (capped for red_gradient_capped).
std::variant<RgbImage, GrayImage> make_ground_truth(const LabelMap& instances,
                                                    const GroundTruthMode& mode);

}  // namespace logtally

#endif  // LOGTALLY_MORPHOLOGY_HPP_
