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

#ifndef LOGTALLY_SYNTHGEN_HPP_
#define LOGTALLY_SYNTHGEN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "logtally/metrics.hpp"
#include "logtally/raster.hpp"

namespace logtally {

/// Parameters for a synthetic log-end scene. Same spec and seed always
/// reproduce the same scene, bit for bit, on any platform.
struct SynthSpec {
    int width = 256;
    int height = 256;
    int n_logs = 0;
    double radius_min = 8.0;
    double radius_max = 24.0;
    /// Minimum background valley, in pixels, between any two instances.
    double min_gap = 3.0;
    std::uint64_t seed = 1;
    /// Clutter blobs rendered beside the instances, never into them.
    int noise_blobs = 0;
    int noise_area_min = 8;
    int noise_area_max = 40;
    /// Radial boundary wobble as a fraction of the radius, at most 0.2.
    /// Zero keeps every instance a perfect disc.
    double roughness = 0.0;

    void validate() const;
};

struct DiscInstance {
    std::uint32_t label = 0;
    double center_row = 0.0;
    double center_col = 0.0;
    double radius = 0.0;
};

struct NoiseBlob {
    double center_row = 0.0;
    double center_col = 0.0;
    double radius = 0.0;
    int area = 0;  // rasterized pixel count
};

/// A generated scene. gt_mask is exactly the support of gt_instances;
/// clutter lives in its own mask so the reference stays clean.
struct SynthScene {
    LabelMap gt_instances;
    BinaryMask gt_mask;
    BinaryMask noise_mask;
    std::vector<DiscInstance> instances;  // ordered by label
    std::vector<NoiseBlob> noise;
};

/// Controlled corruption of a scene, used to manufacture predictions with
/// a known count tally. Merged instances are joined by a painted bridge,
/// dropped ones vanish, and extra blobs appear as false detections.
struct PerturbSpec {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> merge_pairs;
    std::vector<std::uint32_t> drop_labels;
    int extra_noise = 0;
    std::uint64_t seed = 1;
};

struct Perturbed {
    LabelMap pred;
    CountTally expected;
};

/// Generate a scene by rejection-sampled disc packing. Throws
/// GenerationFailed when the constraints cannot be met within the
/// attempt budget.
SynthScene generate(const SynthSpec& spec);

/// Derive a prediction with a known ground-truth tally. Throws
/// GenerationFailed when a bridge or noise blob cannot be placed without
/// touching uninvolved instances.
Perturbed perturb(const SynthScene& scene, const PerturbSpec& spec);

}  // namespace logtally

#endif  // LOGTALLY_SYNTHGEN_HPP_
