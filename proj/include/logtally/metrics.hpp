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

#ifndef LOGTALLY_METRICS_HPP_
#define LOGTALLY_METRICS_HPP_

#include <cstdint>
#include <vector>

#include "logtally/raster.hpp"

namespace logtally {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
};

/// Pixelwise agreement scores. Ratios with an empty denominator are 0,
/// except kappa: chance agreement of exactly 1 only happens alongside
/// perfect observed agreement, so kappa is 1 there.
struct PixelScores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double kappa = 0.0;
    double iou = 0.0;
};

/// Outcome classes of count matching: ci correctly isolated instances,
/// e reference instances missed entirely, i instances absorbed into
/// merged detections (counted per absorbed instance, so never 1),
/// n detections covering nothing.
struct CountTally {
    int ci = 0;
    int e = 0;
    int i = 0;
    int n = 0;
};

struct MatchParams {
    /// A detection covers a reference instance when it overlaps at least
    /// this fraction of the instance's area.
    double coverage_tau = 0.5;

    void validate() const;
};

/// Instance matching outcome. gt_assignment[g] is the detection label a
/// reference instance was assigned to (index 1..G, entry 0 unused, value
/// 0 when unassigned). pred_assigned[c] lists the reference labels
/// assigned to detection c (index 1..P, entry 0 unused).
struct InstanceMatch {
    CountTally tally;
    std::vector<std::uint32_t> gt_assignment;
    std::vector<std::vector<std::uint32_t>> pred_assigned;
};

/// Pixel confusion of a predicted mask against a reference mask.
/// Dimensions must match.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

/// Scores from a confusion tally. The tally must cover at least one pixel.
PixelScores pixel_scores(const ConfusionCounts& counts);

/// Intersection-sensitive count score: ci / (ci + e + i + n).
/// The tally must not be all zero.
double iss(const CountTally& tally);

/// Count accuracy ignoring merges: ci / (ci + e + n).
/// ci + e + n must be positive.
double accuracy_logs(const CountTally& tally);

/// Match detections against reference instances by area coverage.
/// Each covered reference instance is assigned to the detection with the
/// largest overlap (ties to the lowest detection label). A detection with
/// one assigned instance counts as ci, one with k >= 2 contributes k to i,
/// and one covering no instance at all is noise. Reference instances
/// covered by nothing count as e.
InstanceMatch match_instances(const LabelMap& pred, const LabelMap& gt,
                              const MatchParams& params = {});

}  // namespace logtally

#endif  // LOGTALLY_METRICS_HPP_
