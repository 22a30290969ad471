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

#ifndef LOGTALLY_VOLUME_HPP_
#define LOGTALLY_VOLUME_HPP_

#include <vector>

#include "logtally/components.hpp"

namespace logtally {

/// Image-to-world scale.
struct ScaleCalibration {
    double pixels_per_meter = 0.0;

    void validate() const;
};

/// One log as a cylinder: cross-section radius and depth, both meters.
struct LogDims {
    double radius = 0.0;
    double depth = 0.0;
};

struct PileVolume {
    double total = 0.0;            // cubic meters
    std::vector<double> per_log;   // one entry per log, same order as input
    int log_count = 0;
};

/// Cylinder volume pi * r^2 * depth. Radius and depth must be positive.
double log_volume(const LogDims& dims);

/// Sum of per-log cylinder volumes. The list must not be empty.
PileVolume pile_volume(const std::vector<LogDims>& logs);

/// Convert labeled cross-sections to physical cylinder dimensions using
/// each component's equivalent radius and a uniform depth in meters.
std::vector<LogDims> dims_from_components(
    const std::vector<ComponentStats>& components,
    const ScaleCalibration& cal, double depth_m);

}  // namespace logtally

#endif  // LOGTALLY_VOLUME_HPP_
