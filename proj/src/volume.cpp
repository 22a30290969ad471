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

#include "logtally/volume.hpp"

#include <numbers>

#include "logtally/error.hpp"

namespace logtally {

void ScaleCalibration::validate() const {
    if (!(pixels_per_meter > 0.0)) {
        throw InvalidInput("pixels_per_meter must be positive");
    }
}

double log_volume(const LogDims& dims) {
    if (!(dims.radius > 0.0) || !(dims.depth > 0.0)) {
        throw InvalidInput("log radius and depth must be positive");
    }
    return std::numbers::pi * dims.radius * dims.radius * dims.depth;
}

PileVolume pile_volume(const std::vector<LogDims>& logs) {
    if (logs.empty()) {
        throw InvalidInput("pile_volume: no logs given");
    }
    PileVolume out;
    out.per_log.reserve(logs.size());
    for (const LogDims& d : logs) {
        const double v = log_volume(d);
        out.per_log.push_back(v);
        out.total += v;
    }
    out.log_count = static_cast<int>(logs.size());
    return out;
}

std::vector<LogDims> dims_from_components(
    const std::vector<ComponentStats>& components,
    const ScaleCalibration& cal, double depth_m) {
    cal.validate();
    if (!(depth_m > 0.0)) {
        throw InvalidInput("log depth must be positive");
    }
    std::vector<LogDims> out;
    out.reserve(components.size());
    for (const ComponentStats& c : components) {
        out.push_back({c.equivalent_radius / cal.pixels_per_meter, depth_m});
    }
    return out;
}

}  // namespace logtally
