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

#ifndef LOGTALLY_COMPONENTS_HPP_
#define LOGTALLY_COMPONENTS_HPP_

#include <vector>

#include "logtally/raster.hpp"

namespace logtally {

enum class Connectivity : int { four = 4, eight = 8 };

struct ComponentStats {
    std::uint32_t label = 0;
    int area = 0;
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    int min_row = 0;
    int min_col = 0;
    int max_row = 0;
    int max_col = 0;
    double equivalent_radius = 0.0;  // radius of the disc with equal area
};

/// Label connected foreground components with two-pass union-find.
/// Components are numbered 1..N in raster-scan order of the first pixel
/// encountered, so the result is deterministic.
LabelMap label(const BinaryMask& mask, Connectivity conn = Connectivity::eight);

/// Number of components, i.e. the count a mask-based tally reports.
int count_logs(const LabelMap& lm);

/// Drop components with area < min_area and renumber the survivors
/// contiguously, preserving raster-scan order.
LabelMap filter_components(const LabelMap& lm, int min_area);

/// Per-component area, centroid, bounding box and equivalent radius,
/// ordered by label.
std::vector<ComponentStats> stats(const LabelMap& lm);

}  // namespace logtally

#endif  // LOGTALLY_COMPONENTS_HPP_
