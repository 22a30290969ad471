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

#ifndef LOGTALLY_PIPELINE_HPP_
#define LOGTALLY_PIPELINE_HPP_

#include <string>
#include <vector>

#include "logtally/components.hpp"
#include "logtally/hough.hpp"
#include "logtally/image_io.hpp"
#include "logtally/metrics.hpp"
#include "logtally/morphology.hpp"
#include "logtally/raster.hpp"
#include "logtally/synthgen.hpp"

namespace logtally {

enum class CounterKind {
    connected_components,
    hough,
    reconstruction_centroids,
};

/// Optional shrink step between binarization and counting.
struct ErosionConfig {
    bool enabled = false;
    /// When set, threshold the Euclidean distance field at radius instead
    /// of iterating a structuring element.
    bool dynamic = false;
    StructuringElement se = StructuringElement::square3;
    int iterations = 15;
    double radius = 15.0;

    void validate() const;
};

/// End-to-end counting configuration. The defaults reflect the setup that
/// held up best in practice: binarize, no erosion, count components of
/// any size.
struct PipelineConfig {
    BinarizePolicy binarize{};
    ErosionConfig post_erosion{};
    Connectivity connectivity = Connectivity::eight;
    int min_area = 0;
    CounterKind counter = CounterKind::connected_components;
    HoughParams hough{};
    /// Peak depth for the reconstruction-centroid counter.
    double centroid_depth = 2.0;

    void validate() const;
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

/// Result of counting one image. Exactly one of components, circles or
/// centroids is populated, matching the counter, and count equals its
/// length. labels and mask carry the final intermediate rasters so
/// callers can render overlays or evaluate without reprocessing.
struct CountReport {
    std::string id;
    CounterKind counter = CounterKind::connected_components;
    int count = 0;
    std::vector<ComponentStats> components;
    std::vector<Circle> circles;
    std::vector<PixelCoord> centroids;
    std::vector<StageTiming> timings;
    BinaryMask mask;
    LabelMap labels;  // populated for the connected_components counter
};

struct EvalRow {
    std::string id;
    PixelScores scores;
    int expected_logs = 0;
    int output = 0;
    CountTally tally;
    double iss_value = 0.0;
    double accuracy_logs_value = 0.0;
};

struct EvalAggregate {
    double accuracy = 0.0;
    double f1 = 0.0;
    double kappa = 0.0;
    double iou = 0.0;
    double expected_logs = 0.0;
    double output = 0.0;
    double ci = 0.0;
    double e = 0.0;
    double i = 0.0;
    double n = 0.0;
    double iss = 0.0;
    double accuracy_logs = 0.0;
    int row_count = 0;
};

struct EvalError {
    std::string id;
    std::string message;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    EvalAggregate aggregate;
    std::vector<EvalError> errors;
};

/// Count the logs in one image file. id is the file stem.
CountReport run_count(const std::string& path, const PipelineConfig& config);

/// Same, from an in-memory encoded image.
CountReport run_count_bytes(const std::uint8_t* bytes, std::size_t len,
                            const std::string& id,
                            const PipelineConfig& config);

/// Evaluate one decoded prediction against one decoded reference
/// instance map. Degenerate tallies (nothing expected, nothing found)
/// score 1.0 rather than failing the row.
EvalRow eval_pair(const DecodedImage& pred, const DecodedImage& gt,
                  const std::string& id, const MatchParams& match,
                  const PipelineConfig& config);

/// Evaluate every stem present in both directories (.png, .pgm or .ppm;
/// the prediction is processed through the pipeline, the reference is
/// read as an instance label map). Rows are ordered by stem with numeric
/// runs compared by value. Files whose counterpart is missing or whose
/// processing fails are reported in errors. jobs <= 0 picks the hardware
/// thread count.
EvalReport run_eval(const std::string& pred_dir, const std::string& gt_dir,
                    const MatchParams& match, const PipelineConfig& config,
                    int jobs = 0);

/// Recompute the aggregate block from the rows.
EvalAggregate aggregate_rows(const std::vector<EvalRow>& rows);

/// Blend a component tint into the base image and print each component's
/// label at its centroid.
RgbImage render_overlay(const RgbImage& base, const LabelMap& labels);
RgbImage render_overlay(const GrayImage& base, const LabelMap& labels);

/// Print 1-based indices at the given points; used when the counter
/// reports centers instead of labeled regions.
RgbImage render_overlay_points(const RgbImage& base,
                               const std::vector<PixelCoord>& points);

/// JSON for a count report. Timings are volatile between runs, so they
/// are only serialized on request and every stable field always encodes
/// the same way.
std::string count_report_json(const CountReport& report,
                              bool include_timings = false);

std::string eval_report_json(const EvalReport& report);

/// CSV with one row per image and a trailing aggregate row. Serializing,
/// parsing and serializing again reproduces the bytes exactly.
std::string eval_report_csv(const EvalReport& report);
EvalReport parse_eval_csv(const std::string& csv);

/// Write a scene to out_dir as images/<stem>.png (binarizable input),
/// truth/<stem>.png (16-bit instance labels) and manifests/<stem>.json.
void export_scene(const SynthScene& scene, const std::string& out_dir,
                  const std::string& stem);

const char* counter_name(CounterKind kind);

}  // namespace logtally

#endif  // LOGTALLY_PIPELINE_HPP_
