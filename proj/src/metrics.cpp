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

#include "logtally/metrics.hpp"

#include <unordered_map>

namespace logtally {

void MatchParams::validate() const {
    if (!(coverage_tau > 0.0) || coverage_tau > 1.0) {
        throw InvalidInput("coverage_tau must be in (0, 1]");
    }
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width <= 0 || pred.height <= 0) {
        throw InvalidInput("confusion requires non-empty masks");
    }
    if (pred.width != gt.width || pred.height != gt.height) {
        throw InvalidInput("confusion: mask dimensions differ");
    }
    ConfusionCounts out;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const bool p = pred.data[i] != 0;
        const bool g = gt.data[i] != 0;
        if (p && g) {
            ++out.tp;
        } else if (p && !g) {
            ++out.fp;
        } else if (!p && g) {
            ++out.fn;
        } else {
            ++out.tn;
        }
    }
    return out;
}

PixelScores pixel_scores(const ConfusionCounts& c) {
    const std::uint64_t total = c.total();
    if (total == 0) {
        throw InvalidInput("pixel_scores: confusion tally is empty");
    }
    PixelScores s;
    s.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
    s.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) /
                                        static_cast<double>(c.tp + c.fp)
                                  : 0.0;
    s.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) /
                                     static_cast<double>(c.tp + c.fn)
                               : 0.0;
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    s.iou = c.tp + c.fp + c.fn > 0
                ? static_cast<double>(c.tp) /
                      static_cast<double>(c.tp + c.fp + c.fn)
                : 0.0;

    // Chance agreement from the marginals, in exact integer arithmetic so
    // the degenerate case is detected reliably.
    const std::uint64_t pe_num =
        (c.tp + c.fn) * (c.tp + c.fp) + (c.fp + c.tn) * (c.fn + c.tn);
    const std::uint64_t pe_den = total * total;
    if (pe_num == pe_den) {
        s.kappa = 1.0;
    } else {
        const double pe = static_cast<double>(pe_num) /
                          static_cast<double>(pe_den);
        s.kappa = (s.accuracy - pe) / (1.0 - pe);
    }
    return s;
}

double iss(const CountTally& t) {
    if (t.ci < 0 || t.e < 0 || t.i < 0 || t.n < 0) {
        throw InvalidInput("count tally entries must be non-negative");
    }
    const int denom = t.ci + t.e + t.i + t.n;
    if (denom <= 0) {
        throw InvalidInput("iss: count tally is empty");
    }
    return static_cast<double>(t.ci) / denom;
}

double accuracy_logs(const CountTally& t) {
    if (t.ci < 0 || t.e < 0 || t.i < 0 || t.n < 0) {
        throw InvalidInput("count tally entries must be non-negative");
    }
    const int denom = t.ci + t.e + t.n;
    if (denom <= 0) {
        throw InvalidInput("accuracy_logs: ci + e + n must be positive");
    }
    return static_cast<double>(t.ci) / denom;
}

InstanceMatch match_instances(const LabelMap& pred, const LabelMap& gt,
                              const MatchParams& params) {
    params.validate();
    if (pred.width <= 0 || pred.height <= 0) {
        throw InvalidInput("match_instances requires non-empty label maps");
    }
    if (pred.width != gt.width || pred.height != gt.height) {
        throw InvalidInput("match_instances: label map dimensions differ");
    }
    const std::size_t np = static_cast<std::size_t>(pred.component_count);
    const std::size_t ng = static_cast<std::size_t>(gt.component_count);

    std::vector<std::int64_t> gt_area(ng + 1, 0);
    for (std::uint32_t g : gt.labels) ++gt_area[g];
    gt_area[0] = 0;

    // Pairwise overlap counts, dense while small.
    const std::size_t cells = (np + 1) * (ng + 1);
    std::vector<std::int64_t> overlap_dense;
    std::unordered_map<std::uint64_t, std::int64_t> overlap_sparse;
    const bool dense = cells <= (std::size_t{1} << 24);
    if (dense) overlap_dense.assign(cells, 0);
    for (std::size_t i = 0; i < pred.labels.size(); ++i) {
        const std::uint32_t p = pred.labels[i];
        const std::uint32_t g = gt.labels[i];
        if (p == 0 || g == 0) continue;
        if (dense) {
            ++overlap_dense[static_cast<std::size_t>(p) * (ng + 1) + g];
        } else {
            ++overlap_sparse[(static_cast<std::uint64_t>(p) << 32) | g];
        }
    }
    auto overlap = [&](std::uint32_t p, std::uint32_t g) -> std::int64_t {
        if (dense) return overlap_dense[static_cast<std::size_t>(p) * (ng + 1) + g];
        const auto it = overlap_sparse.find(
            (static_cast<std::uint64_t>(p) << 32) | g);
        return it == overlap_sparse.end() ? 0 : it->second;
    };

    // Which detections cover which instances, before assignment.
    std::vector<std::vector<std::uint32_t>> covers(np + 1);
    std::vector<std::uint32_t> best_pred(ng + 1, 0);
    std::vector<std::int64_t> best_overlap(ng + 1, 0);
    if (dense) {
        for (std::uint32_t p = 1; p <= np; ++p) {
            for (std::uint32_t g = 1; g <= ng; ++g) {
                const std::int64_t ov = overlap(p, g);
                if (ov <= 0) continue;
                const double coverage =
                    static_cast<double>(ov) / static_cast<double>(gt_area[g]);
                if (coverage < params.coverage_tau) continue;
                covers[p].push_back(g);
                if (ov > best_overlap[g]) {
                    best_overlap[g] = ov;
                    best_pred[g] = p;
                }
            }
        }
    } else {
        for (const auto& [key, ov] : overlap_sparse) {
            const std::uint32_t p = static_cast<std::uint32_t>(key >> 32);
            const std::uint32_t g = static_cast<std::uint32_t>(key);
            const double coverage =
                static_cast<double>(ov) / static_cast<double>(gt_area[g]);
            if (coverage < params.coverage_tau) continue;
            covers[p].push_back(g);
            if (ov > best_overlap[g] ||
                (ov == best_overlap[g] && (best_pred[g] == 0 || p < best_pred[g]))) {
                best_overlap[g] = ov;
                best_pred[g] = p;
            }
        }
    }

    InstanceMatch out;
    out.gt_assignment.assign(ng + 1, 0);
    out.pred_assigned.assign(np + 1, {});
    for (std::uint32_t g = 1; g <= ng; ++g) {
        if (best_pred[g] != 0) {
            out.gt_assignment[g] = best_pred[g];
            out.pred_assigned[best_pred[g]].push_back(g);
        } else {
            ++out.tally.e;
        }
    }
    for (std::uint32_t p = 1; p <= np; ++p) {
        const std::size_t k = out.pred_assigned[p].size();
        if (k == 1) {
            ++out.tally.ci;
        } else if (k >= 2) {
            out.tally.i += static_cast<int>(k);
        } else if (covers[p].empty()) {
            ++out.tally.n;
        }
    }
    return out;
}

}  // namespace logtally
