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

#include "logtally/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logtally/components.hpp"
#include "logtally/rng.hpp"

namespace logtally {

namespace {

// Extra clearance beyond the requested gap; keeps rasterized regions
// 8-disconnected even when min_gap is 0.
constexpr double kSeparationSlack = 1.5;

struct PlacedDisc {
    double row, col, radius;  // radius includes any roughness allowance
};

bool far_enough(const std::vector<PlacedDisc>& placed, double row, double col,
                double radius, double gap) {
    for (const PlacedDisc& d : placed) {
        const double need = d.radius + radius + gap + kSeparationSlack;
        const double dr = d.row - row;
        const double dc = d.col - col;
        if (dr * dr + dc * dc < need * need) return false;
    }
    return true;
}

// Pixel membership for a (possibly wobbled) disc outline.
bool inside_blob(double pr, double pc, const DiscInstance& inst,
                 double roughness, int lobes, double phase) {
    const double dr = pr - inst.center_row;
    const double dc = pc - inst.center_col;
    const double d = std::hypot(dr, dc);
    if (roughness == 0.0) return d <= inst.radius;
    const double theta = std::atan2(dr, dc);
    const double r = inst.radius *
                     (1.0 + roughness * std::sin(lobes * theta + phase));
    return d <= r;
}

}  // namespace

void SynthSpec::validate() const {
    if (width <= 0 || height <= 0) {
        throw InvalidInput("scene dimensions must be positive");
    }
    if (n_logs < 0) throw InvalidInput("n_logs must be non-negative");
    if (!(radius_min > 0.0) || radius_max < radius_min) {
        throw InvalidInput("need 0 < radius_min <= radius_max");
    }
    if (min_gap < 0.0) throw InvalidInput("min_gap must be non-negative");
    if (noise_blobs < 0) {
        throw InvalidInput("noise_blobs must be non-negative");
    }
    if (noise_blobs > 0 &&
        (noise_area_min < 1 || noise_area_max < noise_area_min)) {
        throw InvalidInput("need 1 <= noise_area_min <= noise_area_max");
    }
    if (roughness < 0.0 || roughness > 0.2) {
        throw InvalidInput("roughness must be in [0, 0.2]");
    }
}

SynthScene generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    const double rough_scale = 1.0 + spec.roughness;
    std::vector<PlacedDisc> placed;
    std::vector<DiscInstance> discs;
    std::vector<int> lobes;
    std::vector<double> phases;

    for (int k = 0; k < spec.n_logs; ++k) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            const double radius =
                rng.range_real(spec.radius_min, spec.radius_max);
            const double reach = radius * rough_scale;
            const int margin = static_cast<int>(std::ceil(reach)) + 1;
            if (2 * margin >= spec.height || 2 * margin >= spec.width) {
                continue;  // disc cannot fit at all, try a smaller draw
            }
            const double row = static_cast<double>(
                rng.range(margin, spec.height - 1 - margin));
            const double col = static_cast<double>(
                rng.range(margin, spec.width - 1 - margin));
            if (!far_enough(placed, row, col, reach, spec.min_gap)) continue;
            placed.push_back({row, col, reach});
            discs.push_back({0, row, col, radius});
            lobes.push_back(static_cast<int>(rng.range(3, 7)));
            phases.push_back(rng.range_real(0.0, 2.0 * std::numbers::pi));
            ok = true;
        }
        if (!ok) {
            throw GenerationFailed(
                "could not place instance " + std::to_string(k + 1) + " of " +
                std::to_string(spec.n_logs) + " (radius range [" +
                std::to_string(spec.radius_min) + ", " +
                std::to_string(spec.radius_max) + "], min_gap " +
                std::to_string(spec.min_gap) + ") after 1000 attempts");
        }
    }

    SynthScene scene;
    scene.gt_instances = LabelMap(spec.width, spec.height);
    scene.gt_mask = BinaryMask(spec.width, spec.height);
    scene.noise_mask = BinaryMask(spec.width, spec.height);

    // Rasterize in placement order first, then renumber so labels follow
    // raster-scan order of first encounter like every other LabelMap.
    for (std::size_t k = 0; k < discs.size(); ++k) {
        const DiscInstance& d = discs[k];
        const double reach = d.radius * rough_scale;
        const int r0 = static_cast<int>(std::floor(d.center_row - reach));
        const int r1 = static_cast<int>(std::ceil(d.center_row + reach));
        const int c0 = static_cast<int>(std::floor(d.center_col - reach));
        const int c1 = static_cast<int>(std::ceil(d.center_col + reach));
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                if (inside_blob(r, c, d, spec.roughness, lobes[k],
                                phases[k])) {
                    scene.gt_instances.at(r, c) =
                        static_cast<std::uint32_t>(k + 1);
                    scene.gt_mask.set(r, c, 1);
                }
            }
        }
    }

    std::vector<std::uint32_t> renumber(discs.size() + 1, 0);
    std::uint32_t next = 0;
    for (std::uint32_t& v : scene.gt_instances.labels) {
        if (v == 0) continue;
        if (renumber[v] == 0) renumber[v] = ++next;
        v = renumber[v];
    }
    scene.gt_instances.component_count = static_cast<int>(next);
    scene.instances.resize(discs.size());
    for (std::size_t k = 0; k < discs.size(); ++k) {
        DiscInstance d = discs[k];
        d.label = renumber[k + 1];
        scene.instances[d.label - 1] = d;
    }

    // Clutter blobs: plain discs sized by target area, packed with the
    // same clearance rule so they never touch an instance.
    for (int k = 0; k < spec.noise_blobs; ++k) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            const int area = static_cast<int>(
                rng.range(spec.noise_area_min, spec.noise_area_max));
            const double radius = std::sqrt(area / std::numbers::pi);
            const int margin = static_cast<int>(std::ceil(radius)) + 1;
            if (2 * margin >= spec.height || 2 * margin >= spec.width) {
                continue;
            }
            const double row = static_cast<double>(
                rng.range(margin, spec.height - 1 - margin));
            const double col = static_cast<double>(
                rng.range(margin, spec.width - 1 - margin));
            if (!far_enough(placed, row, col, radius, spec.min_gap)) continue;
            placed.push_back({row, col, radius});
            NoiseBlob blob{row, col, radius, 0};
            const int r0 = static_cast<int>(std::floor(row - radius));
            const int r1 = static_cast<int>(std::ceil(row + radius));
            const int c0 = static_cast<int>(std::floor(col - radius));
            const int c1 = static_cast<int>(std::ceil(col + radius));
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const double dr = r - row;
                    const double dc = c - col;
                    if (dr * dr + dc * dc <= radius * radius) {
                        scene.noise_mask.set(r, c, 1);
                        ++blob.area;
                    }
                }
            }
            scene.noise.push_back(blob);
            ok = true;
        }
        if (!ok) {
            throw GenerationFailed("could not place noise blob " +
                                   std::to_string(k + 1) + " of " +
                                   std::to_string(spec.noise_blobs) +
                                   " after 1000 attempts");
        }
    }
    return scene;
}

namespace {

std::uint32_t group_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

// Distance from a point to a segment.
double segment_distance(double pr, double pc, double ar, double ac, double br,
                        double bc) {
    const double vr = br - ar, vc = bc - ac;
    const double len2 = vr * vr + vc * vc;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((pr - ar) * vr + (pc - ac) * vc) / len2, 0.0, 1.0);
    }
    return std::hypot(pr - (ar + t * vr), pc - (ac + t * vc));
}

}  // namespace

Perturbed perturb(const SynthScene& scene, const PerturbSpec& spec) {
    const LabelMap& gt = scene.gt_instances;
    if (gt.width <= 0 || gt.height <= 0) {
        throw InvalidInput("perturb requires a generated scene");
    }
    const std::uint32_t n = static_cast<std::uint32_t>(gt.component_count);
    if (spec.extra_noise < 0) {
        throw InvalidInput("extra_noise must be non-negative");
    }

    std::vector<bool> dropped(n + 1, false);
    for (std::uint32_t l : spec.drop_labels) {
        if (l < 1 || l > n) {
            throw InvalidInput("drop label " + std::to_string(l) +
                               " out of range");
        }
        if (dropped[l]) {
            throw InvalidInput("drop label " + std::to_string(l) +
                               " listed twice");
        }
        dropped[l] = true;
    }

    std::vector<std::uint32_t> parent(n + 1);
    for (std::uint32_t l = 0; l <= n; ++l) parent[l] = l;
    for (const auto& [a, b] : spec.merge_pairs) {
        if (a < 1 || a > n || b < 1 || b > n) {
            throw InvalidInput("merge pair label out of range");
        }
        if (a == b) throw InvalidInput("merge pair joins a label to itself");
        if (dropped[a] || dropped[b]) {
            throw InvalidInput("merged label also listed as dropped");
        }
        parent[group_root(parent, a)] = group_root(parent, b);
    }

    const int w = gt.width, h = gt.height;
    BinaryMask pred_mask(w, h);
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        const std::uint32_t l = gt.labels[i];
        if (l != 0 && !dropped[l]) pred_mask.data[i] = 1;
    }

    // Paint a 3 pixel wide corridor between the centroids of every merge
    // pair. A corridor may only touch the two instances it joins (or other
    // members of the same merge group); anything else would silently change
    // the tally this function promises.
    std::vector<std::uint32_t> bridge_group(gt.labels.size(), 0);
    for (const auto& [a, b] : spec.merge_pairs) {
        const DiscInstance& da = scene.instances[a - 1];
        const DiscInstance& db = scene.instances[b - 1];
        const std::uint32_t root = group_root(parent, a);
        const int r0 = static_cast<int>(
            std::floor(std::min(da.center_row, db.center_row) - 2));
        const int r1 = static_cast<int>(
            std::ceil(std::max(da.center_row, db.center_row) + 2));
        const int c0 = static_cast<int>(
            std::floor(std::min(da.center_col, db.center_col) - 2));
        const int c1 = static_cast<int>(
            std::ceil(std::max(da.center_col, db.center_col) + 2));
        for (int r = std::max(r0, 0); r <= std::min(r1, h - 1); ++r) {
            for (int c = std::max(c0, 0); c <= std::min(c1, w - 1); ++c) {
                if (segment_distance(r, c, da.center_row, da.center_col,
                                     db.center_row, db.center_col) > 1.5) {
                    continue;
                }
                // The pixel and its whole 8-neighborhood must stay clear
                // of uninvolved instances and of other groups' bridges.
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = r + dr, nc = c + dc;
                        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                        const std::uint32_t l = gt.at(nr, nc);
                        if (l != 0 &&
                            (dropped[l] || group_root(parent, l) != root)) {
                            throw GenerationFailed(
                                "bridge between " + std::to_string(a) +
                                " and " + std::to_string(b) +
                                " touches instance " + std::to_string(l));
                        }
                        const std::uint32_t bg =
                            bridge_group[static_cast<std::size_t>(nr) * w + nc];
                        if (bg != 0 && bg != root) {
                            throw GenerationFailed(
                                "bridge between " + std::to_string(a) +
                                " and " + std::to_string(b) +
                                " crosses another merge group's bridge");
                        }
                    }
                }
                pred_mask.set(r, c, 1);
                bridge_group[static_cast<std::size_t>(r) * w + c] = root;
            }
        }
    }

    // False detections: small discs kept clear of everything already drawn
    // and of every instance, dropped ones included.
    Rng rng(spec.seed);
    for (int k = 0; k < spec.extra_noise; ++k) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            const double radius = rng.range_real(2.0, 4.0);
            const int margin = static_cast<int>(std::ceil(radius)) + 1;
            if (2 * margin >= h || 2 * margin >= w) break;
            const int row = static_cast<int>(rng.range(margin, h - 1 - margin));
            const int col = static_cast<int>(rng.range(margin, w - 1 - margin));
            const int r0 = row - margin, r1 = row + margin;
            const int c0 = col - margin, c1 = col + margin;
            bool clear = true;
            for (int r = r0; r <= r1 && clear; ++r) {
                for (int c = c0; c <= c1 && clear; ++c) {
                    const double dr = r - row, dc = c - col;
                    if (dr * dr + dc * dc > (radius + 1.5) * (radius + 1.5)) {
                        continue;
                    }
                    clear = !pred_mask.at(r, c) && gt.at(r, c) == 0;
                }
            }
            if (!clear) continue;
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const double dr = r - row, dc = c - col;
                    if (dr * dr + dc * dc <= radius * radius) {
                        pred_mask.set(r, c, 1);
                    }
                }
            }
            ok = true;
        }
        if (!ok) {
            throw GenerationFailed("could not place false detection " +
                                   std::to_string(k + 1) + " of " +
                                   std::to_string(spec.extra_noise));
        }
    }

    Perturbed out;
    out.pred = label(pred_mask, Connectivity::eight);

    std::vector<int> group_size(n + 1, 0);
    for (std::uint32_t l = 1; l <= n; ++l) {
        if (!dropped[l]) ++group_size[group_root(parent, l)];
    }
    for (std::uint32_t l = 1; l <= n; ++l) {
        if (dropped[l]) {
            ++out.expected.e;
        } else if (group_root(parent, l) == l) {
            const int k = group_size[l];
            if (k == 1) {
                ++out.expected.ci;
            } else {
                out.expected.i += k;
            }
        }
    }
    out.expected.n = spec.extra_noise;
    return out;
}

}  // namespace logtally
