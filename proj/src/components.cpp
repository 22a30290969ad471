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

#include "logtally/components.hpp"

#include <cmath>
#include <numbers>

namespace logtally {

namespace {

std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
    std::uint32_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {  // path compression
        const std::uint32_t next = parent[x];
        parent[x] = root;
        x = next;
    }
    return root;
}

void unite(std::vector<std::uint32_t>& parent, std::uint32_t a,
           std::uint32_t b) {
    const std::uint32_t ra = find_root(parent, a);
    const std::uint32_t rb = find_root(parent, b);
    if (ra == rb) return;
    // Keep the smaller provisional label as root; provisional labels are
    // handed out in raster order, so this preserves scan order.
    if (ra < rb) {
        parent[rb] = ra;
    } else {
        parent[ra] = rb;
    }
}

void check_label_map(const LabelMap& lm) {
    if (lm.width <= 0 || lm.height <= 0) {
        throw InvalidInput("label map is empty");
    }
}

}  // namespace

LabelMap label(const BinaryMask& mask, Connectivity conn) {
    if (mask.width <= 0 || mask.height <= 0) {
        throw InvalidInput("cannot label an empty mask");
    }
    const int w = mask.width;
    const int h = mask.height;
    LabelMap out(w, h);

    std::vector<std::uint32_t> parent(1, 0);  // parent[0] unused
    std::uint32_t next = 1;

    // First pass: provisional labels from the already-scanned neighbors.
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            std::uint32_t best = 0;
            std::uint32_t neigh[4];
            int nn = 0;
            if (c > 0 && mask.at(r, c - 1)) neigh[nn++] = out.at(r, c - 1);
            if (r > 0 && mask.at(r - 1, c)) neigh[nn++] = out.at(r - 1, c);
            if (conn == Connectivity::eight) {
                if (r > 0 && c > 0 && mask.at(r - 1, c - 1)) {
                    neigh[nn++] = out.at(r - 1, c - 1);
                }
                if (r > 0 && c + 1 < w && mask.at(r - 1, c + 1)) {
                    neigh[nn++] = out.at(r - 1, c + 1);
                }
            }
            for (int i = 0; i < nn; ++i) {
                if (best == 0 || neigh[i] < best) best = neigh[i];
            }
            if (best == 0) {
                best = next++;
                parent.push_back(best);
            } else {
                for (int i = 0; i < nn; ++i) unite(parent, best, neigh[i]);
            }
            out.at(r, c) = best;
        }
    }

    // Second pass: resolve roots and renumber in raster order of first
    // encounter.
    std::vector<std::uint32_t> compact(next, 0);
    std::uint32_t final_count = 0;
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        if (out.labels[i] == 0) continue;
        const std::uint32_t root = find_root(parent, out.labels[i]);
        if (compact[root] == 0) compact[root] = ++final_count;
        out.labels[i] = compact[root];
    }
    out.component_count = static_cast<int>(final_count);
    return out;
}

int count_logs(const LabelMap& lm) {
    check_label_map(lm);
    return lm.component_count;
}

LabelMap filter_components(const LabelMap& lm, int min_area) {
    check_label_map(lm);
    if (min_area < 0) {
        throw InvalidInput("min_area must be non-negative");
    }
    const std::size_t n_labels = static_cast<std::size_t>(lm.component_count);
    std::vector<std::int64_t> area(n_labels + 1, 0);
    for (std::uint32_t v : lm.labels) ++area[v];
    area[0] = 0;

    std::vector<std::uint32_t> renumber(n_labels + 1, 0);
    std::uint32_t next = 0;
    for (std::size_t l = 1; l <= n_labels; ++l) {
        if (area[l] >= min_area) renumber[l] = ++next;
    }

    LabelMap out(lm.width, lm.height);
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        out.labels[i] = renumber[lm.labels[i]];
    }
    out.component_count = static_cast<int>(next);
    return out;
}

std::vector<ComponentStats> stats(const LabelMap& lm) {
    check_label_map(lm);
    const std::size_t n_labels = static_cast<std::size_t>(lm.component_count);
    std::vector<ComponentStats> out(n_labels);
    std::vector<std::int64_t> sum_r(n_labels + 1, 0), sum_c(n_labels + 1, 0);
    for (std::size_t l = 1; l <= n_labels; ++l) {
        out[l - 1].label = static_cast<std::uint32_t>(l);
        out[l - 1].min_row = lm.height;
        out[l - 1].min_col = lm.width;
        out[l - 1].max_row = -1;
        out[l - 1].max_col = -1;
    }
    for (int r = 0; r < lm.height; ++r) {
        for (int c = 0; c < lm.width; ++c) {
            const std::uint32_t v = lm.at(r, c);
            if (v == 0) continue;
            ComponentStats& s = out[v - 1];
            ++s.area;
            sum_r[v] += r;
            sum_c[v] += c;
            s.min_row = std::min(s.min_row, r);
            s.min_col = std::min(s.min_col, c);
            s.max_row = std::max(s.max_row, r);
            s.max_col = std::max(s.max_col, c);
        }
    }
    for (std::size_t l = 1; l <= n_labels; ++l) {
        ComponentStats& s = out[l - 1];
        if (s.area == 0) {
            throw InvalidInput("label map has a gap at label " +
                               std::to_string(l));
        }
        s.centroid_row = static_cast<double>(sum_r[l]) / s.area;
        s.centroid_col = static_cast<double>(sum_c[l]) / s.area;
        s.equivalent_radius = std::sqrt(s.area / std::numbers::pi);
    }
    return out;
}

}  // namespace logtally
