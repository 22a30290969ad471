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

#include <cmath>
#include <set>

#include "doctest.h"
#include "logtally/components.hpp"
#include "logtally/morphology.hpp"
#include "logtally/rng.hpp"
#include "oracle.hpp"

using namespace logtally;

TEST_CASE("label basics") {
    BinaryMask empty(8, 8);
    CHECK(label(empty, Connectivity::eight).component_count == 0);
    CHECK(count_logs(label(empty, Connectivity::eight)) == 0);

    BinaryMask dot(8, 8);
    dot.set(3, 3, true);
    CHECK(label(dot, Connectivity::eight).component_count == 1);

    BinaryMask diag(8, 8);
    diag.set(0, 0, true);
    diag.set(1, 1, true);
    CHECK(label(diag, Connectivity::eight).component_count == 1);
    CHECK(label(diag, Connectivity::four).component_count == 2);
}

TEST_CASE("labels follow raster-scan first encounter") {
    BinaryMask mask(6, 3);
    mask.set(0, 4, true);
    mask.set(1, 1, true);
    mask.set(2, 0, true);
    const LabelMap lm = label(mask, Connectivity::four);
    CHECK(lm.at(0, 4) == 1);
    CHECK(lm.at(1, 1) == 2);
    CHECK(lm.at(2, 0) == 3);
}

TEST_CASE("u-shaped merge keeps a single component") {
    // Two vertical arms meet at the bottom only; provisional labels differ
    // until the final row joins them.
    BinaryMask mask(5, 5);
    for (int r = 0; r < 5; ++r) {
        mask.set(r, 0, true);
        mask.set(r, 4, true);
    }
    for (int c = 0; c < 5; ++c) mask.set(4, c, true);
    const LabelMap lm = label(mask, Connectivity::four);
    CHECK(lm.component_count == 1);
    CHECK(count_logs(lm) == 1);
}

TEST_CASE("label agrees with the flood-fill oracle") {
    Rng rng(201);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = rng.range(1, 32);
        const int h = rng.range(1, 32);
        const double fill = 0.2 + 0.6 * rng.unit();
        const BinaryMask mask = oracle::random_mask(rng, w, h, fill);
        for (Connectivity conn : {Connectivity::four, Connectivity::eight}) {
            const LabelMap fast = label(mask, conn);
            const LabelMap slow = oracle::bfs_label(mask, conn);
            CHECK(fast.component_count == slow.component_count);
            CHECK(oracle::same_partition(fast, slow));
            CHECK(fast.labels == slow.labels);
        }
    }
}

TEST_CASE("labeling the same mask twice is bit-identical") {
    Rng rng(202);
    const BinaryMask mask = oracle::random_blobs(rng, 48, 48, 5);
    const LabelMap a = label(mask, Connectivity::eight);
    const LabelMap b = label(mask, Connectivity::eight);
    CHECK(a.labels == b.labels);
    CHECK(a.component_count == b.component_count);
}

TEST_CASE("every foreground pixel gets exactly one label") {
    Rng rng(203);
    const BinaryMask mask = oracle::random_mask(rng, 40, 30, 0.5);
    const LabelMap lm = label(mask, Connectivity::eight);
    std::set<std::uint32_t> seen;
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (mask.data[i]) {
            CHECK(lm.labels[i] >= 1);
            CHECK(lm.labels[i] <=
                  static_cast<std::uint32_t>(lm.component_count));
            seen.insert(lm.labels[i]);
        } else {
            CHECK(lm.labels[i] == 0);
        }
    }
    CHECK(static_cast<int>(seen.size()) == lm.component_count);
}

TEST_CASE("filter_components drops small areas and renumbers") {
    BinaryMask mask(30, 20);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 6; ++c) mask.set(r, c, true);
    }
    for (int r = 10; r < 20; ++r) {
        for (int c = 10; c < 20; ++c) mask.set(r, c, true);
    }
    const LabelMap lm = label(mask, Connectivity::eight);
    REQUIRE(lm.component_count == 2);

    const LabelMap kept = filter_components(lm, 60);
    CHECK(kept.component_count == 1);
    CHECK(kept.at(15, 15) == 1);
    CHECK(kept.at(2, 2) == 0);

    const LabelMap identity = filter_components(lm, 0);
    CHECK(identity.labels == lm.labels);

    const LabelMap none = filter_components(lm, 1000);
    CHECK(none.component_count == 0);
    for (auto v : none.labels) CHECK(v == 0);
}

TEST_CASE("stats reports exact geometry") {
    SUBCASE("single pixel") {
        BinaryMask mask(8, 8);
        mask.set(3, 4, true);
        const auto s = stats(label(mask, Connectivity::eight));
        REQUIRE(s.size() == 1);
        CHECK(s[0].label == 1);
        CHECK(s[0].area == 1);
        CHECK(s[0].centroid_row == 3.0);
        CHECK(s[0].centroid_col == 4.0);
        CHECK(s[0].min_row == 3);
        CHECK(s[0].max_col == 4);
        CHECK(s[0].equivalent_radius ==
              doctest::Approx(0.5641895835).epsilon(1e-9));
    }

    SUBCASE("2x2 block") {
        BinaryMask mask(4, 4);
        mask.set(0, 0, true);
        mask.set(0, 1, true);
        mask.set(1, 0, true);
        mask.set(1, 1, true);
        const auto s = stats(label(mask, Connectivity::four));
        REQUIRE(s.size() == 1);
        CHECK(s[0].area == 4);
        CHECK(s[0].centroid_row == 0.5);
        CHECK(s[0].centroid_col == 0.5);
    }

    SUBCASE("empty map") {
        BinaryMask mask(4, 4);
        CHECK(stats(label(mask, Connectivity::four)).empty());
    }

    SUBCASE("centroid stays inside the bbox") {
        Rng rng(204);
        const BinaryMask mask = oracle::random_blobs(rng, 32, 32, 4);
        for (const ComponentStats& cs :
             stats(label(mask, Connectivity::eight))) {
            CHECK(cs.centroid_row >= cs.min_row);
            CHECK(cs.centroid_row <= cs.max_row);
            CHECK(cs.centroid_col >= cs.min_col);
            CHECK(cs.centroid_col <= cs.max_col);
            CHECK(cs.area >= 1);
            CHECK(cs.equivalent_radius > 0.0);
        }
    }
}

TEST_CASE("eroded components nest inside their parents") {
    Rng rng(205);
    const BinaryMask mask = oracle::random_blobs(rng, 48, 48, 5);
    const LabelMap parents = label(mask, Connectivity::eight);
    const BinaryMask shrunk = erode(mask, StructuringElement::square3, 2);
    const LabelMap children = label(shrunk, Connectivity::eight);

    std::vector<std::set<std::uint32_t>> parents_of(
        static_cast<std::size_t>(children.component_count) + 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (children.labels[i]) {
            parents_of[children.labels[i]].insert(parents.labels[i]);
        }
    }
    for (int k = 1; k <= children.component_count; ++k) {
        CHECK(parents_of[k].size() == 1);
        CHECK(*parents_of[k].begin() != 0);
    }
}
