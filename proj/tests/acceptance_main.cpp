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

// End-to-end acceptance checks. Each check prints exactly one line,
//
//     [PASS] name (detail)
//     [FAIL] name (detail)
//     [SKIP] name (detail)
//
// and the process exit code is the number of failures, so this binary
// doubles as a release gate under ctest.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "logtally/components.hpp"
#include "logtally/error.hpp"
#include "logtally/hough.hpp"
#include "logtally/image_io.hpp"
#include "logtally/metrics.hpp"
#include "logtally/morphology.hpp"
#include "logtally/pipeline.hpp"
#include "logtally/raster.hpp"
#include "logtally/rng.hpp"
#include "logtally/service.hpp"
#include "logtally/synthgen.hpp"
#include "logtally/volume.hpp"
#include "oracle.hpp"

namespace {

namespace lt = logtally;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start)
        .count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct Outcome {
    enum class Status { pass, fail, skip } status;
    std::string detail;
};

Outcome pass(std::string detail) {
    return {Outcome::Status::pass, std::move(detail)};
}
Outcome fail(std::string detail) {
    return {Outcome::Status::fail, std::move(detail)};
}
Outcome skip(std::string detail) {
    return {Outcome::Status::skip, std::move(detail)};
}

int g_failures = 0;

void run(const char* name, const std::function<Outcome()>& check) {
    Outcome outcome{Outcome::Status::fail, ""};
    try {
        outcome = check();
    } catch (const std::exception& e) {
        outcome = fail(std::string("unhandled exception: ") + e.what());
    }
    const char* tag = "[FAIL]";
    if (outcome.status == Outcome::Status::pass) tag = "[PASS]";
    if (outcome.status == Outcome::Status::skip) tag = "[SKIP]";
    std::printf("%s %s (%s)\n", tag, name, outcome.detail.c_str());
    std::fflush(stdout);
    if (outcome.status == Outcome::Status::fail) ++g_failures;
}

// Retry generation with stepped seeds so an unlucky packing draw does not
// abort a statistical check.
lt::SynthScene generate_retrying(lt::SynthSpec spec, int tries = 60) {
    for (int attempt = 0;; ++attempt) {
        try {
            return lt::generate(spec);
        } catch (const lt::GenerationFailed&) {
            if (attempt + 1 >= tries) throw;
            spec.seed += 1;
        }
    }
}

bool perturbed_retrying(lt::SynthSpec spec, lt::PerturbSpec perturb_spec,
                        lt::SynthScene& scene_out, lt::Perturbed& out,
                        int tries = 60) {
    for (int attempt = 0; attempt < tries; ++attempt) {
        try {
            lt::SynthScene scene = lt::generate(spec);
            out = lt::perturb(scene, perturb_spec);
            scene_out = std::move(scene);
            return true;
        } catch (const lt::GenerationFailed&) {
            spec.seed += 1;
            perturb_spec.seed += 1;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------

Outcome check_iss_reference_tallies() {
    struct Case {
        int ci, e, i, n;
        double percent;
    };
    const std::array<Case, 10> cases = {{{22, 0, 7, 2, 70.97},
                                         {13, 0, 10, 3, 50.00},
                                         {13, 1, 5, 4, 56.52},
                                         {11, 0, 6, 1, 61.11},
                                         {16, 0, 7, 3, 61.54},
                                         {17, 2, 4, 2, 68.00},
                                         {10, 0, 12, 5, 37.04},
                                         {12, 3, 8, 2, 48.00},
                                         {16, 0, 3, 2, 76.19},
                                         {14, 0, 6, 1, 66.67}}};
    int ok = 0;
    double worst = 0.0;
    for (const Case& c : cases) {
        const double got = lt::iss({c.ci, c.e, c.i, c.n});
        const double err = std::fabs(got - c.percent / 100.0);
        worst = std::max(worst, err);
        if (err <= 1e-4) ++ok;
    }
    if (ok != static_cast<int>(cases.size())) {
        return fail(fmt("%d/%zu tallies within 1e-4, worst error %.2e", ok,
                        cases.size(), worst));
    }
    return pass(fmt("10/10 reference tallies within 1e-4, worst error %.2e",
                    worst));
}

Outcome check_pixel_metric_oracle() {
    const auto start = Clock::now();
    lt::Rng rng(0xA2);
    double worst = 0.0;
    double worst_identity = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double fill_pred = rng.range_real(0.05, 0.95);
        const double fill_gt = rng.range_real(0.05, 0.95);
        const lt::BinaryMask pred = oracle::random_mask(rng, 32, 32, fill_pred);
        const lt::BinaryMask gt = oracle::random_mask(rng, 32, 32, fill_gt);
        const lt::ConfusionCounts counts = lt::confusion(pred, gt);
        const lt::PixelScores s = lt::pixel_scores(counts);
        const oracle::RefScores r = oracle::ref_scores(counts);
        const std::array<double, 6> got = {s.accuracy, s.precision, s.recall,
                                           s.f1,       s.kappa,     s.iou};
        const std::array<long double, 6> want = {r.accuracy, r.precision,
                                                 r.recall,   r.f1,
                                                 r.kappa,    r.iou};
        for (int k = 0; k < 6; ++k) {
            const double err = std::fabs(
                got[k] - static_cast<double>(want[k]));
            worst = std::max(worst, err);
        }
        const double identity =
            std::fabs(s.f1 - 2.0 * s.iou / (1.0 + s.iou));
        worst_identity = std::max(worst_identity, identity);
    }
    const double elapsed = ms_since(start);
    if (worst > 1e-12) {
        return fail(fmt("metric deviation %.2e exceeds 1e-12", worst));
    }
    if (worst_identity > 1e-12) {
        return fail(
            fmt("f1 vs iou identity off by %.2e", worst_identity));
    }
    if (elapsed > 5000.0) {
        return fail(fmt("took %.0f ms, budget 5000 ms", elapsed));
    }
    return pass(fmt("1000 random 32x32 pairs, worst deviation %.1e, "
                    "f1 identity within %.1e, %.0f ms",
                    worst, worst_identity, elapsed));
}

Outcome check_labeling_oracle() {
    const auto start = Clock::now();
    lt::Rng rng(0xA3);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        lt::BinaryMask mask =
            (trial % 2 == 0)
                ? oracle::random_mask(rng, 64, 64, rng.range_real(0.2, 0.8))
                : oracle::random_blobs(rng, 64, 64,
                                       static_cast<int>(rng.range(1, 6)));
        for (lt::Connectivity conn :
             {lt::Connectivity::four, lt::Connectivity::eight}) {
            const lt::LabelMap fast = lt::label(mask, conn);
            const lt::LabelMap slow = oracle::bfs_label(mask, conn);
            if (fast.labels != slow.labels ||
                fast.component_count != slow.component_count) {
                ++mismatches;
            }
        }
    }
    const double elapsed = ms_since(start);
    if (mismatches > 0) {
        return fail(fmt("%d of 2000 labelings differ from flood fill",
                        mismatches));
    }
    if (elapsed > 10000.0) {
        return fail(fmt("took %.0f ms, budget 10000 ms", elapsed));
    }
    return pass(fmt("1000 random 64x64 masks, both connectivities, "
                    "labels identical to flood fill, %.0f ms",
                    elapsed));
}

Outcome check_morphology_distance_equivalence() {
    const auto start = Clock::now();
    lt::Rng rng(0xA4);
    int erosion_bad = 0;
    int dynamic_bad = 0;
    double worst_edt = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int width = static_cast<int>(rng.range(8, 32));
        const int height = static_cast<int>(rng.range(8, 32));
        lt::BinaryMask mask =
            (trial % 2 == 0)
                ? oracle::random_mask(rng, width, height,
                                      rng.range_real(0.3, 0.7))
                : oracle::random_blobs(rng, width, height,
                                       static_cast<int>(rng.range(1, 4)));
        const std::vector<int> cheb = oracle::brute_chebyshev(mask);
        for (int k : {1, 5, 15}) {
            const lt::BinaryMask eroded =
                lt::erode(mask, lt::StructuringElement::square3, k);
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const bool want =
                        mask.at(r, c) &&
                        cheb[static_cast<std::size_t>(r) * width + c] > k;
                    if (static_cast<bool>(eroded.at(r, c)) != want) {
                        ++erosion_bad;
                    }
                }
            }
        }
        const lt::DistanceField brute = oracle::brute_edt(mask);
        const lt::DistanceField field = lt::edt(mask);
        for (std::size_t p = 0; p < brute.values.size(); ++p) {
            worst_edt = std::max(
                worst_edt, std::fabs(brute.values[p] - field.values[p]));
        }
        for (double radius : {1.0, 5.0, 15.0}) {
            const lt::BinaryMask shrunk = lt::dynamic_erode(mask, radius);
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const bool want = mask.at(r, c) &&
                                      brute.at(r, c) > radius;
                    if (static_cast<bool>(shrunk.at(r, c)) != want) {
                        ++dynamic_bad;
                    }
                }
            }
        }
    }
    lt::BinaryMask disc(64, 64);
    oracle::draw_disc(disc, 32.0, 32.0, 10.0);
    const std::size_t after5 =
        lt::erode(disc, lt::StructuringElement::square3, 5).foreground_count();
    const std::size_t after15 =
        lt::erode(disc, lt::StructuringElement::square3, 15)
            .foreground_count();
    const double elapsed = ms_since(start);
    if (erosion_bad > 0) {
        return fail(fmt("%d pixels disagree with Chebyshev threshold",
                        erosion_bad));
    }
    if (worst_edt > 1e-9) {
        return fail(fmt("distance field deviates by %.2e", worst_edt));
    }
    if (dynamic_bad > 0) {
        return fail(fmt("%d pixels disagree with Euclidean threshold",
                        dynamic_bad));
    }
    if (after5 == 0 || after15 != 0) {
        return fail(fmt("radius-10 disc: %zu px after 5 iterations, "
                        "%zu px after 15",
                        after5, after15));
    }
    if (elapsed > 10000.0) {
        return fail(fmt("took %.0f ms, budget 10000 ms", elapsed));
    }
    return pass(fmt("200 masks, k in {1,5,15}: erosion matches Chebyshev "
                    "threshold, dynamic erosion matches Euclidean field "
                    "(worst %.1e), radius-10 disc gone after 15 iterations, "
                    "%.0f ms",
                    worst_edt, elapsed));
}

Outcome check_reconstruction_laws() {
    const auto start = Clock::now();
    lt::Rng rng(0xA5);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        lt::GrayImage mask(16, 16);
        lt::GrayImage marker(16, 16);
        for (std::size_t p = 0; p < mask.data.size(); ++p) {
            mask.data[p] = static_cast<std::uint8_t>(rng.below(256));
            const int drop = static_cast<int>(rng.below(256));
            marker.data[p] = static_cast<std::uint8_t>(
                std::max(0, static_cast<int>(mask.data[p]) - drop));
        }
        const lt::Connectivity conn = (trial % 2 == 0)
                                          ? lt::Connectivity::eight
                                          : lt::Connectivity::four;
        const lt::GrayImage rec = lt::reconstruct(marker, mask, conn);
        for (std::size_t p = 0; p < mask.data.size(); ++p) {
            if (rec.data[p] < marker.data[p] || rec.data[p] > mask.data[p]) {
                ++violations;
            }
        }
        const lt::GrayImage again = lt::reconstruct(rec, mask, conn);
        if (again.data != rec.data) ++violations;
        const lt::GrayImage ref = oracle::fixpoint_reconstruct(marker, mask,
                                                               conn);
        if (ref.data != rec.data) ++violations;
    }

    // Two separated plateaus; a marker inside the lower one must recover
    // exactly that plateau and never leak into the higher one.
    lt::GrayImage mask(16, 16);
    for (int r = 2; r <= 6; ++r) {
        for (int c = 2; c <= 6; ++c) mask.at(r, c) = 100;
    }
    for (int r = 9; r <= 13; ++r) {
        for (int c = 9; c <= 13; ++c) mask.at(r, c) = 200;
    }
    int plateau_bad = 0;
    for (lt::Connectivity conn :
         {lt::Connectivity::four, lt::Connectivity::eight}) {
        lt::GrayImage marker(16, 16);
        marker.at(4, 4) = 100;
        const lt::GrayImage rec = lt::reconstruct(marker, mask, conn);
        for (int r = 0; r < 16; ++r) {
            for (int c = 0; c < 16; ++c) {
                const bool low = r >= 2 && r <= 6 && c >= 2 && c <= 6;
                const std::uint8_t want = low ? 100 : 0;
                if (rec.at(r, c) != want) ++plateau_bad;
            }
        }
    }
    const double elapsed = ms_since(start);
    if (violations > 0) {
        return fail(fmt("%d law violations over 100 marker/mask pairs",
                        violations));
    }
    if (plateau_bad > 0) {
        return fail(fmt("%d pixels wrong in the two-plateau case",
                        plateau_bad));
    }
    if (elapsed > 5000.0) {
        return fail(fmt("took %.0f ms, budget 5000 ms", elapsed));
    }
    return pass(fmt("100 random 16x16 pairs: sandwich bounds, idempotence "
                    "and fixpoint agreement hold; two-plateau case exact, "
                    "%.0f ms",
                    elapsed));
}

Outcome check_hough_synthetic_scenes() {
    const auto start = Clock::now();
    lt::Rng rng(0xA6);
    const int kWidth = 420;
    const int kHeight = 340;
    const int kScenes = 200;
    int exact = 0;
    for (int trial = 0; trial < kScenes; ++trial) {
        struct Disc {
            int row, col;
            double radius;
        };
        std::vector<Disc> discs;
        const int wanted = 1 + static_cast<int>(rng.below(3));
        for (int d = 0; d < wanted; ++d) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                const double radius = rng.range_real(5.0, 60.0);
                const int margin = static_cast<int>(radius) + 5;
                const int row = static_cast<int>(
                    rng.range(margin, kHeight - 1 - margin));
                const int col = static_cast<int>(
                    rng.range(margin, kWidth - 1 - margin));
                bool separated = true;
                for (const Disc& other : discs) {
                    const double dr = row - other.row;
                    const double dc = col - other.col;
                    const double need = radius + other.radius + 12.0;
                    if (dr * dr + dc * dc < need * need) {
                        separated = false;
                        break;
                    }
                }
                if (separated) {
                    discs.push_back({row, col, radius});
                    break;
                }
            }
        }
        lt::BinaryMask mask(kWidth, kHeight);
        for (const Disc& d : discs) {
            oracle::draw_disc(mask, d.row, d.col, d.radius);
        }
        const std::vector<lt::Circle> found =
            lt::detect_circles(mask, lt::HoughParams{});
        if (found.size() != discs.size()) continue;
        std::vector<bool> used(found.size(), false);
        bool all_matched = true;
        for (const Disc& d : discs) {
            bool matched = false;
            for (std::size_t k = 0; k < found.size(); ++k) {
                if (used[k]) continue;
                const double dr = found[k].center.row - d.row;
                const double dc = found[k].center.col - d.col;
                if (dr * dr + dc * dc <= 4.0 &&
                    std::fabs(found[k].radius - d.radius) <= 2.0) {
                    used[k] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                all_matched = false;
                break;
            }
        }
        if (all_matched) ++exact;
    }
    const double elapsed = ms_since(start);
    if (exact < 190) {
        return fail(fmt("%d/%d scenes exact, need at least 190", exact,
                        kScenes));
    }
    if (elapsed > 60000.0) {
        return fail(fmt("took %.0f ms, budget 60000 ms", elapsed));
    }
    return pass(fmt("%d/%d scenes with 1-3 discs (radii 5-60) recovered "
                    "exactly, centers and radii within 2 px, %.0f ms",
                    exact, kScenes, elapsed));
}

Outcome check_instance_tally_semantics() {
    const auto start = Clock::now();

    auto tally_of = [](const lt::SynthScene& scene,
                       const lt::Perturbed& perturbed) {
        const lt::BinaryMask pred_mask = lt::labels_to_mask(perturbed.pred);
        const lt::LabelMap pred = lt::label(pred_mask,
                                            lt::Connectivity::eight);
        return lt::match_instances(pred, scene.gt_instances).tally;
    };
    auto same_tally = [](const lt::CountTally& a, const lt::CountTally& b) {
        return a.ci == b.ci && a.e == b.e && a.i == b.i && a.n == b.n;
    };

    lt::SynthSpec merge2_spec;
    merge2_spec.width = 256;
    merge2_spec.height = 256;
    merge2_spec.n_logs = 5;
    merge2_spec.radius_min = 10.0;
    merge2_spec.radius_max = 16.0;
    merge2_spec.min_gap = 6.0;
    merge2_spec.seed = 1700;
    lt::PerturbSpec merge2;
    merge2.merge_pairs = {{1, 2}};
    merge2.seed = 17;
    lt::SynthScene scene2;
    lt::Perturbed out2;
    if (!perturbed_retrying(merge2_spec, merge2, scene2, out2)) {
        return fail("could not realize the merge-of-two scene");
    }
    const lt::CountTally tally2 = tally_of(scene2, out2);
    if (out2.expected.i != 2 || !same_tally(tally2, out2.expected)) {
        return fail(fmt("merge of two: expected i == 2, matcher said "
                        "ci %d e %d i %d n %d",
                        tally2.ci, tally2.e, tally2.i, tally2.n));
    }

    lt::SynthSpec merge3_spec = merge2_spec;
    merge3_spec.width = 320;
    merge3_spec.height = 320;
    merge3_spec.n_logs = 6;
    merge3_spec.seed = 2300;
    lt::PerturbSpec merge3;
    merge3.merge_pairs = {{1, 2}, {2, 3}};
    merge3.seed = 23;
    lt::SynthScene scene3;
    lt::Perturbed out3;
    if (!perturbed_retrying(merge3_spec, merge3, scene3, out3)) {
        return fail("could not realize the merge-of-three scene");
    }
    const lt::CountTally tally3 = tally_of(scene3, out3);
    if (out3.expected.i != 3 || !same_tally(tally3, out3.expected)) {
        return fail(fmt("chained merge of three: expected i == 3, matcher "
                        "said ci %d e %d i %d n %d",
                        tally3.ci, tally3.e, tally3.i, tally3.n));
    }

    lt::Rng rng(0xA7);
    int agreed = 0;
    const int kScenes = 100;
    for (int trial = 0; trial < kScenes; ++trial) {
        lt::SynthSpec spec;
        spec.width = 288;
        spec.height = 288;
        spec.n_logs = 4 + static_cast<int>(rng.below(5));
        spec.radius_min = 8.0;
        spec.radius_max = 16.0;
        spec.min_gap = 6.0;
        spec.seed = 9000 + static_cast<std::uint64_t>(trial) * 131;
        lt::PerturbSpec perturb_spec;
        perturb_spec.seed = 5000 + static_cast<std::uint64_t>(trial);
        const int kind = static_cast<int>(rng.below(4));
        const auto n = static_cast<std::uint32_t>(spec.n_logs);
        if (kind == 1) {
            const std::uint32_t a =
                1 + static_cast<std::uint32_t>(rng.below(n - 1));
            perturb_spec.merge_pairs = {{a, a + 1}};
        } else if (kind == 2) {
            const std::uint32_t a =
                1 + static_cast<std::uint32_t>(rng.below(n));
            perturb_spec.drop_labels.push_back(a);
            const std::uint32_t b =
                1 + static_cast<std::uint32_t>(rng.below(n));
            if (b != a) perturb_spec.drop_labels.push_back(b);
            perturb_spec.extra_noise = static_cast<int>(rng.below(3));
        } else if (kind == 3) {
            const std::uint32_t a =
                1 + static_cast<std::uint32_t>(rng.below(n - 1));
            perturb_spec.merge_pairs = {{a, a + 1}};
            perturb_spec.extra_noise = 1 + static_cast<int>(rng.below(2));
        }
        lt::SynthScene scene;
        lt::Perturbed out;
        if (!perturbed_retrying(spec, perturb_spec, scene, out)) continue;
        if (same_tally(tally_of(scene, out), out.expected)) ++agreed;
    }
    const double elapsed = ms_since(start);
    if (agreed != kScenes) {
        return fail(fmt("matcher agreed with the constructed tally on "
                        "%d/%d scenes",
                        agreed, kScenes));
    }
    if (elapsed > 30000.0) {
        return fail(fmt("took %.0f ms, budget 30000 ms", elapsed));
    }
    return pass(fmt("merge of two gives i == 2, chained merge of three "
                    "gives i == 3, matcher reproduced all %d constructed "
                    "tallies, %.0f ms",
                    kScenes, elapsed));
}

Outcome check_volume_formulas() {
    double worst = 0.0;
    auto record = [&worst](double got, double want) {
        worst = std::max(worst, std::fabs(got - want));
    };

    record(lt::log_volume({1.0, 1.0}), std::numbers::pi);
    record(lt::log_volume({0.15, 2.4}), 0.16964600329384882);

    const lt::PileVolume two = lt::pile_volume({{1.0, 1.0}, {2.0, 1.0}});
    record(two.total, 5.0 * std::numbers::pi);

    lt::Rng rng(0xA8);
    std::vector<lt::LogDims> pile;
    for (int k = 0; k < 50; ++k) {
        pile.push_back({rng.range_real(0.05, 0.6), rng.range_real(0.5, 6.0)});
    }
    const lt::PileVolume whole = lt::pile_volume(pile);
    double sum = 0.0;
    for (double v : whole.per_log) sum += v;
    record(whole.total, sum);

    std::vector<lt::LogDims> shuffled = pile;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
        std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    }
    record(lt::pile_volume(shuffled).total, whole.total);

    const std::vector<lt::LogDims> front(pile.begin(), pile.begin() + 20);
    const std::vector<lt::LogDims> back(pile.begin() + 20, pile.end());
    record(lt::pile_volume(front).total + lt::pile_volume(back).total,
           whole.total);

    // Halving the pixels-per-meter calibration doubles every radius, so
    // each cylinder volume must scale by exactly four.
    lt::ComponentStats component;
    component.label = 1;
    component.area = 31416;
    component.equivalent_radius = std::sqrt(31416.0 / std::numbers::pi);
    const auto fine =
        lt::dims_from_components({component}, {100.0}, 2.0);
    const auto coarse =
        lt::dims_from_components({component}, {50.0}, 2.0);
    const double v_fine = lt::log_volume(fine[0]);
    const double v_coarse = lt::log_volume(coarse[0]);
    record(v_coarse, 4.0 * v_fine);

    if (worst > 1e-9) {
        return fail(fmt("worst deviation %.2e exceeds 1e-9", worst));
    }
    return pass(fmt("cylinder and pile totals, permutation and split "
                    "additivity, calibration scaling all within 1e-9 "
                    "(worst %.1e)",
                    worst));
}

Outcome check_performance_ceilings() {
    lt::SynthSpec spec;
    spec.width = 256;
    spec.height = 256;
    spec.n_logs = 25;
    spec.radius_min = 6.0;
    spec.radius_max = 14.0;
    spec.min_gap = 3.0;
    spec.seed = 99;
    spec.roughness = 0.1;
    const lt::SynthScene scene = generate_retrying(spec);
    const lt::BinaryMask& mask = scene.gt_mask;

    auto median_ms = [](const std::function<void()>& body) {
        std::vector<double> times;
        times.reserve(11);
        for (int k = 0; k < 11; ++k) {
            const auto t0 = Clock::now();
            body();
            times.push_back(ms_since(t0));
        }
        std::sort(times.begin(), times.end());
        return times[times.size() / 2];
    };

    std::size_t sink = 0;
    const double ccl = median_ms([&] {
        sink += lt::label(mask, lt::Connectivity::eight).component_count;
    });
    const double centroid_pass = median_ms([&] {
        const lt::DistanceField field = lt::edt(mask);
        sink += lt::h_maxima_centroids(field, 2.0).size();
    });
    const double hough = median_ms([&] {
        sink += lt::detect_circles(mask, lt::HoughParams{}).size();
    });
    if (sink == 0) return fail("timed work produced no output");

    if (ccl >= 5.0 || centroid_pass >= 25.0 || hough >= 200.0) {
        return fail(fmt("medians on 256x256: labeling %.2f ms (limit 5), "
                        "centroid pass %.2f ms (limit 25), circle search "
                        "%.1f ms (limit 200)",
                        ccl, centroid_pass, hough));
    }
    return pass(fmt("medians of 11 on 256x256: labeling %.2f ms < 5, "
                    "centroid pass %.2f ms < 25, circle search %.1f ms "
                    "< 200",
                    ccl, centroid_pass, hough));
}

Outcome check_dataset_replay() {
    const char* dir = std::getenv("LOGTALLY_DATASET_DIR");
    if (dir == nullptr || *dir == '\0') {
        return skip("LOGTALLY_DATASET_DIR not set; external reference "
                    "outputs unavailable, property checks above stand in");
    }
    const fs::path base(dir);
    const fs::path pred = base / "pred";
    const fs::path gt = base / "gt";
    if (!fs::is_directory(pred) || !fs::is_directory(gt)) {
        return fail(fmt("%s must contain pred/ and gt/ directories",
                        base.string().c_str()));
    }
    const lt::EvalReport report =
        lt::run_eval(pred.string(), gt.string(), {}, lt::PipelineConfig{}, 1);
    if (report.rows.empty()) {
        return fail("dataset evaluation produced no rows");
    }
    const fs::path expected_csv = base / "expected.csv";
    if (!fs::exists(expected_csv)) {
        return skip(fmt("evaluated %zu pairs but %s has no expected.csv "
                        "to compare against",
                        report.rows.size(), base.string().c_str()));
    }
    std::ifstream in(expected_csv);
    std::stringstream buf;
    buf << in.rdbuf();
    const lt::EvalReport expected = lt::parse_eval_csv(buf.str());
    std::map<std::string, const lt::EvalRow*> by_id;
    for (const lt::EvalRow& row : report.rows) by_id[row.id] = &row;
    int compared = 0;
    int off = 0;
    for (const lt::EvalRow& want : expected.rows) {
        const auto it = by_id.find(want.id);
        if (it == by_id.end()) continue;
        const lt::EvalRow& got = *it->second;
        ++compared;
        const bool scores_close =
            std::fabs(got.scores.accuracy - want.scores.accuracy) <= 0.005 &&
            std::fabs(got.scores.f1 - want.scores.f1) <= 0.005 &&
            std::fabs(got.scores.kappa - want.scores.kappa) <= 0.005 &&
            std::fabs(got.scores.iou - want.scores.iou) <= 0.005;
        if (!scores_close || got.output != want.output) ++off;
    }
    if (compared == 0) {
        return fail("expected.csv shares no ids with the evaluated rows");
    }
    if (off > 0) {
        return fail(fmt("%d/%d replayed rows outside 0.005 or with a "
                        "different count",
                        off, compared));
    }
    return pass(fmt("replayed %d reference rows within 0.005, counts exact",
                    compared));
}

Outcome check_cli_http_parity() {
    const auto start = Clock::now();
    const fs::path dir = fs::temp_directory_path() / "logtally_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run_cli = [](const std::string& args, int& exit_code) {
        const std::string cmd =
            std::string(LOGTALLY_CLI_PATH) + " " + args + " 2>/dev/null";
        FILE* pipe = popen(cmd.c_str(), "r");
        std::string out;
        if (pipe == nullptr) {
            exit_code = -1;
            return out;
        }
        char buf[4096];
        std::size_t got;
        while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) {
            out.append(buf, got);
        }
        const int status = pclose(pipe);
        exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return out;
    };

    lt::ServeOptions options;
    options.port = 0;
    lt::Service service(options);
    if (!service.start()) return fail("service could not bind a port");
    httplib::Client client("127.0.0.1", service.port());
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(10, 0);

    const int kFixtures = 20;
    int identical = 0;
    lt::Rng rng(0xAB);
    for (int k = 0; k < kFixtures; ++k) {
        lt::SynthSpec spec;
        spec.width = 160;
        spec.height = 160;
        spec.n_logs = 3 + k % 7;
        spec.radius_min = 6.0;
        spec.radius_max = 14.0;
        spec.min_gap = 4.0;
        spec.seed = 7000 + static_cast<std::uint64_t>(k) * 17;
        const lt::SynthScene scene = generate_retrying(spec);
        const auto rendered = lt::make_ground_truth(
            scene.gt_instances, lt::GroundTruthMode::flat_red());
        const std::vector<std::uint8_t> png =
            lt::encode_png(std::get<lt::RgbImage>(rendered));
        const std::string id = "fix_" + std::to_string(k);
        const fs::path path = dir / (id + ".png");
        lt::write_file_bytes(path.string(), png);

        int exit_code = -1;
        std::string cli_out = run_cli(
            "count \"" + path.string() + "\" --id " + id, exit_code);
        if (exit_code != 0) continue;
        if (!cli_out.empty() && cli_out.back() == '\n') cli_out.pop_back();

        const std::string body(png.begin(), png.end());
        const auto res =
            client.Post("/v1/count?id=" + id, body, "image/png");
        if (res && res->status == 200 && res->body == cli_out) ++identical;
    }

    const auto health = client.Get("/healthz");
    const bool health_ok = health && health->status == 200 &&
                           health->body.find("ok") != std::string::npos;
    const auto malformed =
        client.Post("/v1/count", "this is not an image", "image/png");
    const bool malformed_ok = malformed && malformed->status == 400;
    service.stop();
    fs::remove_all(dir);

    const double elapsed = ms_since(start);
    if (identical != kFixtures) {
        return fail(fmt("%d/%d fixtures byte-identical between the CLI "
                        "and the service",
                        identical, kFixtures));
    }
    if (!health_ok) return fail("liveness probe did not answer 200 ok");
    if (!malformed_ok) {
        return fail("malformed image body was not rejected with 400");
    }
    if (elapsed > 10000.0) {
        return fail(fmt("took %.0f ms, budget 10000 ms", elapsed));
    }
    return pass(fmt("%d/%d count reports byte-identical across CLI and "
                    "HTTP, liveness 200, malformed body 400, %.0f ms",
                    kFixtures, kFixtures, elapsed));
}

}  // namespace

int main() {
    run("iss-reference-tallies", check_iss_reference_tallies);
    run("pixel-metric-oracle", check_pixel_metric_oracle);
    run("labeling-oracle", check_labeling_oracle);
    run("morphology-distance-equivalence",
        check_morphology_distance_equivalence);
    run("reconstruction-laws", check_reconstruction_laws);
    run("hough-synthetic-scenes", check_hough_synthetic_scenes);
    run("instance-tally-semantics", check_instance_tally_semantics);
    run("volume-formulas", check_volume_formulas);
    run("performance-ceilings", check_performance_ceilings);
    run("dataset-replay", check_dataset_replay);
    run("cli-http-parity", check_cli_http_parity);
    return g_failures;
}
