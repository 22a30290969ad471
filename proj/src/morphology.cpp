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

#include "logtally/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace logtally {

namespace {

void check_mask(const BinaryMask& mask, const char* op) {
    if (mask.width <= 0 || mask.height <= 0) {
        throw InvalidInput(std::string(op) + " requires a non-empty mask");
    }
}

// Offsets of the structuring element, center excluded.
const int kSquareOff[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                              {0, 1},   {1, -1}, {1, 0},  {1, 1}};
const int kCrossOff[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

BinaryMask erode_once(const BinaryMask& in, StructuringElement se) {
    const int w = in.width, h = in.height;
    BinaryMask out(w, h);
    const int(*off)[2] = se == StructuringElement::square3 ? kSquareOff
                                                           : kCrossOff;
    const int n_off = se == StructuringElement::square3 ? 8 : 4;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!in.at(r, c)) continue;
            bool keep = true;
            for (int k = 0; k < n_off && keep; ++k) {
                const int nr = r + off[k][0];
                const int nc = c + off[k][1];
                keep = in.inside(nr, nc) && in.at(nr, nc);
            }
            if (keep) out.set(r, c, 1);
        }
    }
    return out;
}

BinaryMask dilate_once(const BinaryMask& in, StructuringElement se) {
    const int w = in.width, h = in.height;
    BinaryMask out(w, h);
    const int(*off)[2] = se == StructuringElement::square3 ? kSquareOff
                                                           : kCrossOff;
    const int n_off = se == StructuringElement::square3 ? 8 : 4;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bool hit = in.at(r, c);
            for (int k = 0; k < n_off && !hit; ++k) {
                const int nr = r + off[k][0];
                const int nc = c + off[k][1];
                hit = in.inside(nr, nc) && in.at(nr, nc);
            }
            if (hit) out.set(r, c, 1);
        }
    }
    return out;
}

// One dimensional squared distance transform via the lower envelope of
// parabolas (Felzenszwalb, Huttenlocher). f holds per-position squared
// distances, d receives the combined result.
void dt_1d(const std::vector<double>& f, int n, std::vector<double>& d,
           std::vector<int>& v, std::vector<double>& z) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) -
                 (f[p] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

template <typename T>
void reconstruct_in_place(std::vector<T>& j, const std::vector<T>& i, int w,
                          int h, Connectivity conn) {
    const int fw8[4][2] = {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
    const int fw4[2][2] = {{0, -1}, {-1, 0}};
    const int(*fw)[2] = conn == Connectivity::eight ? fw8 : fw4;
    const int nn = conn == Connectivity::eight ? 4 : 2;

    auto idx = [w](int r, int c) {
        return static_cast<std::size_t>(r) * w + c;
    };

    // Forward raster pass.
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            T m = j[idx(r, c)];
            for (int k = 0; k < nn; ++k) {
                const int nr = r + fw[k][0];
                const int nc = c + fw[k][1];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                m = std::max(m, j[idx(nr, nc)]);
            }
            j[idx(r, c)] = std::min(m, i[idx(r, c)]);
        }
    }

    // Backward pass, queueing pixels whose downstream neighbors still
    // have room to grow.
    std::deque<std::size_t> fifo;
    for (int r = h - 1; r >= 0; --r) {
        for (int c = w - 1; c >= 0; --c) {
            T m = j[idx(r, c)];
            for (int k = 0; k < nn; ++k) {
                const int nr = r - fw[k][0];
                const int nc = c - fw[k][1];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                m = std::max(m, j[idx(nr, nc)]);
            }
            const std::size_t p = idx(r, c);
            j[p] = std::min(m, i[p]);
            for (int k = 0; k < nn; ++k) {
                const int nr = r - fw[k][0];
                const int nc = c - fw[k][1];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                const std::size_t q = idx(nr, nc);
                if (j[q] < j[p] && j[q] < i[q]) {
                    fifo.push_back(p);
                    break;
                }
            }
        }
    }

    // Residual propagation.
    const int all8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                            {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    const int all4[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    const int(*all)[2] = conn == Connectivity::eight ? all8 : all4;
    const int na = conn == Connectivity::eight ? 8 : 4;
    while (!fifo.empty()) {
        const std::size_t p = fifo.front();
        fifo.pop_front();
        const int r = static_cast<int>(p / w);
        const int c = static_cast<int>(p % w);
        for (int k = 0; k < na; ++k) {
            const int nr = r + all[k][0];
            const int nc = c + all[k][1];
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            const std::size_t q = idx(nr, nc);
            if (j[q] < j[p] && i[q] != j[q]) {
                j[q] = std::min(j[p], i[q]);
                fifo.push_back(q);
            }
        }
    }
}

template <typename Img>
void check_reconstruct_args(const Img& marker, const Img& mask) {
    if (mask.width <= 0 || mask.height <= 0) {
        throw InvalidInput("reconstruct requires non-empty images");
    }
    if (marker.width != mask.width || marker.height != mask.height) {
        throw InvalidInput("reconstruct: marker and mask dimensions differ");
    }
}

}  // namespace

DistanceField::DistanceField(int w, int h) {
    if (w <= 0 || h <= 0) {
        throw InvalidInput("distance field dimensions must be positive");
    }
    width = w;
    height = h;
    values.assign(static_cast<std::size_t>(w) * h, 0.0);
}

void GroundTruthMode::validate() const {
    if (kind == Kind::red_gradient_capped && max_diameter <= 0) {
        throw InvalidInput(
            "red_gradient_capped needs a positive max_diameter");
    }
}

BinaryMask erode(const BinaryMask& mask, StructuringElement se,
                 int iterations) {
    check_mask(mask, "erode");
    if (iterations < 0) {
        throw InvalidInput("erode iterations must be non-negative");
    }
    BinaryMask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        if (cur.foreground_count() == 0) break;
        cur = erode_once(cur, se);
    }
    return cur;
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se,
                  int iterations) {
    check_mask(mask, "dilate");
    if (iterations < 0) {
        throw InvalidInput("dilate iterations must be non-negative");
    }
    BinaryMask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        cur = dilate_once(cur, se);
    }
    return cur;
}

DistanceField edt(const BinaryMask& mask) {
    check_mask(mask, "edt");
    // Work on a grid padded with a one pixel background ring. Any point
    // outside the frame is no closer than its projection onto the ring,
    // so the ring alone accounts for the whole exterior.
    const int w = mask.width + 2;
    const int h = mask.height + 2;
    const double far2 = static_cast<double>(w + h) * (w + h);

    std::vector<double> row2(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        // Distance to the nearest background in this row; the padded ends
        // are background, so it is always finite.
        double run = far2;
        for (int c = 0; c < w; ++c) {
            const bool fg = r > 0 && r < h - 1 && c > 0 && c < w - 1 &&
                            mask.at(r - 1, c - 1);
            run = fg ? run + 1.0 : 0.0;
            row2[static_cast<std::size_t>(r) * w + c] = run;
        }
        run = far2;
        for (int c = w - 1; c >= 0; --c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            run = row2[p] == 0.0 ? 0.0 : run + 1.0;
            const double d = std::min(row2[p], run);
            row2[p] = d * d;
        }
    }

    DistanceField out(mask.width, mask.height);
    std::vector<double> f(h), d(h), z(static_cast<std::size_t>(h) + 1);
    std::vector<int> v(h);
    for (int c = 0; c < w; ++c) {
        if (c == 0 || c == w - 1) continue;
        for (int r = 0; r < h; ++r) {
            f[r] = row2[static_cast<std::size_t>(r) * w + c];
        }
        dt_1d(f, h, d, v, z);
        for (int r = 1; r < h - 1; ++r) {
            out.at(r - 1, c - 1) = std::sqrt(d[r]);
        }
    }
    return out;
}

BinaryMask dynamic_erode(const BinaryMask& mask, double radius) {
    check_mask(mask, "dynamic_erode");
    if (radius < 0.0) {
        throw InvalidInput("dynamic_erode radius must be non-negative");
    }
    if (radius == 0.0) return mask;
    const DistanceField field = edt(mask);
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = field.values[i] > radius;
    }
    return out;
}

GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask,
                      Connectivity conn) {
    check_reconstruct_args(marker, mask);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (marker.data[i] > mask.data[i]) {
            throw InvalidInput("reconstruct: marker exceeds mask");
        }
    }
    GrayImage out = marker;
    reconstruct_in_place(out.data, mask.data, mask.width, mask.height, conn);
    return out;
}

DistanceField reconstruct(const DistanceField& marker,
                          const DistanceField& mask, Connectivity conn) {
    check_reconstruct_args(marker, mask);
    for (std::size_t i = 0; i < mask.values.size(); ++i) {
        if (marker.values[i] > mask.values[i]) {
            throw InvalidInput("reconstruct: marker exceeds mask");
        }
    }
    DistanceField out = marker;
    reconstruct_in_place(out.values, mask.values, mask.width, mask.height,
                         conn);
    return out;
}

std::vector<PixelCoord> h_maxima_centroids(const DistanceField& field,
                                           double h, Connectivity conn) {
    if (field.width <= 0 || field.height <= 0) {
        throw InvalidInput("h_maxima_centroids requires a non-empty field");
    }
    if (!(h > 0.0)) {
        throw InvalidInput("h must be positive");
    }
    DistanceField marker(field.width, field.height);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        marker.values[i] = std::max(field.values[i] - h, 0.0);
    }
    const DistanceField rec = reconstruct(marker, field, conn);

    BinaryMask peaks(field.width, field.height);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        peaks.data[i] = field.values[i] - rec.values[i] > 0.0;
    }
    const LabelMap regions = label(peaks, conn);
    const std::vector<ComponentStats> rs = stats(regions);

    std::vector<PixelCoord> out;
    out.reserve(rs.size());
    for (const ComponentStats& s : rs) {
        out.push_back({static_cast<int>(std::floor(s.centroid_row + 0.5)),
                       static_cast<int>(std::floor(s.centroid_col + 0.5))});
    }
    return out;
}

std::uint8_t gradient_intensity(double distance, double ramp_radius) {
    if (!(ramp_radius > 0.0)) {
        throw InvalidInput("gradient ramp radius must be positive");
    }
    const double v = 255.0 * std::max(0.0, 1.0 - distance / ramp_radius);
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

std::variant<RgbImage, GrayImage> make_ground_truth(
    const LabelMap& instances, const GroundTruthMode& mode) {
    mode.validate();
    if (instances.width <= 0 || instances.height <= 0) {
        throw InvalidInput("make_ground_truth requires a non-empty label map");
    }
    const std::vector<ComponentStats> st = stats(instances);

    if (mode.kind == GroundTruthMode::Kind::flat_red) {
        RgbImage out(instances.width, instances.height);
        for (int r = 0; r < instances.height; ++r) {
            for (int c = 0; c < instances.width; ++c) {
                if (instances.at(r, c)) out.set_pixel(r, c, 255, 0, 0);
            }
        }
        return out;
    }

    // Ramp radius per instance.
    std::vector<double> ramp(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) {
        ramp[i] = st[i].equivalent_radius;
        if (mode.kind == GroundTruthMode::Kind::red_gradient_capped) {
            ramp[i] = std::min(ramp[i], mode.max_diameter / 2.0);
        }
    }

    auto intensity_at = [&](int r, int c) -> std::uint8_t {
        const std::uint32_t l = instances.at(r, c);
        if (l == 0) return 0;
        const ComponentStats& s = st[l - 1];
        const double d = std::hypot(r - s.centroid_row, c - s.centroid_col);
        return gradient_intensity(d, ramp[l - 1]);
    };

    if (mode.kind == GroundTruthMode::Kind::red_gradient_capped) {
        RgbImage out(instances.width, instances.height);
        for (int r = 0; r < instances.height; ++r) {
            for (int c = 0; c < instances.width; ++c) {
                if (instances.at(r, c)) {
                    out.set_pixel(r, c, intensity_at(r, c), 0, 0);
                }
            }
        }
        return out;
    }

    GrayImage out(instances.width, instances.height);
    for (int r = 0; r < instances.height; ++r) {
        for (int c = 0; c < instances.width; ++c) {
            if (instances.at(r, c)) out.at(r, c) = intensity_at(r, c);
        }
    }
    return out;
}

}  // namespace logtally
