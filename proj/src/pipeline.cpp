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

#include "logtally/pipeline.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string_view>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace logtally {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0)
        .count();
}

std::string fmt_fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

// Binarize, optionally erode, then label and filter. The returned mask is
// the support of the returned labels, which is what every counter sees.
struct ProcessedInput {
    BinaryMask mask;
    LabelMap labels;
    double binarize_ms = 0.0;
    double morphology_ms = 0.0;
    double label_ms = 0.0;
};

ProcessedInput process_input(const DecodedImage& img,
                             const PipelineConfig& config) {
    ProcessedInput out;
    auto t0 = Clock::now();
    BinaryMask mask = decoded_to_mask(img, config.binarize);
    out.binarize_ms = ms_since(t0);

    t0 = Clock::now();
    if (config.post_erosion.enabled) {
        if (config.post_erosion.dynamic) {
            mask = dynamic_erode(mask, config.post_erosion.radius);
        } else {
            mask = erode(mask, config.post_erosion.se,
                         config.post_erosion.iterations);
        }
    }
    out.morphology_ms = ms_since(t0);

    t0 = Clock::now();
    LabelMap labels = label(mask, config.connectivity);
    if (config.min_area > 0) {
        labels = filter_components(labels, config.min_area);
        mask = labels_to_mask(labels);
    }
    out.label_ms = ms_since(t0);

    out.mask = std::move(mask);
    out.labels = std::move(labels);
    return out;
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            const std::size_t i0 = i, j0 = j;
            while (i < a.size() &&
                   std::isdigit(static_cast<unsigned char>(a[i]))) {
                ++i;
            }
            while (j < b.size() &&
                   std::isdigit(static_cast<unsigned char>(b[j]))) {
                ++j;
            }
            std::string_view ra(a.data() + i0, i - i0);
            std::string_view rb(b.data() + j0, j - j0);
            const auto strip = [](std::string_view v) {
                std::size_t k = 0;
                while (k + 1 < v.size() && v[k] == '0') ++k;
                return v.substr(k);
            };
            const std::string_view sa = strip(ra), sb = strip(rb);
            if (sa.size() != sb.size()) return sa.size() < sb.size();
            if (sa != sb) return sa < sb;
            if (ra.size() != rb.size()) return ra.size() < rb.size();
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

// stem -> path for the supported extensions, preferring png, then pgm,
// then ppm when a stem appears more than once.
std::map<std::string, fs::path, decltype(&natural_less)> scan_dir(
    const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw InvalidInput("not a directory: " + dir);
    }
    const auto rank = [](const std::string& ext) {
        if (ext == ".png") return 0;
        if (ext == ".pgm") return 1;
        if (ext == ".ppm") return 2;
        return 3;
    };
    std::map<std::string, fs::path, decltype(&natural_less)> out(
        &natural_less);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        for (char& ch : ext) ch = static_cast<char>(std::tolower(
                                      static_cast<unsigned char>(ch)));
        if (rank(ext) == 3) continue;
        const std::string stem = entry.path().stem().string();
        const auto it = out.find(stem);
        if (it == out.end()) {
            out.emplace(stem, entry.path());
        } else {
            std::string old_ext = it->second.extension().string();
            for (char& ch : old_ext) {
                ch = static_cast<char>(
                    std::tolower(static_cast<unsigned char>(ch)));
            }
            if (rank(ext) < rank(old_ext)) it->second = entry.path();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Overlay rendering

void hsv_to_rgb(double h, double s, double v, std::uint8_t rgb[3]) {
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    const double m = v - c;
    rgb[0] = static_cast<std::uint8_t>(std::floor((r + m) * 255.0 + 0.5));
    rgb[1] = static_cast<std::uint8_t>(std::floor((g + m) * 255.0 + 0.5));
    rgb[2] = static_cast<std::uint8_t>(std::floor((b + m) * 255.0 + 0.5));
}

void label_color(std::uint32_t l, std::uint8_t rgb[3]) {
    const double hue = std::fmod(static_cast<double>(l) * 0.61803398875, 1.0);
    hsv_to_rgb(hue, 0.85, 1.0, rgb);
}

// 3x5 digit glyphs, one row per byte, low three bits used.
constexpr std::uint8_t kDigitRows[10][5] = {
    {0b111, 0b101, 0b101, 0b101, 0b111}, {0b010, 0b110, 0b010, 0b010, 0b111},
    {0b111, 0b001, 0b111, 0b100, 0b111}, {0b111, 0b001, 0b111, 0b001, 0b111},
    {0b101, 0b101, 0b111, 0b001, 0b001}, {0b111, 0b100, 0b111, 0b001, 0b111},
    {0b111, 0b100, 0b111, 0b101, 0b111}, {0b111, 0b001, 0b010, 0b010, 0b010},
    {0b111, 0b101, 0b111, 0b101, 0b111}, {0b111, 0b101, 0b111, 0b001, 0b111},
};

void draw_number(RgbImage& img, int row, int col, std::uint32_t value) {
    const std::string digits = std::to_string(value);
    const int total_w = static_cast<int>(digits.size()) * 4 - 1;
    int c0 = col - total_w / 2;
    const int r0 = row - 2;
    for (char ch : digits) {
        const std::uint8_t* glyph = kDigitRows[ch - '0'];
        for (int gr = 0; gr < 5; ++gr) {
            for (int gc = 0; gc < 3; ++gc) {
                if (!(glyph[gr] & (0b100 >> gc))) continue;
                const int r = r0 + gr;
                const int c = c0 + gc;
                if (r < 0 || r >= img.height || c < 0 || c >= img.width) {
                    continue;
                }
                img.set_pixel(r, c, 255, 255, 255);
            }
        }
        c0 += 4;
    }
}

// ---------------------------------------------------------------------------
// Serialization helpers

ordered_json row_to_json(const EvalRow& row) {
    ordered_json j;
    j["id"] = row.id;
    j["accuracy"] = row.scores.accuracy;
    j["f1"] = row.scores.f1;
    j["kappa"] = row.scores.kappa;
    j["iou"] = row.scores.iou;
    j["expected_logs"] = row.expected_logs;
    j["output"] = row.output;
    j["ci"] = row.tally.ci;
    j["e"] = row.tally.e;
    j["i"] = row.tally.i;
    j["n"] = row.tally.n;
    j["iss"] = row.iss_value;
    j["accuracy_logs"] = row.accuracy_logs_value;
    return j;
}

constexpr const char* kCsvHeader =
    "Image,Accuracy,F1,Kappa,IoU,Expected,Output,Correctly Isolated (CI),"
    "Missed (E),Intersected (I),Noise (N),ISS (%),Accuracy_logs";

void check_csv_id(const std::string& id) {
    if (id == "aggregate" || id.find_first_of(",\"\r\n") != std::string::npos) {
        throw InvalidInput("image id not representable in CSV: " + id);
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InvalidInput("bad numeric field '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw InvalidInput("bad integer field '" + s + "'");
    return v;
}

}  // namespace

void ErosionConfig::validate() const {
    if (iterations < 0) {
        throw InvalidInput("erosion iterations must be non-negative");
    }
    if (radius < 0.0) {
        throw InvalidInput("erosion radius must be non-negative");
    }
}

void PipelineConfig::validate() const {
    binarize.validate();
    post_erosion.validate();
    hough.validate();
    if (min_area < 0) throw InvalidInput("min_area must be non-negative");
    if (!(centroid_depth > 0.0)) {
        throw InvalidInput("centroid_depth must be positive");
    }
}

const char* counter_name(CounterKind kind) {
    switch (kind) {
    case CounterKind::connected_components: return "connected-components";
    case CounterKind::hough: return "hough";
    case CounterKind::reconstruction_centroids:
        return "reconstruction-centroids";
    }
    return "unknown";
}

CountReport run_count_bytes(const std::uint8_t* bytes, std::size_t len,
                            const std::string& id,
                            const PipelineConfig& config) {
    config.validate();
    const auto t_total = Clock::now();

    CountReport report;
    report.id = id;
    report.counter = config.counter;

    auto t0 = Clock::now();
    const DecodedImage decoded = decode_image(bytes, len);
    const double decode_ms = ms_since(t0);

    ProcessedInput in = process_input(decoded, config);

    t0 = Clock::now();
    switch (config.counter) {
    case CounterKind::connected_components:
        report.components = stats(in.labels);
        report.count = in.labels.component_count;
        break;
    case CounterKind::hough:
        report.circles = detect_circles(in.mask, config.hough);
        report.count = static_cast<int>(report.circles.size());
        break;
    case CounterKind::reconstruction_centroids:
        report.centroids = h_maxima_centroids(edt(in.mask),
                                              config.centroid_depth,
                                              config.connectivity);
        report.count = static_cast<int>(report.centroids.size());
        break;
    }
    const double count_ms = ms_since(t0);

    report.mask = std::move(in.mask);
    report.labels = std::move(in.labels);
    report.timings = {
        {"decode", decode_ms},         {"binarize", in.binarize_ms},
        {"morphology", in.morphology_ms}, {"label", in.label_ms},
        {"count", count_ms},           {"total", ms_since(t_total)},
    };
    return report;
}

CountReport run_count(const std::string& path, const PipelineConfig& config) {
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file_bytes(path);
    } catch (const Error& e) {
        throw DecodeError(e.what());
    }
    try {
        return run_count_bytes(bytes.data(), bytes.size(),
                               fs::path(path).stem().string(), config);
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

EvalRow eval_pair(const DecodedImage& pred, const DecodedImage& gt,
                  const std::string& id, const MatchParams& match,
                  const PipelineConfig& config) {
    config.validate();
    match.validate();

    const LabelMap gt_labels = decoded_to_labels(gt);
    const BinaryMask gt_mask = labels_to_mask(gt_labels);
    ProcessedInput in = process_input(pred, config);

    EvalRow row;
    row.id = id;
    row.scores = pixel_scores(confusion(in.mask, gt_mask));
    row.expected_logs = gt_labels.component_count;
    row.output = in.labels.component_count;
    row.tally = match_instances(in.labels, gt_labels, match).tally;

    const CountTally& t = row.tally;
    row.iss_value = t.ci + t.e + t.i + t.n > 0 ? iss(t) : 1.0;
    row.accuracy_logs_value = t.ci + t.e + t.n > 0 ? accuracy_logs(t) : 1.0;
    return row;
}

EvalAggregate aggregate_rows(const std::vector<EvalRow>& rows) {
    EvalAggregate agg;
    agg.row_count = static_cast<int>(rows.size());
    if (rows.empty()) return agg;
    for (const EvalRow& r : rows) {
        agg.accuracy += r.scores.accuracy;
        agg.f1 += r.scores.f1;
        agg.kappa += r.scores.kappa;
        agg.iou += r.scores.iou;
        agg.expected_logs += r.expected_logs;
        agg.output += r.output;
        agg.ci += r.tally.ci;
        agg.e += r.tally.e;
        agg.i += r.tally.i;
        agg.n += r.tally.n;
        agg.iss += r.iss_value;
        agg.accuracy_logs += r.accuracy_logs_value;
    }
    const double n = static_cast<double>(rows.size());
    agg.accuracy /= n;
    agg.f1 /= n;
    agg.kappa /= n;
    agg.iou /= n;
    agg.expected_logs /= n;
    agg.output /= n;
    agg.ci /= n;
    agg.e /= n;
    agg.i /= n;
    agg.n /= n;
    agg.iss /= n;
    agg.accuracy_logs /= n;
    return agg;
}

EvalReport run_eval(const std::string& pred_dir, const std::string& gt_dir,
                    const MatchParams& match, const PipelineConfig& config,
                    int jobs) {
    config.validate();
    match.validate();

    const auto preds = scan_dir(pred_dir);
    const auto gts = scan_dir(gt_dir);

    struct Task {
        std::string id;
        fs::path pred_path;
        fs::path gt_path;
    };
    std::vector<Task> tasks;
    EvalReport report;
    for (const auto& [stem, path] : preds) {
        const auto it = gts.find(stem);
        if (it == gts.end()) {
            report.errors.push_back(
                {stem, "no matching reference for " + path.string()});
        } else {
            tasks.push_back({stem, path, it->second});
        }
    }
    for (const auto& [stem, path] : gts) {
        if (!preds.contains(stem)) {
            report.errors.push_back(
                {stem, "no matching prediction for " + path.string()});
        }
    }

    std::vector<std::optional<EvalRow>> results(tasks.size());
    std::vector<std::optional<EvalError>> row_errors(tasks.size());
    std::atomic<std::size_t> cursor{0};

    unsigned n_threads = jobs > 0
                             ? static_cast<unsigned>(jobs)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(
        n_threads, std::max<std::size_t>(tasks.size(), 1));

    const auto worker = [&] {
        for (std::size_t k = cursor.fetch_add(1); k < tasks.size();
             k = cursor.fetch_add(1)) {
            const Task& task = tasks[k];
            try {
                const DecodedImage pred = read_image(task.pred_path.string());
                const DecodedImage gt = read_image(task.gt_path.string());
                results[k] = eval_pair(pred, gt, task.id, match, config);
            } catch (const std::exception& e) {
                row_errors[k] = EvalError{task.id, e.what()};
            }
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (results[k]) report.rows.push_back(*results[k]);
        if (row_errors[k]) report.errors.push_back(*row_errors[k]);
    }
    report.aggregate = aggregate_rows(report.rows);
    return report;
}

RgbImage render_overlay(const RgbImage& base, const LabelMap& labels) {
    if (base.width != labels.width || base.height != labels.height) {
        throw InvalidInput("overlay: image and label map dimensions differ");
    }
    RgbImage out = base;
    for (int r = 0; r < labels.height; ++r) {
        for (int c = 0; c < labels.width; ++c) {
            const std::uint32_t l = labels.at(r, c);
            if (l == 0) continue;
            std::uint8_t tint[3];
            label_color(l, tint);
            const auto px = base.pixel(r, c);
            out.set_pixel(r, c,
                          static_cast<std::uint8_t>((px[0] + tint[0] + 1) / 2),
                          static_cast<std::uint8_t>((px[1] + tint[1] + 1) / 2),
                          static_cast<std::uint8_t>((px[2] + tint[2] + 1) / 2));
        }
    }
    for (const ComponentStats& s : stats(labels)) {
        draw_number(out,
                    static_cast<int>(std::floor(s.centroid_row + 0.5)),
                    static_cast<int>(std::floor(s.centroid_col + 0.5)),
                    s.label);
    }
    return out;
}

RgbImage render_overlay(const GrayImage& base, const LabelMap& labels) {
    RgbImage rgb(base.width, base.height);
    for (std::size_t i = 0; i < base.data.size(); ++i) {
        rgb.data[3 * i] = rgb.data[3 * i + 1] = rgb.data[3 * i + 2] =
            base.data[i];
    }
    return render_overlay(rgb, labels);
}

RgbImage render_overlay_points(const RgbImage& base,
                               const std::vector<PixelCoord>& points) {
    RgbImage out = base;
    for (std::size_t k = 0; k < points.size(); ++k) {
        draw_number(out, points[k].row, points[k].col,
                    static_cast<std::uint32_t>(k + 1));
    }
    return out;
}

std::string count_report_json(const CountReport& report,
                              bool include_timings) {
    ordered_json j;
    j["id"] = report.id;
    j["counter"] = counter_name(report.counter);
    j["count"] = report.count;
    switch (report.counter) {
    case CounterKind::connected_components: {
        ordered_json arr = ordered_json::array();
        for (const ComponentStats& s : report.components) {
            ordered_json c;
            c["label"] = s.label;
            c["area"] = s.area;
            c["centroid"] = {s.centroid_row, s.centroid_col};
            c["bbox"] = {s.min_row, s.min_col, s.max_row, s.max_col};
            c["equivalent_radius"] = s.equivalent_radius;
            arr.push_back(std::move(c));
        }
        j["components"] = std::move(arr);
        break;
    }
    case CounterKind::hough: {
        ordered_json arr = ordered_json::array();
        for (const Circle& c : report.circles) {
            ordered_json e;
            e["center"] = {c.center.row, c.center.col};
            e["radius"] = c.radius;
            e["score"] = c.score;
            arr.push_back(std::move(e));
        }
        j["circles"] = std::move(arr);
        break;
    }
    case CounterKind::reconstruction_centroids: {
        ordered_json arr = ordered_json::array();
        for (const PixelCoord& p : report.centroids) {
            arr.push_back({p.row, p.col});
        }
        j["centroids"] = std::move(arr);
        break;
    }
    }
    if (include_timings) {
        ordered_json t;
        for (const StageTiming& s : report.timings) t[s.stage] = s.ms;
        j["timings_ms"] = std::move(t);
    }
    return j.dump(2);
}

std::string eval_report_json(const EvalReport& report) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const EvalRow& r : report.rows) rows.push_back(row_to_json(r));
    j["rows"] = std::move(rows);

    ordered_json agg;
    agg["accuracy"] = report.aggregate.accuracy;
    agg["f1"] = report.aggregate.f1;
    agg["kappa"] = report.aggregate.kappa;
    agg["iou"] = report.aggregate.iou;
    agg["expected_logs"] = report.aggregate.expected_logs;
    agg["output"] = report.aggregate.output;
    agg["ci"] = report.aggregate.ci;
    agg["e"] = report.aggregate.e;
    agg["i"] = report.aggregate.i;
    agg["n"] = report.aggregate.n;
    agg["iss"] = report.aggregate.iss;
    agg["accuracy_logs"] = report.aggregate.accuracy_logs;
    agg["row_count"] = report.aggregate.row_count;
    j["aggregate"] = std::move(agg);

    ordered_json errs = ordered_json::array();
    for (const EvalError& e : report.errors) {
        ordered_json entry;
        entry["id"] = e.id;
        entry["error"] = e.message;
        errs.push_back(std::move(entry));
    }
    j["errors"] = std::move(errs);
    return j.dump(2);
}

std::string eval_report_csv(const EvalReport& report) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const EvalRow& r : report.rows) {
        check_csv_id(r.id);
        out += r.id;
        out += ',' + fmt_fixed(r.scores.accuracy, 6);
        out += ',' + fmt_fixed(r.scores.f1, 6);
        out += ',' + fmt_fixed(r.scores.kappa, 6);
        out += ',' + fmt_fixed(r.scores.iou, 6);
        out += ',' + std::to_string(r.expected_logs);
        out += ',' + std::to_string(r.output);
        out += ',' + std::to_string(r.tally.ci);
        out += ',' + std::to_string(r.tally.e);
        out += ',' + std::to_string(r.tally.i);
        out += ',' + std::to_string(r.tally.n);
        out += ',' + fmt_fixed(r.iss_value * 100.0, 4);
        out += ',' + fmt_fixed(r.accuracy_logs_value, 6);
        out += '\n';
    }
    const EvalAggregate& a = report.aggregate;
    out += "aggregate";
    out += ',' + fmt_fixed(a.accuracy, 6);
    out += ',' + fmt_fixed(a.f1, 6);
    out += ',' + fmt_fixed(a.kappa, 6);
    out += ',' + fmt_fixed(a.iou, 6);
    out += ',' + fmt_fixed(a.expected_logs, 6);
    out += ',' + fmt_fixed(a.output, 6);
    out += ',' + fmt_fixed(a.ci, 6);
    out += ',' + fmt_fixed(a.e, 6);
    out += ',' + fmt_fixed(a.i, 6);
    out += ',' + fmt_fixed(a.n, 6);
    out += ',' + fmt_fixed(a.iss * 100.0, 4);
    out += ',' + fmt_fixed(a.accuracy_logs, 6);
    out += '\n';
    return out;
}

EvalReport parse_eval_csv(const std::string& csv) {
    EvalReport report;
    std::size_t pos = 0;
    bool saw_header = false;
    bool saw_aggregate = false;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string::npos) end = csv.size();
        const std::string line = csv.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kCsvHeader) {
                throw InvalidInput("unexpected CSV header: " + line);
            }
            saw_header = true;
            continue;
        }
        if (saw_aggregate) {
            throw InvalidInput("data after the aggregate row");
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 13) {
            throw InvalidInput("expected 13 CSV fields, got " +
                               std::to_string(f.size()));
        }
        if (f[0] == "aggregate") {
            EvalAggregate& a = report.aggregate;
            a.accuracy = parse_double(f[1]);
            a.f1 = parse_double(f[2]);
            a.kappa = parse_double(f[3]);
            a.iou = parse_double(f[4]);
            a.expected_logs = parse_double(f[5]);
            a.output = parse_double(f[6]);
            a.ci = parse_double(f[7]);
            a.e = parse_double(f[8]);
            a.i = parse_double(f[9]);
            a.n = parse_double(f[10]);
            a.iss = parse_double(f[11]) / 100.0;
            a.accuracy_logs = parse_double(f[12]);
            a.row_count = static_cast<int>(report.rows.size());
            saw_aggregate = true;
            continue;
        }
        EvalRow r;
        r.id = f[0];
        r.scores.accuracy = parse_double(f[1]);
        r.scores.f1 = parse_double(f[2]);
        r.scores.kappa = parse_double(f[3]);
        r.scores.iou = parse_double(f[4]);
        r.expected_logs = parse_int(f[5]);
        r.output = parse_int(f[6]);
        r.tally.ci = parse_int(f[7]);
        r.tally.e = parse_int(f[8]);
        r.tally.i = parse_int(f[9]);
        r.tally.n = parse_int(f[10]);
        r.iss_value = parse_double(f[11]) / 100.0;
        r.accuracy_logs_value = parse_double(f[12]);
        report.rows.push_back(std::move(r));
    }
    if (!saw_header) throw InvalidInput("empty CSV");
    if (!saw_aggregate) report.aggregate = aggregate_rows(report.rows);
    return report;
}

void export_scene(const SynthScene& scene, const std::string& out_dir,
                  const std::string& stem) {
    const fs::path root(out_dir);
    fs::create_directories(root / "images");
    fs::create_directories(root / "truth");
    fs::create_directories(root / "manifests");

    // The input image carries instances and clutter; the reference only
    // the instances.
    BinaryMask input = scene.gt_mask;
    for (std::size_t i = 0; i < input.data.size(); ++i) {
        if (scene.noise_mask.data[i]) input.data[i] = 1;
    }
    write_png((root / "images" / (stem + ".png")).string(),
              mask_to_gray(input));
    write_png_labels((root / "truth" / (stem + ".png")).string(),
                     scene.gt_instances);

    ordered_json j;
    j["width"] = scene.gt_instances.width;
    j["height"] = scene.gt_instances.height;
    ordered_json instances = ordered_json::array();
    for (const DiscInstance& d : scene.instances) {
        ordered_json e;
        e["label"] = d.label;
        e["center"] = {d.center_row, d.center_col};
        e["radius"] = d.radius;
        instances.push_back(std::move(e));
    }
    j["instances"] = std::move(instances);
    ordered_json noise = ordered_json::array();
    for (const NoiseBlob& b : scene.noise) {
        ordered_json e;
        e["center"] = {b.center_row, b.center_col};
        e["radius"] = b.radius;
        e["area"] = b.area;
        noise.push_back(std::move(e));
    }
    j["noise"] = std::move(noise);

    const std::string text = j.dump(2) + "\n";
    write_file_bytes((root / "manifests" / (stem + ".json")).string(),
                     std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace logtally
