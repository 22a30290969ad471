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

#include <filesystem>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "logtally/pipeline.hpp"
#include "logtally/service.hpp"
#include "logtally/volume.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct PipelineFlags {
    std::string binarize = "red";
    int threshold = 127;
    int channel = 0;
    int erode_iters = -1;       // >= 0 enables fixed erosion
    double dynamic_radius = -1; // >= 0 enables dynamic erosion
    std::string se = "square3";
    int min_area = 0;
    int connectivity = 8;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
    cmd->add_option("--binarize", f.binarize,
                    "Foreground rule: luma, red or channel")
        ->check(CLI::IsMember({"luma", "red", "channel"}));
    cmd->add_option("--threshold", f.threshold,
                    "Binarize threshold, strictly exceeded counts as "
                    "foreground")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--channel", f.channel,
                    "Channel index for --binarize channel")
        ->check(CLI::Range(0, 2));
    cmd->add_option("--erode", f.erode_iters,
                    "Erode the mask this many times before counting");
    cmd->add_option("--dynamic-radius", f.dynamic_radius,
                    "Erode by thresholding the distance field at this "
                    "radius");
    cmd->add_option("--se", f.se, "Structuring element for --erode")
        ->check(CLI::IsMember({"square3", "cross3"}));
    cmd->add_option("--min-area", f.min_area,
                    "Drop components smaller than this many pixels");
    cmd->add_option("--connectivity", f.connectivity,
                    "Pixel connectivity, 4 or 8")
        ->check(CLI::IsMember({4, 8}));
}

logtally::PipelineConfig make_config(const PipelineFlags& f) {
    logtally::PipelineConfig cfg;
    if (f.binarize == "luma") {
        cfg.binarize.mode = logtally::BinarizeMode::luma;
    } else if (f.binarize == "channel") {
        cfg.binarize.mode = logtally::BinarizeMode::channel;
    } else {
        cfg.binarize.mode = logtally::BinarizeMode::red_dominant;
    }
    cfg.binarize.threshold = f.threshold;
    cfg.binarize.channel = f.channel;
    if (f.erode_iters >= 0 && f.dynamic_radius >= 0) {
        throw logtally::InvalidInput(
            "--erode and --dynamic-radius are mutually exclusive");
    }
    if (f.erode_iters >= 0) {
        cfg.post_erosion.enabled = true;
        cfg.post_erosion.dynamic = false;
        cfg.post_erosion.iterations = f.erode_iters;
    } else if (f.dynamic_radius >= 0) {
        cfg.post_erosion.enabled = true;
        cfg.post_erosion.dynamic = true;
        cfg.post_erosion.radius = f.dynamic_radius;
    }
    cfg.post_erosion.se = f.se == "cross3"
                              ? logtally::StructuringElement::cross3
                              : logtally::StructuringElement::square3;
    cfg.min_area = f.min_area;
    cfg.connectivity = f.connectivity == 4 ? logtally::Connectivity::four
                                           : logtally::Connectivity::eight;
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    logtally::write_file_bytes(
        path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

logtally::RgbImage overlay_base(const logtally::DecodedImage& decoded) {
    if (decoded.format == logtally::PixelFormat::rgb8) {
        return decoded.as_rgb8();
    }
    logtally::RgbImage base(decoded.width, decoded.height);
    for (std::size_t i = 0; i < decoded.samples.size(); ++i) {
        std::uint8_t v;
        if (decoded.format == logtally::PixelFormat::gray16) {
            v = decoded.samples[i] ? 255 : 0;
        } else {
            v = static_cast<std::uint8_t>(decoded.samples[i]);
        }
        base.data[3 * i] = base.data[3 * i + 1] = base.data[3 * i + 2] = v;
    }
    return base;
}

int run(int argc, char** argv) {
    CLI::App app{"Wood log counting toolkit"};
    app.require_subcommand(1);

    // count ------------------------------------------------------------
    auto* count_cmd =
        app.add_subcommand("count", "Count logs in a segmented image");
    std::string count_image;
    count_cmd->add_option("image", count_image, "Input image")->required();
    PipelineFlags count_flags;
    add_pipeline_flags(count_cmd, count_flags);
    std::string count_counter = "cc";
    count_cmd->add_option("--counter", count_counter,
                          "Counting method: cc, hough or centroids")
        ->check(CLI::IsMember({"cc", "hough", "centroids"}));
    double count_h = 2.0;
    count_cmd->add_option("--peak-depth", count_h,
                          "Peak prominence required by the centroids counter");
    logtally::HoughParams count_hough;
    count_cmd->add_option("--rmin", count_hough.r_min, "Smallest radius");
    count_cmd->add_option("--rmax", count_hough.r_max, "Largest radius");
    count_cmd->add_option("--radius-step", count_hough.radius_step,
                          "Radius increment");
    count_cmd->add_option("--vote-threshold", count_hough.vote_threshold,
                          "Perimeter fraction required for a detection");
    count_cmd->add_option("--nms", count_hough.nms_min_center_dist,
                          "Minimum distance between accepted centers");
    std::string count_overlay, count_json, count_id;
    count_cmd->add_option("--overlay", count_overlay,
                          "Write an annotated overlay PNG here");
    count_cmd->add_option("--json", count_json, "Also write the report here");
    count_cmd->add_option("--id", count_id,
                          "Report id (defaults to the file stem)");
    bool count_timing = false;
    count_cmd->add_flag("--timing", count_timing,
                        "Include per-stage timings in the report");

    // eval ---------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand(
        "eval", "Evaluate predictions against reference instance maps");
    std::string eval_pred, eval_gt;
    eval_cmd->add_option("--pred", eval_pred, "Directory of predictions")
        ->required();
    eval_cmd->add_option("--gt", eval_gt, "Directory of reference maps")
        ->required();
    PipelineFlags eval_flags;
    add_pipeline_flags(eval_cmd, eval_flags);
    double eval_tau = 0.5;
    eval_cmd->add_option("--tau", eval_tau,
                         "Coverage fraction for instance matching");
    int eval_jobs = 0;
    eval_cmd->add_option("--jobs", eval_jobs,
                         "Worker threads (0 = hardware count)");
    std::string eval_csv, eval_json;
    eval_cmd->add_option("--csv", eval_csv, "Write the report as CSV here");
    eval_cmd->add_option("--json", eval_json, "Write the report here");

    // preprocess -----------------------------------------------------------
    auto* prep_cmd = app.add_subcommand(
        "preprocess", "Render reference images or erode masks in bulk");
    std::string prep_mode, prep_in, prep_out;
    prep_cmd->add_option("--mode", prep_mode,
                         "flat, red-gradient, gray-gradient or erode")
        ->required()
        ->check(CLI::IsMember(
            {"flat", "red-gradient", "gray-gradient", "erode"}));
    prep_cmd->add_option("--in", prep_in, "Input directory")->required();
    prep_cmd->add_option("--out", prep_out, "Output directory")->required();
    int prep_max_diameter = 0;
    prep_cmd->add_option("--max-diameter", prep_max_diameter,
                         "Gradient cap for red-gradient mode");
    int prep_iters = 15;
    prep_cmd->add_option("--iters", prep_iters, "Erosion iterations");
    PipelineFlags prep_flags;
    add_pipeline_flags(prep_cmd, prep_flags);

    // hough ------------------------------------------------------------
    auto* hough_cmd =
        app.add_subcommand("hough", "Detect circles in a segmented image");
    std::string hough_image;
    hough_cmd->add_option("image", hough_image, "Input image")->required();
    PipelineFlags hough_flags;
    add_pipeline_flags(hough_cmd, hough_flags);
    logtally::HoughParams hough_params;
    hough_cmd->add_option("--rmin", hough_params.r_min, "Smallest radius");
    hough_cmd->add_option("--rmax", hough_params.r_max, "Largest radius");
    hough_cmd->add_option("--radius-step", hough_params.radius_step,
                          "Radius increment");
    hough_cmd->add_option("--vote-threshold", hough_params.vote_threshold,
                          "Perimeter fraction required for a detection");
    hough_cmd->add_option("--nms", hough_params.nms_min_center_dist,
                          "Minimum distance between accepted centers");
    std::string hough_json;
    hough_cmd->add_option("--json", hough_json, "Also write the report here");

    // volume -----------------------------------------------------------
    auto* vol_cmd = app.add_subcommand(
        "volume", "Estimate pile volume from a count report");
    std::string vol_report;
    vol_cmd->add_option("--report", vol_report, "Count report JSON")
        ->required();
    double vol_ppm = 0.0, vol_depth = 0.0;
    vol_cmd->add_option("--px-per-meter", vol_ppm, "Image scale")->required();
    vol_cmd->add_option("--depth", vol_depth, "Uniform log depth in meters")
        ->required();
    std::string vol_json;
    vol_cmd->add_option("--json", vol_json, "Also write the result here");

    // synth ------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand(
        "synth", "Generate synthetic scenes from a JSON spec");
    std::string synth_spec, synth_out;
    synth_cmd->add_option("--spec", synth_spec, "Scene spec JSON")->required();
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    // serve ------------------------------------------------------------
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    int serve_port = -1;
    serve_cmd->add_option("--port", serve_port,
                          "TCP port (default: LOGTALLY_PORT or 8080)");
    int serve_max_body = 32;
    serve_cmd->add_option("--max-body-mib", serve_max_body,
                          "Reject request bodies larger than this");
    PipelineFlags serve_flags;
    add_pipeline_flags(serve_cmd, serve_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (count_cmd->parsed()) {
        logtally::PipelineConfig cfg = make_config(count_flags);
        if (count_counter == "hough") {
            cfg.counter = logtally::CounterKind::hough;
        } else if (count_counter == "centroids") {
            cfg.counter = logtally::CounterKind::reconstruction_centroids;
        }
        cfg.hough = count_hough;
        cfg.centroid_depth = count_h;
        logtally::CountReport report = logtally::run_count(count_image, cfg);
        if (!count_id.empty()) report.id = count_id;
        const std::string json =
            logtally::count_report_json(report, count_timing);
        std::cout << json << "\n";
        if (!count_json.empty()) write_text(count_json, json + "\n");
        if (!count_overlay.empty()) {
            const logtally::DecodedImage decoded =
                logtally::read_image(count_image);
            const logtally::RgbImage base = overlay_base(decoded);
            logtally::RgbImage annotated;
            if (cfg.counter == logtally::CounterKind::connected_components) {
                annotated = logtally::render_overlay(base, report.labels);
            } else {
                std::vector<logtally::PixelCoord> points;
                if (cfg.counter == logtally::CounterKind::hough) {
                    for (const logtally::Circle& c : report.circles) {
                        points.push_back(c.center);
                    }
                } else {
                    points = report.centroids;
                }
                annotated = logtally::render_overlay_points(base, points);
            }
            logtally::write_png(count_overlay, annotated);
        }
        return 0;
    }

    if (eval_cmd->parsed()) {
        logtally::MatchParams match;
        match.coverage_tau = eval_tau;
        const logtally::EvalReport report = logtally::run_eval(
            eval_pred, eval_gt, match, make_config(eval_flags), eval_jobs);
        const std::string json = logtally::eval_report_json(report);
        std::cout << json << "\n";
        if (!eval_json.empty()) write_text(eval_json, json + "\n");
        if (!eval_csv.empty()) {
            write_text(eval_csv, logtally::eval_report_csv(report));
        }
        return report.errors.empty() ? 0 : 3;
    }

    if (prep_cmd->parsed()) {
        fs::create_directories(prep_out);
        const logtally::PipelineConfig cfg = make_config(prep_flags);
        std::size_t done = 0;
        for (const auto& entry : fs::directory_iterator(prep_in)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            for (char& ch : ext) {
                ch = static_cast<char>(std::tolower(
                    static_cast<unsigned char>(ch)));
            }
            if (ext != ".png" && ext != ".pgm" && ext != ".ppm") continue;
            const logtally::DecodedImage decoded =
                logtally::read_image(entry.path().string());
            const std::string out_path =
                (fs::path(prep_out) / (entry.path().stem().string() + ".png"))
                    .string();
            if (prep_mode == "erode") {
                logtally::BinaryMask mask =
                    logtally::decoded_to_mask(decoded, cfg.binarize);
                mask = logtally::erode(mask, cfg.post_erosion.se, prep_iters);
                logtally::write_png(out_path, logtally::mask_to_gray(mask));
            } else {
                const logtally::LabelMap labels =
                    logtally::decoded_to_labels(decoded);
                logtally::GroundTruthMode mode =
                    logtally::GroundTruthMode::flat_red();
                if (prep_mode == "red-gradient") {
                    mode = logtally::GroundTruthMode::red_gradient_capped(
                        prep_max_diameter);
                } else if (prep_mode == "gray-gradient") {
                    mode = logtally::GroundTruthMode::gray_gradient_full();
                }
                const auto rendered =
                    logtally::make_ground_truth(labels, mode);
                if (std::holds_alternative<logtally::RgbImage>(rendered)) {
                    logtally::write_png(out_path,
                                        std::get<logtally::RgbImage>(rendered));
                } else {
                    logtally::write_png(
                        out_path, std::get<logtally::GrayImage>(rendered));
                }
            }
            ++done;
        }
        std::cerr << "processed " << done << " file(s) into " << prep_out
                  << "\n";
        return 0;
    }

    if (hough_cmd->parsed()) {
        logtally::PipelineConfig cfg = make_config(hough_flags);
        cfg.counter = logtally::CounterKind::hough;
        cfg.hough = hough_params;
        const logtally::CountReport report =
            logtally::run_count(hough_image, cfg);
        const std::string json = logtally::count_report_json(report);
        std::cout << json << "\n";
        if (!hough_json.empty()) write_text(hough_json, json + "\n");
        return 0;
    }

    if (vol_cmd->parsed()) {
        const std::vector<std::uint8_t> bytes =
            logtally::read_file_bytes(vol_report);
        ordered_json doc;
        try {
            doc = ordered_json::parse(bytes.begin(), bytes.end());
        } catch (const std::exception& e) {
            throw logtally::InvalidInput(std::string("bad report JSON: ") +
                                         e.what());
        }
        std::vector<logtally::LogDims> dims;
        const logtally::ScaleCalibration cal{vol_ppm};
        cal.validate();
        if (doc.contains("components")) {
            for (const auto& c : doc["components"]) {
                dims.push_back(
                    {c.at("equivalent_radius").get<double>() / vol_ppm,
                     vol_depth});
            }
        } else if (doc.contains("circles")) {
            for (const auto& c : doc["circles"]) {
                dims.push_back(
                    {c.at("radius").get<double>() / vol_ppm, vol_depth});
            }
        } else {
            throw logtally::InvalidInput(
                "report has neither components nor circles");
        }
        const logtally::PileVolume pile = logtally::pile_volume(dims);
        ordered_json j;
        j["log_count"] = pile.log_count;
        j["per_log_m3"] = pile.per_log;
        j["total_m3"] = pile.total;
        const std::string json = j.dump(2);
        std::cout << json << "\n";
        if (!vol_json.empty()) write_text(vol_json, json + "\n");
        return 0;
    }

    if (synth_cmd->parsed()) {
        const std::vector<std::uint8_t> bytes =
            logtally::read_file_bytes(synth_spec);
        ordered_json doc;
        try {
            doc = ordered_json::parse(bytes.begin(), bytes.end());
        } catch (const std::exception& e) {
            throw logtally::InvalidInput(std::string("bad scene spec: ") +
                                         e.what());
        }
        logtally::SynthSpec spec;
        int scenes = 1;
        std::string stem = "scene";
        for (const auto& [key, value] : doc.items()) {
            if (key == "width") spec.width = value.get<int>();
            else if (key == "height") spec.height = value.get<int>();
            else if (key == "n_logs") spec.n_logs = value.get<int>();
            else if (key == "radius_min") spec.radius_min = value.get<double>();
            else if (key == "radius_max") spec.radius_max = value.get<double>();
            else if (key == "min_gap") spec.min_gap = value.get<double>();
            else if (key == "seed") spec.seed = value.get<std::uint64_t>();
            else if (key == "noise_blobs") spec.noise_blobs = value.get<int>();
            else if (key == "noise_area_min")
                spec.noise_area_min = value.get<int>();
            else if (key == "noise_area_max")
                spec.noise_area_max = value.get<int>();
            else if (key == "roughness") spec.roughness = value.get<double>();
            else if (key == "count") scenes = value.get<int>();
            else if (key == "stem") stem = value.get<std::string>();
            else
                throw logtally::InvalidInput("unknown spec key '" + key + "'");
        }
        if (scenes < 1) {
            throw logtally::InvalidInput("count must be at least 1");
        }
        for (int k = 0; k < scenes; ++k) {
            logtally::SynthSpec one = spec;
            one.seed = spec.seed + static_cast<std::uint64_t>(k);
            std::string name = stem;
            if (scenes > 1) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "_%03d", k);
                name += buf;
            }
            logtally::export_scene(logtally::generate(one), synth_out, name);
        }
        std::cerr << "wrote " << scenes << " scene(s) to " << synth_out
                  << "\n";
        return 0;
    }

    if (serve_cmd->parsed()) {
        logtally::ServeOptions opts;
        opts.port = logtally::resolve_port(serve_port);
        if (serve_max_body < 1) {
            throw logtally::InvalidInput("--max-body-mib must be positive");
        }
        opts.max_body_bytes = static_cast<std::size_t>(serve_max_body) << 20;
        opts.defaults = make_config(serve_flags);
        logtally::Service service(opts);
        if (!service.start()) {
            throw logtally::Error("cannot bind port " +
                                  std::to_string(opts.port));
        }
        std::cerr << "listening on port " << service.port() << "\n";
        service.wait();
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const logtally::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
