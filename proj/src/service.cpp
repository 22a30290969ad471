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

#include "logtally/service.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

using ordered_json = nlohmann::ordered_json;

namespace logtally {

namespace {

std::string error_json(const std::string& message) {
    ordered_json j;
    j["error"] = message;
    return j.dump(2);
}

void reply_error(httplib::Response& res, int status,
                 const std::string& message) {
    res.status = status;
    res.set_content(error_json(message), "application/json");
}

int parse_strict_int(const std::string& s, const char* what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput(std::string(what) + ": bad integer '" + s + "'");
    }
    if (used != s.size()) {
        throw InvalidInput(std::string(what) + ": bad integer '" + s + "'");
    }
    return v;
}

double parse_strict_double(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput(std::string(what) + ": bad number '" + s + "'");
    }
    if (used != s.size()) {
        throw InvalidInput(std::string(what) + ": bad number '" + s + "'");
    }
    return v;
}

CounterKind parse_counter(const std::string& s) {
    if (s == "cc" || s == "connected-components") {
        return CounterKind::connected_components;
    }
    if (s == "hough") return CounterKind::hough;
    if (s == "centroids" || s == "reconstruction-centroids") {
        return CounterKind::reconstruction_centroids;
    }
    throw InvalidInput("counter must be cc, hough or centroids, got '" + s +
                       "'");
}

Connectivity parse_connectivity(const std::string& s) {
    if (s == "4") return Connectivity::four;
    if (s == "8") return Connectivity::eight;
    throw InvalidInput("connectivity must be 4 or 8, got '" + s + "'");
}

}  // namespace

struct Service::Impl {
    ServeOptions opts;
    httplib::Server server;
    std::thread worker;
    int bound_port = -1;

    explicit Impl(const ServeOptions& o) : opts(o) { setup_routes(); }

    void setup_routes() {
        server.set_payload_max_length(opts.max_body_bytes);
        server.set_exception_handler([](const httplib::Request&,
                                        httplib::Response& res,
                                        std::exception_ptr ep) {
            std::string message = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                message = e.what();
            } catch (...) {
            }
            reply_error(res, 500, message);
        });

        server.Get("/healthz", [](const httplib::Request&,
                                  httplib::Response& res) {
            ordered_json j;
            j["status"] = "ok";
            res.set_content(j.dump(2), "application/json");
        });

        server.Post("/v1/count", [this](const httplib::Request& req,
                                        httplib::Response& res) {
            try {
                PipelineConfig cfg = opts.defaults;
                if (req.has_param("min_area")) {
                    cfg.min_area = parse_strict_int(
                        req.get_param_value("min_area"), "min_area");
                }
                if (req.has_param("connectivity")) {
                    cfg.connectivity = parse_connectivity(
                        req.get_param_value("connectivity"));
                }
                if (req.has_param("counter")) {
                    cfg.counter =
                        parse_counter(req.get_param_value("counter"));
                }
                const std::string id = req.has_param("id")
                                           ? req.get_param_value("id")
                                           : "upload";
                const CountReport report = run_count_bytes(
                    reinterpret_cast<const std::uint8_t*>(req.body.data()),
                    req.body.size(), id, cfg);
                res.set_content(count_report_json(report),
                                "application/json");
            } catch (const DecodeError& e) {
                reply_error(res, 400, e.what());
            } catch (const InvalidInput& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Post("/v1/evaluate", [this](const httplib::Request& req,
                                           httplib::Response& res) {
            try {
                if (!req.has_file("pred") || !req.has_file("gt")) {
                    reply_error(res, 400,
                                "multipart parts 'pred' and 'gt' required");
                    return;
                }
                MatchParams match;
                if (req.has_param("tau")) {
                    match.coverage_tau = parse_strict_double(
                        req.get_param_value("tau"), "tau");
                }
                const std::string id = req.has_param("id")
                                           ? req.get_param_value("id")
                                           : "pair";
                const auto& pred_part = req.get_file_value("pred");
                const auto& gt_part = req.get_file_value("gt");
                const DecodedImage pred = decode_image(
                    reinterpret_cast<const std::uint8_t*>(
                        pred_part.content.data()),
                    pred_part.content.size());
                const DecodedImage gt = decode_image(
                    reinterpret_cast<const std::uint8_t*>(
                        gt_part.content.data()),
                    gt_part.content.size());

                EvalReport report;
                report.rows.push_back(
                    eval_pair(pred, gt, id, match, opts.defaults));
                report.aggregate = aggregate_rows(report.rows);
                res.set_content(eval_report_json(report), "application/json");
            } catch (const DecodeError& e) {
                reply_error(res, 400, e.what());
            } catch (const InvalidInput& e) {
                reply_error(res, 400, e.what());
            }
        });
    }
};

Service::Service(const ServeOptions& options)
    : impl_(std::make_unique<Impl>(options)) {}

Service::~Service() {
    stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

bool Service::start() {
    if (impl_->opts.port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port("0.0.0.0");
        if (impl_->bound_port < 0) return false;
    } else {
        if (!impl_->server.bind_to_port("0.0.0.0", impl_->opts.port)) {
            return false;
        }
        impl_->bound_port = impl_->opts.port;
    }
    impl_->worker = std::thread([this] {
        impl_->server.listen_after_bind();
    });
    // Give the accept loop a moment; callers may connect immediately.
    for (int spins = 0; spins < 500 && !impl_->server.is_running(); ++spins) {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    return true;
}

void Service::wait() {
    if (impl_->worker.joinable()) impl_->worker.join();
}

void Service::stop() {
    impl_->server.stop();
}

int Service::port() const {
    return impl_->bound_port;
}

int resolve_port(int explicit_port) {
    if (explicit_port >= 0) return explicit_port;
    if (const char* env = std::getenv("LOGTALLY_PORT")) {
        const std::string s(env);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw InvalidInput("LOGTALLY_PORT is not a number: " + s);
        }
        if (used != s.size() || v < 1 || v > 65535) {
            throw InvalidInput("LOGTALLY_PORT out of range: " + s);
        }
        return v;
    }
    return 8080;
}

}  // namespace logtally
