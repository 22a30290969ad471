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

#ifndef LOGTALLY_SERVICE_HPP_
#define LOGTALLY_SERVICE_HPP_

#include <memory>

#include "logtally/pipeline.hpp"

namespace logtally {

struct ServeOptions {
    /// TCP port; 0 binds any free port (useful for tests).
    int port = 8080;
    /// Requests with larger bodies are rejected with 413.
    std::size_t max_body_bytes = 32ull << 20;
    /// Base pipeline configuration; requests may override parts of it
    /// through query parameters.
    PipelineConfig defaults{};
};

/// Stateless counting service.
///
///   GET  /healthz       liveness probe
///   POST /v1/count      body: PNG/PGM/PPM, query: id, min_area,
///                       connectivity, counter (cc|hough|centroids)
///   POST /v1/evaluate   multipart parts "pred" and "gt", query: tau
///
/// Responses are JSON; a count response is byte-identical to what the
/// command line tool prints for the same image and settings.
class Service {
public:
    explicit Service(const ServeOptions& options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Bind and start serving on a background thread.
    /// Returns false when the port cannot be bound.
    bool start();

    /// Block until stop() is called from elsewhere.
    void wait();

    void stop();

    /// Port actually bound (differs from options.port when that was 0).
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Pick the service port: an explicit non-negative argument wins, then
/// the LOGTALLY_PORT environment variable, then 8080.
int resolve_port(int explicit_port);

}  // namespace logtally

#endif  // LOGTALLY_SERVICE_HPP_
