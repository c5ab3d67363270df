// Copyright 2026 The Scriptorium Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// A loopback IIIF server for harvest tests. Serves the manifest fixtures,
// a 404, and an always-500 endpoint, and records when each request arrived.

#include <httplib.h>

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "support/testing.hpp"

namespace scriptorium::testing {

class ManifestServer {
 public:
  using Clock = std::chrono::steady_clock;

  ManifestServer() {
    for (const char* name : {"manifest_v2.json", "manifest_v3.json", "empty_canvases.json", "version1.json"}) {
      const std::string body = slurp(fixture(std::string("iiif/") + name));
      server_.Get(std::string("/") + name, [this, body](const httplib::Request& req, httplib::Response& res) {
        note(req.path);
        res.set_content(body, "application/json");
      });
    }
    server_.Get("/missing", [this](const httplib::Request& req, httplib::Response& res) {
      note(req.path);
      res.status = 404;
    });
    server_.Get("/broken", [this](const httplib::Request& req, httplib::Response& res) {
      note(req.path);
      res.status = 503;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ManifestServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ManifestServer(const ManifestServer&) = delete;
  ManifestServer& operator=(const ManifestServer&) = delete;

  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }
  int port() const { return port_; }

  std::vector<Clock::time_point> arrivals() const {
    std::lock_guard lock(mutex_);
    return arrivals_;
  }
  std::size_t hits(const std::string& path) const {
    std::lock_guard lock(mutex_);
    auto it = hits_.find(path);
    return it == hits_.end() ? 0 : it->second;
  }

 private:
  void note(const std::string& path) {
    std::lock_guard lock(mutex_);
    arrivals_.push_back(Clock::now());
    ++hits_[path];
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  std::vector<Clock::time_point> arrivals_;
  std::map<std::string, std::size_t> hits_;
};

// Smallest gap between consecutive request arrivals.
inline std::chrono::milliseconds min_gap(std::vector<std::chrono::steady_clock::time_point> times) {
  std::sort(times.begin(), times.end());
  auto best = std::chrono::milliseconds::max();
  for (std::size_t i = 1; i < times.size(); ++i)
    best = std::min(best, std::chrono::duration_cast<std::chrono::milliseconds>(times[i] - times[i - 1]));
  return best;
}

}  // namespace scriptorium::testing
