/* Copyright 2026 The trlc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TRLC_SERVICE_HPP_
#define TRLC_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "trlc/session.hpp"

namespace trlc {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> data_dir;  // event logs; reloaded at startup
  EvalConfig config;
  std::string cors_origin = "*";
};

// Transport-neutral request and response, so the routing table can be
// exercised without a socket.
struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> params;  // query string
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::string text;  // used instead of `body` when content_type isn't JSON
  std::string content_type = "application/json";
  std::string etag;  // state digest, when the response describes a session

  std::string payload() const;
};

// The project API: sessions keyed by opaque id.
class Api {
 public:
  explicit Api(EvalConfig config = {},
               std::optional<std::filesystem::path> data_dir = std::nullopt);

  ApiResponse handle(const ApiRequest& request);

  std::shared_ptr<ProjectSession> find(const std::string& id) const;
  std::vector<std::shared_ptr<ProjectSession>> sessions() const;

 private:
  ApiResponse create(const nlohmann::json& body);
  ApiResponse project(const std::shared_ptr<ProjectSession>& s, const std::string& method,
                      const std::string& action, const ApiRequest& request);
  std::string fresh_id();

  EvalConfig config_;
  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<ProjectSession>> sessions_;
  std::vector<std::string> order_;  // creation order
};

// HTTP front end over Api.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();

  Api& api();
  // Binds the socket and returns the port in use.
  int bind();
  // Serves until stop(); bind() first.
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trlc

#endif  // TRLC_SERVICE_HPP_
