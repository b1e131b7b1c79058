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

#include <filesystem>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "trlc/service.hpp"

using namespace trlc;
using nlohmann::json;

namespace {

ApiResponse call(Api& api, const std::string& method, const std::string& path,
                 const json& body = nullptr) {
  ApiRequest r{method, path, {}, body.is_null() ? "" : body.dump()};
  const auto q = path.find('?');
  if (q != std::string::npos) {
    r.path = path.substr(0, q);
    const std::string kv = path.substr(q + 1);
    const auto eq = kv.find('=');
    r.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return api.handle(r);
}

std::string sample_project(Api& api) {
  const ApiResponse r = call(api, "POST", "/projects", {{"corpus", "sample_network"}, {"scope", {"car"}}});
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("trlc_service_" + std::to_string(std::random_device{}()));
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("corpus routes") {
  Api api;
  const ApiResponse all = call(api, "GET", "/corpus");
  CHECK(all.status == 200);
  CHECK(all.body.size() == 3);
  const ApiResponse one = call(api, "GET", "/corpus/sample_network");
  CHECK(one.body["program"].get<std::string>().find("task4") != std::string::npos);
  CHECK(call(api, "GET", "/corpus/nope").status == 404);
  CHECK(call(api, "POST", "/corpus").status == 405);
}

TEST_CASE("the monitoring scenario over the API") {
  Api api;
  CHECK(call(api, "GET", "/projects").body == json::array());
  const std::string id = sample_project(api);
  const std::string base = "/projects/" + id;

  ApiResponse r = call(api, "GET", base + "/state");
  CHECK(r.body["state"] == json::array({"start"}));
  CHECK(r.etag == r.body["digest"]);

  r = call(api, "POST", base + "/query", {{"goal", "task4(car)"}});
  CHECK(r.status == 200);
  CHECK(r.body["possible"] == false);

  r = call(api, "POST", base + "/assert", {{"fact", "artifact1(car)"}});
  CHECK(r.status == 200);
  CHECK(r.body["event"]["seq"] == 2);

  r = call(api, "POST", base + "/query", {{"goal", "?- possible task4(car)."}});
  CHECK(r.body["possible"] == true);
  CHECK(r.body["witness"] == json::array({"+artifact5(car)"}));

  r = call(api, "GET", base + "/enabled");
  REQUIRE(r.body["enabled"].size() == 2);
  CHECK(r.body["enabled"][0]["task"] == "task2(car)");
  CHECK(r.body["enabled"][1]["disjunct"] == 0);

  r = call(api, "POST", base + "/execute", {{"task", "task2(car)"}});
  CHECK(r.status == 200);
  CHECK(r.body["state"] == json::array({"artifact1(car)", "artifact3(car)", "start"}));

  r = call(api, "POST", base + "/plan", {{"goal", "artifact4(car)"}});
  CHECK(r.body["plan"] == json::array({"task1(car)", "task3(car)"}));

  r = call(api, "POST", base + "/undo");
  CHECK(r.body["state"] == json::array({"artifact1(car)", "start"}));

  r = call(api, "GET", base + "/history");
  CHECK(r.body["events"].size() == 4);

  r = call(api, "GET", base + "/graph");
  CHECK(r.body["nodes"].size() == 9);
  r = call(api, "GET", base + "/graph?format=dot");
  CHECK(r.content_type == "text/vnd.graphviz");
  CHECK(r.text.rfind("digraph lifecycle {", 0) == 0);
  CHECK(call(api, "GET", base + "/graph?format=svg").status == 400);

  CHECK(call(api, "GET", "/projects").body.size() == 1);
}

TEST_CASE("status codes") {
  Api api;
  const std::string base = "/projects/" + sample_project(api);
  const ApiResponse bad = call(api, "POST", "/projects", {{"program", "p :- q\nr."}});
  CHECK(bad.status == 422);
  CHECK(bad.body["error"] == "parse");
  CHECK(bad.body["line"] == 2);
  CHECK(bad.body.contains("column"));
  CHECK(call(api, "POST", "/projects", {{"corpus", "sample_network"}}).body["error"] == "scope");
  CHECK(call(api, "POST", "/projects", {{"corpus", "sample_network"}}).status == 422);
  CHECK(call(api, "POST", base + "/query", {{"goal", "tsak4(car)"}}).status == 422);
  CHECK(call(api, "POST", base + "/execute", {{"task", "task3(car)"}}).status == 409);
  CHECK(call(api, "POST", base + "/execute", {{"task", "task3(car)"}}).body["error"] == "not_executable");
  CHECK(call(api, "POST", base + "/undo").status == 409);
  CHECK(call(api, "POST", base + "/execute", json::object()).status == 422);
  CHECK(call(api, "GET", "/projects/nope/state").status == 404);
  CHECK(call(api, "GET", base + "/nothing").status == 404);
  CHECK(call(api, "GET", "/").status == 404);
  CHECK(call(api, "POST", base + "/state").status == 404);
  CHECK(call(api, "GET", base + "/execute").status == 404);

  ApiRequest raw{"POST", base + "/execute", {}, "{not json"};
  CHECK(api.handle(raw).status == 400);
  raw.body = "[1]";
  CHECK(api.handle(raw).status == 400);
}

TEST_CASE("queries leave the digest alone") {
  Api api;
  const std::string base = "/projects/" + sample_project(api);
  const std::string before = call(api, "GET", base + "/state").etag;
  call(api, "POST", base + "/query", {{"goal", "task1(car) | task2(car)"}});
  CHECK(call(api, "GET", base + "/state").etag == before);
}

TEST_CASE("HTTP transport") {
  TempDir dir;
  ServiceOptions opts;
  opts.port = 0;
  opts.data_dir = dir.path;
  std::string id;
  {
    Service service(opts);
    const int port = service.bind();
    REQUIRE(port > 0);
    std::thread t([&] { service.run(); });
    service.wait_until_ready();
    httplib::Client cli("127.0.0.1", port);

    auto r = cli.Get("/projects");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(json::parse(r->body) == json::array());
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");

    r = cli.Post("/projects", R"j({"corpus":"sample_network","scope":["car"]})j", "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
    id = json::parse(r->body)["id"];

    r = cli.Post("/projects/" + id + "/assert", R"j({"fact":"artifact1(car)"})j", "application/json");
    REQUIRE(r);
    const json body = json::parse(r->body);
    CHECK(r->get_header_value("ETag") == "\"" + body["digest"].get<std::string>() + "\"");

    r = cli.Get("/projects/" + id + "/graph?format=dot");
    REQUIRE(r);
    CHECK(r->get_header_value("Content-Type") == "text/vnd.graphviz");

    r = cli.Options("/projects");
    REQUIRE(r);
    CHECK(r->status == 204);
    CHECK(r->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

    service.stop();
    t.join();
  }
  // A new service over the same data directory picks the project back up.
  Api restored(EvalConfig{}, dir.path);
  const ApiResponse st = call(restored, "GET", "/projects/" + id + "/state");
  CHECK(st.status == 200);
  CHECK(st.body["state"] == json::array({"artifact1(car)", "start"}));
}
