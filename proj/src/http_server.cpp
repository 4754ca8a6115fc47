// Copyright 2026 The AgriQA Authors
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

#include "http_server.hpp"

#include <httplib.h>

#include "error.hpp"

namespace agriqa {

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void reply(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, nlohmann::ordered_json{{"error", message}});
}

// Invalid input maps to 400, everything else to 500.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    reply_error(res, e.kind() == ErrorKind::kInvalidArgument ? 400 : 500, e.what());
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, 400, std::string("bad JSON: ") + e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, e.what());
  }
}

}  // namespace

HttpServer::HttpServer(Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Post("/v1/ask", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto request = parse_ask_request(nlohmann::json::parse(req.body));
      reply(res, 200, to_json(engine_.ask(request)));
    });
  });
  s.Post("/v1/pairs", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto j = nlohmann::json::parse(req.body);
      if (!j.is_object()) fail(ErrorKind::kInvalidArgument, "request body must be a JSON object");
      PendingPair p;
      auto str = [&](const char* key) -> std::string {
        if (!j.contains(key) || j[key].is_null()) return "";
        if (!j[key].is_string()) fail(ErrorKind::kInvalidArgument, std::string("field '") + key + "' must be a string");
        return j[key].get<std::string>();
      };
      p.question = str("question");
      p.answer = str("answer");
      p.state = str("state");
      p.district = str("district");
      p.query_type = str("query_type");
      const auto ack = engine_.append_pair(p);
      reply(res, 200, nlohmann::ordered_json{{"status", "ok"}, {"duplicate", ack.duplicate}, {"pending", ack.pending}});
    });
  });
  s.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, to_json(engine_.health())); });
  });
  s.Post("/v1/reload", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      engine_.reload();
      reply(res, 200, to_json(engine_.health()));
    });
  });
  const auto& ui = engine_.config().ui_dir;
  if (!ui.empty()) {
    if (!s.set_mount_point("/ui/", ui.string())) {
      fail(ErrorKind::kIo, "ui_dir is not a readable directory: " + ui.string());
    }
    s.Get("/ui", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/ui/"); });
  }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start(const std::string& host, int port) {
  if (thread_.joinable()) fail(ErrorKind::kState, "server already started");
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) fail(ErrorKind::kIo, "could not bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::wait() {
  std::lock_guard lock(join_mu_);
  if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  wait();
}

}  // namespace agriqa
