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

#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "engine.hpp"

namespace httplib {
class Server;
}

namespace agriqa {

// Routes:
//   POST /v1/ask     AskRequest -> AskResponse
//   POST /v1/pairs   {question, answer, state?, district?, query_type?}
//   GET  /v1/health
//   POST /v1/reload  re-read model and index, then swap
//   GET  /ui/        static files from the configured ui_dir
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  void start(const std::string& host, int port);
  int port() const { return port_; }
  /// Blocks until stop() is called from another thread.
  void wait();
  /// Safe to call from any thread, more than once.
  void stop();

 private:
  Engine& engine_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex join_mu_;
  int port_ = 0;
};

}  // namespace agriqa
