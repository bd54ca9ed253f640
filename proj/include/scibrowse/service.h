// Copyright (C) 2026 The scibrowse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON-over-HTTP view of a library.
//
//   GET  /articles
//   GET  /articles/{id}
//   GET  /articles/{id}/toc?selected={section}
//   GET  /articles/{id}/references?order=appearance|alphabetical|original
//   GET  /articles/{id}/blocks
//   GET  /articles/{id}/model
//   GET  /articles/{id}/backlinks
//   GET  /anchors/{id}/context
//   GET  /instruments/{id}/usages
//   POST /ingest                      raw XML body or multipart field "file"
//   POST /kb/{id}/commands            command object or array; id "shared"
//                                     targets the shared store
//
// Article ids are DOIs and may contain '/'; routes are matched on their
// suffix. GET handlers run under a shared lock and never mutate; POST
// handlers hold the exclusive lock until the library is saved.

#ifndef SCIBROWSE_SERVICE_H_
#define SCIBROWSE_SERVICE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "scibrowse/library.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace scibrowse {

struct HttpRequest {
  std::string method;
  std::string path;  // percent-decoded
  std::map<std::string, std::string> params;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  // With a root, every successful POST is followed by Library::Save.
  explicit Service(Library library,
                   std::optional<std::filesystem::path> root = std::nullopt);

  HttpResponse Handle(const HttpRequest& request);

  // Registers a catch-all handler for GET and POST on `server`.
  void Mount(httplib::Server& server);

  std::string StateHash() const;

  // Runs `fn(const Library&)` under the shared lock.
  template <typename Fn>
  auto Read(Fn fn) const {
    std::shared_lock lock(mu_);
    return fn(library_);
  }

 private:
  HttpResponse Get(const HttpRequest& request) const;
  HttpResponse Post(const HttpRequest& request);

  mutable std::shared_mutex mu_;
  Library library_;
  std::optional<std::filesystem::path> root_;
};

// Serves until the process is stopped. Returns false if the port cannot be
// bound.
bool Serve(Service& service, const std::string& host, int port);

}  // namespace scibrowse

#endif  // SCIBROWSE_SERVICE_H_
