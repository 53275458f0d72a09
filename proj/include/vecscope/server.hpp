#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/vecstore.hpp"

namespace vecscope::server {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using QueryParams = std::multimap<std::string, std::string>;

// Stateless JSON API over stores fixed at construction. Every request is a
// pure function of (stores, request); `handle` is safe to call from many
// threads at once.
//
// Requests that omit "store" use the first store.
class Api {
 public:
  // Throws InvalidArgument when no stores are given or labels collide.
  explicit Api(std::vector<VectorStore> stores);

  Response handle(std::string_view method, std::string_view path, const QueryParams& query,
                  std::string_view body) const;

  const std::vector<VectorStore>& stores() const { return stores_; }

 private:
  std::vector<VectorStore> stores_;
};

// cpp-httplib front end: routes /api/* to Api, serves `static_dir` (when
// set) under "/", and adds CORS headers.
class HttpServer {
 public:
  HttpServer(const Api& api, std::filesystem::path static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vecscope::server
