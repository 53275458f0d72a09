#include "vecscope/server.hpp"

#include <httplib.h>

#include <charconv>
#include <json.hpp>
#include <optional>
#include <unordered_set>

#include "vecscope/bias.hpp"
#include "vecscope/canonical_json.hpp"
#include "vecscope/error.hpp"
#include "vecscope/expr.hpp"
#include "vecscope/plotspec.hpp"
#include "vecscope/retrieval.hpp"
#include "vecscope/transforms.hpp"

namespace vecscope::server {

using nlohmann::json;

namespace {

// A malformed request: bad JSON, missing or mistyped fields.
class RequestError : public Error {
 public:
  using Error::Error;
};

Response ok(const json& body) { return {200, canonical_json(body)}; }

Response fail(int status, const std::string& message) {
  return {status, canonical_json(json{{"error", message.empty() ? "error" : message}})};
}

const json* optional_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string require_string(const json& body, const char* key) {
  const json* v = optional_field(body, key);
  if (v == nullptr) throw RequestError(std::string("missing field \"") + key + '"');
  if (!v->is_string()) throw RequestError(std::string("field \"") + key + "\" must be a string");
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* key) {
  const json* v = optional_field(body, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) throw RequestError(std::string("field \"") + key + "\" must be a string");
  return v->get<std::string>();
}

std::size_t positive_int(const json& body, const char* key, std::size_t fallback) {
  const json* v = optional_field(body, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer() || v->get<long long>() < 1) {
    throw RequestError(std::string("field \"") + key + "\" must be a positive integer");
  }
  return v->get<std::size_t>();
}

bool boolean(const json& body, const char* key, bool fallback) {
  const json* v = optional_field(body, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) throw RequestError(std::string("field \"") + key + "\" must be a boolean");
  return v->get<bool>();
}

std::vector<std::string> string_list(const json& body, const char* key) {
  const json* v = optional_field(body, key);
  if (v == nullptr) throw RequestError(std::string("missing field \"") + key + '"');
  if (!v->is_array()) throw RequestError(std::string("field \"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& item : *v) {
    if (!item.is_string()) {
      throw RequestError(std::string("field \"") + key + "\" must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

Metric metric_field(const json& body) {
  auto name = optional_string(body, "metric");
  return name ? parse_metric(*name) : Metric::kCosine;
}

std::vector<TokenPair> pairs_field(const json& body) {
  const json* v = optional_field(body, "pairs");
  if (v == nullptr || !v->is_array()) throw RequestError("field \"pairs\" must be an array of [a, b]");
  std::vector<TokenPair> pairs;
  for (const auto& p : *v) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
      throw RequestError("each pair must be a two-element array of strings");
    }
    pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return pairs;
}

json neighbors_json(const Neighbors& neighbors) {
  json out = json::array();
  for (const auto& item : neighbors.items) {
    out.push_back({{"name", item.embedding.name()}, {"distance", item.distance}});
  }
  return out;
}

Exclusions exclusions_for(const Expr& expr, bool enabled) {
  Exclusions out;
  if (!enabled) return out;
  for (auto& t : leaf_tokens(expr)) out.insert(std::move(t));
  return out;
}

json transform_json(const EmbeddingSet& set, const json& body) {
  const std::string method = require_string(body, "method");
  const std::size_t k = positive_int(body, "k", 2);
  if (method == "pca") return to_json(pca_transform(set, k));
  if (method == "mds") return to_json(mds_transform(set, k, metric_field(body)));
  throw RequestError("unknown transform method \"" + method + "\" (expected pca or mds)");
}

json overlap_json(const OverlapReport& r) {
  return {{"token", r.token},   {"n", r.n},         {"before", r.before},
          {"after", r.after},   {"jaccard", r.jaccard}};
}

class Dispatcher {
 public:
  explicit Dispatcher(const std::vector<VectorStore>& stores) : stores_(stores) {}

  const VectorStore& store(const json& body) const {
    auto label = optional_string(body, "store");
    return store_by_label(label);
  }

  const VectorStore& store_by_label(const std::optional<std::string>& label) const {
    if (!label) return stores_.front();
    for (const auto& s : stores_) {
      if (s.label() == *label) return s;
    }
    throw RequestError("unknown store \"" + *label + '"');
  }

  json stores() const {
    json out = json::array();
    for (const auto& s : stores_) {
      out.push_back({{"label", s.label()}, {"dim", s.dim()}, {"size", s.size()}});
    }
    return out;
  }

  json vocab(const QueryParams& query) const {
    auto get = [&](const char* key) -> std::optional<std::string> {
      auto it = query.find(key);
      if (it == query.end()) return std::nullopt;
      return it->second;
    };
    const VectorStore& s = store_by_label(get("store"));
    const std::string prefix = get("prefix").value_or("");
    std::size_t limit = 50;
    if (auto raw = get("limit")) {
      auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), limit);
      if (ec != std::errc() || ptr != raw->data() + raw->size()) {
        throw RequestError("limit must be a non-negative integer");
      }
    }
    json out = json::array();
    for (std::size_t i = 0; i < s.size() && out.size() < limit; ++i) {
      if (s.token(i).starts_with(prefix)) out.push_back(s.token(i));
    }
    return out;
  }

  json eval(const json& body) const {
    const Embedding e = evaluate(parse(require_string(body, "expr")), store(body));
    return {{"name", e.name()}, {"dim", e.dim()}, {"vector", e.vector().components()}};
  }

  json similar(const json& body) const {
    const VectorStore& s = store(body);
    const Expr expr = parse(require_string(body, "expr"));
    const Embedding query = evaluate(expr, s);
    return neighbors_json(score_similar(s, query, positive_int(body, "n", 10), metric_field(body),
                                        exclusions_for(expr, boolean(body, "exclude_inputs", false))));
  }

  json plot(const json& body, const EmbeddingSet& set, const VectorStore& s) const {
    return to_json(scatter_projection(set, require_string(body, "x_axis"),
                                      require_string(body, "y_axis"), s,
                                      boolean(body, "show_axis_point", false)));
  }

  EmbeddingSet items(const json& body, const VectorStore& s) const {
    const auto specs = string_list(body, "items");
    return get_set(s, specs);
  }

  json debias(const json& body) const {
    const VectorStore& s = store(body);
    const EmbeddingSet original = items(body, s);
    const auto pairs = pairs_field(body);
    const BiasAxis axis = build_bias_axis(s, pairs);
    const EmbeddingSet debiased = debias_set(original, axis);

    const json* then = optional_field(body, "then");
    if (then == nullptr || !then->is_object() || then->size() != 1) {
      throw RequestError(
          "field \"then\" must be an object with one key: similar, distance, plot, arrows, "
          "transform, overlap or items");
    }
    const std::string view = then->begin().key();
    const json& params = then->begin().value();
    if (!params.is_object()) throw RequestError("\"then." + view + "\" must be an object");

    if (view == "similar") {
      const Expr expr = parse(require_string(params, "expr"));
      const Embedding query = reject(evaluate(expr, s), axis.axis);
      return neighbors_json(score_similar(
          debiased, query, positive_int(params, "n", 10), metric_field(params),
          exclusions_for(expr, boolean(params, "exclude_inputs", false))));
    }
    if (view == "distance") return to_json(heatmap(distance_matrix(debiased, metric_field(params))));
    if (view == "plot") return plot(params, debiased, s);
    if (view == "arrows") return to_json(arrow_plot(debiased));
    if (view == "transform") return transform_json(debiased, params);
    if (view == "overlap") {
      return overlap_json(neighborhood_overlap(original, debiased, require_string(params, "token"),
                                               positive_int(params, "n", 10), metric_field(params)));
    }
    if (view == "items") {
      json out = json::array();
      for (const auto& e : debiased) {
        out.push_back({{"name", e.name()},
                       {"derivation", e.expression()},
                       {"vector", e.vector().components()}});
      }
      return out;
    }
    throw RequestError("unknown debias view \"" + view + '"');
  }

  json post(std::string_view path, const json& body) const {
    if (path == "/api/eval") return eval(body);
    if (path == "/api/similar") return similar(body);
    const VectorStore& s = store(body);
    if (path == "/api/plot") return plot(body, items(body, s), s);
    if (path == "/api/arrows") return to_json(arrow_plot(items(body, s)));
    if (path == "/api/distance") {
      return to_json(heatmap(distance_matrix(items(body, s), metric_field(body))));
    }
    if (path == "/api/transform") return transform_json(items(body, s), body);
    if (path == "/api/debias") return debias(body);
    throw std::out_of_range("no route");
  }

 private:
  const std::vector<VectorStore>& stores_;
};

bool is_post_route(std::string_view path) {
  static const std::unordered_set<std::string_view> routes = {
      "/api/eval",     "/api/similar",   "/api/plot",  "/api/arrows",
      "/api/distance", "/api/transform", "/api/debias"};
  return routes.contains(path);
}

}  // namespace

Api::Api(std::vector<VectorStore> stores) : stores_(std::move(stores)) {
  if (stores_.empty()) throw InvalidArgument("the API needs at least one vector store");
  std::unordered_set<std::string> labels;
  for (const auto& s : stores_) {
    if (!labels.insert(s.label()).second) {
      throw InvalidArgument("duplicate store label \"" + s.label() + '"');
    }
  }
}

Response Api::handle(std::string_view method, std::string_view path, const QueryParams& query,
                     std::string_view body) const {
  const Dispatcher dispatch(stores_);
  const bool get_route = path == "/api/stores" || path == "/api/vocab";
  if (!get_route && !is_post_route(path)) return fail(404, "no such endpoint: " + std::string(path));
  if (get_route && method != "GET") return fail(405, "use GET for " + std::string(path));
  if (!get_route && method != "POST") return fail(405, "use POST for " + std::string(path));

  try {
    if (path == "/api/stores") return ok(dispatch.stores());
    if (path == "/api/vocab") return ok(dispatch.vocab(query));

    json request;
    try {
      request = json::parse(body);
    } catch (const json::parse_error& e) {
      return fail(400, std::string("invalid JSON body: ") + e.what());
    }
    if (!request.is_object()) return fail(400, "request body must be a JSON object");
    return ok(dispatch.post(path, request));
  } catch (const Error& e) {
    return fail(400, e.what());
  } catch (const json::exception& e) {
    return fail(400, e.what());
  } catch (const std::exception& e) {
    return fail(500, e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(const Api& a) : api(a) {}
  const Api& api;
  httplib::Server http;
};

HttpServer::HttpServer(const Api& api, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(api)) {
  auto& http = impl_->http;
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    QueryParams query(req.params.begin(), req.params.end());
    Response r = impl_->api.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  http.Get(R"(/api/.*)", route);
  http.Post(R"(/api/.*)", route);
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  if (!static_dir.empty()) {
    if (!http.set_mount_point("/", static_dir.string())) {
      throw Error("static asset directory '" + static_dir.string() + "' does not exist");
    }
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind to " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error("cannot bind to " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->http.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void HttpServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace vecscope::server
