#pragma once

// HTTP + JSON facade over the engine with a file-backed session log.
//
//   GET  /health
//   GET  /articles?category=&offset=&limit=
//   GET  /articles/{id}
//   POST /sessions
//   POST /sessions/{id}/read                 {"article_id": n}
//   GET  /sessions/{id}/recommendations?backend=&threshold=&k=&aggregation=
//   GET  /metrics?session_id=&backend=&threshold=&k=&aggregation=

#include <charconv>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "urdu_news/engine.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/metrics.hpp"
#include "urdu_news/recommend.hpp"
#include "urdu_news/session_store.hpp"

namespace urdu_news {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  EngineConfig engine;
  std::string session_store_path = "sessions.jsonl";
  RecommenderConfig recommender;

  void validate() const {
    if (port < 0 || port > 65535) throw ConfigError("port out of range: " + std::to_string(port));
    if (session_store_path.empty()) throw ConfigError("session store path is required");
    recommender.validate();
  }
};

namespace detail {

// Thrown by request parsing; maps to HTTP 400.
struct BadRequest : Error {
  using Error::Error;
};

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

inline void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

template <class T>
std::optional<T> query_number(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const std::string raw = req.get_param_value(key);
  T value{};
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw BadRequest(std::string("invalid value for '") + key + "': " + raw);
  }
  return value;
}

inline nlohmann::json article_summary(const Article& a) {
  return {{"id", a.id}, {"headline", a.headline}, {"category", slug(a.category)}};
}

inline nlohmann::json article_full(const Article& a) {
  return {{"id", a.id},
          {"headline", a.headline},
          {"body", a.body},
          {"category", slug(a.category)},
          {"news_length", a.news_length}};
}

inline nlohmann::json session_view(const Session& s) {
  return {{"session_id", s.session_id}, {"read_ids", s.read_ids}};
}

}  // namespace detail

class Service {
 public:
  using Clock = std::function<std::int64_t()>;

  // Loads everything up front; throws on any load failure.
  explicit Service(const ServiceConfig& config)
      : Service((config.validate(), Engine::load(config.engine)), config.session_store_path, config.recommender) {
    host_ = config.host;
    requested_port_ = config.port;
  }

  Service(Engine engine, std::string session_store_path, RecommenderConfig defaults, Clock clock = now_millis)
      : engine_(std::move(engine)),
        store_(std::move(session_store_path)),
        defaults_(defaults),
        clock_(std::move(clock)),
        server_(std::make_unique<httplib::Server>()) {
    defaults_.validate();
    routes();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ~Service() { stop(); }

  void set_address(std::string host, int port) {
    host_ = std::move(host);
    requested_port_ = port;
  }

  // Binds and serves on a background thread. Returns the bound port.
  int start() {
    int port = requested_port_ == 0 ? server_->bind_to_any_port(host_) : requested_port_;
    if (requested_port_ != 0 && !server_->bind_to_port(host_, requested_port_)) port = -1;
    if (port <= 0) throw IoError("cannot bind " + host_ + ":" + std::to_string(requested_port_));
    port_ = port;
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
  }

  // Blocks until stop() is called from elsewhere.
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

  void stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }
  const Engine& engine() const { return engine_; }

 private:
  RecommenderConfig request_config(const httplib::Request& req) const {
    RecommenderConfig cfg = defaults_;
    if (req.has_param("backend")) {
      auto b = parse_backend(req.get_param_value("backend"));
      if (!b) throw detail::BadRequest("unknown backend: " + req.get_param_value("backend"));
      cfg.backend = *b;
    }
    if (req.has_param("aggregation")) {
      auto a = parse_aggregation(req.get_param_value("aggregation"));
      if (!a) throw detail::BadRequest("unknown aggregation: " + req.get_param_value("aggregation"));
      cfg.aggregation = *a;
    }
    if (auto t = detail::query_number<double>(req, "threshold")) cfg.threshold = *t;
    if (auto k = detail::query_number<std::size_t>(req, "k")) cfg.top_k = *k;
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw detail::BadRequest(e.what());
    }
    return cfg;
  }

  Session session_copy(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const Session* s = store_.find(id);
    if (!s) throw NotFoundError("unknown session " + id);
    return *s;
  }

  template <class Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const detail::BadRequest& e) {
        detail::send_error(res, 400, e.what());
      } catch (const NotFoundError& e) {
        detail::send_error(res, 404, e.what());
      } catch (const BackendUnavailableError& e) {
        detail::send_error(res, 503, e.what());
      } catch (const NetworkError& e) {
        detail::send_error(res, 503, e.what());
      } catch (const DimensionError& e) {
        detail::send_error(res, 503, e.what());
      } catch (const ConfigError& e) {
        detail::send_error(res, 400, e.what());
      } catch (const std::exception& e) {
        detail::send_error(res, 500, e.what());
      }
    };
  }

  void routes() {
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server_->Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
      detail::send_json(res, 200, {{"status", "ok"}, {"corpus_size", engine_.corpus().size()}});
    }));

    server_->Get("/articles", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<Category> filter;
      if (req.has_param("category") && !req.get_param_value("category").empty()) {
        filter = parse_category(req.get_param_value("category"));
        if (!filter) throw detail::BadRequest("unknown category: " + req.get_param_value("category"));
      }
      const auto offset = detail::query_number<std::size_t>(req, "offset").value_or(0);
      const auto limit = detail::query_number<std::size_t>(req, "limit").value_or(20);
      if (limit == 0 || limit > 500) throw detail::BadRequest("limit must be in [1, 500]");
      nlohmann::json items = nlohmann::json::array();
      std::size_t total = 0;
      for (const Article& a : engine_.corpus()) {
        if (filter && a.category != *filter) continue;
        if (total >= offset && items.size() < limit) items.push_back(detail::article_summary(a));
        ++total;
      }
      detail::send_json(res, 200, {{"total", total}, {"offset", offset}, {"limit", limit}, {"articles", items}});
    }));

    server_->Get(R"(/articles/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ArticleId id = 0;
      const std::string raw = req.matches[1];
      auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), id);
      if (ec != std::errc{}) throw NotFoundError("unknown article id " + raw);
      detail::send_json(res, 200, detail::article_full(get_article(engine_.corpus(), id)));
    }));

    server_->Post("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      Session s = new_session(store_.next_session_id(), clock_());
      store_.persist(s);
      detail::send_json(res, 201, {{"session_id", s.session_id}});
    }));

    server_->Post(R"(/sessions/([^/]+)/read)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ArticleId article_id = 0;
      try {
        auto body = nlohmann::json::parse(req.body);
        article_id = body.at("article_id").get<ArticleId>();
      } catch (const nlohmann::json::exception& e) {
        throw detail::BadRequest(std::string("malformed body: ") + e.what());
      }
      std::lock_guard lock(mutex_);
      const Session* current = store_.find(req.matches[1]);
      if (!current) throw NotFoundError("unknown session " + std::string(req.matches[1]));
      Session updated = mark_read(*current, article_id, engine_.corpus(), clock_());
      store_.persist(updated);
      detail::send_json(res, 200, detail::session_view(updated));
    }));

    server_->Get(R"(/sessions/([^/]+)/recommendations)",
                 guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const RecommenderConfig cfg = request_config(req);
                   const Session session = session_copy(req.matches[1]);
                   if (session.read_ids.empty()) throw detail::BadRequest("session has no read articles");
                   nlohmann::json items = nlohmann::json::array();
                   for (const auto& r : engine_.recommend(session, cfg)) {
                     items.push_back({{"article_id", r.article_id},
                                      {"headline", get_article(engine_.corpus(), r.article_id).headline},
                                      {"score", r.score},
                                      {"backend", backend_name(r.backend)},
                                      {"against_read_id", r.against_read_id}});
                   }
                   detail::send_json(res, 200,
                                     {{"session_id", session.session_id},
                                      {"backend", backend_name(cfg.backend)},
                                      {"threshold", cfg.threshold},
                                      {"k", cfg.top_k},
                                      {"recommendations", items}});
                 }));

    server_->Get("/metrics", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("session_id")) throw detail::BadRequest("session_id is required");
      const RecommenderConfig cfg = request_config(req);
      const Session session = session_copy(req.get_param_value("session_id"));
      if (session.read_ids.empty()) throw detail::BadRequest("session has no read articles");
      auto eval = evaluate_session(engine_, session, cfg);
      auto body = metrics_to_json(eval.confusion, eval.report);
      body["session_id"] = session.session_id;
      body["relevance"] = "category_match";
      detail::send_json(res, 200, body);
    }));
  }

  Engine engine_;
  mutable std::mutex mutex_;  // guards store_
  SessionStore store_;
  RecommenderConfig defaults_;
  Clock clock_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int requested_port_ = 0;
  int port_ = 0;
};

}  // namespace urdu_news
