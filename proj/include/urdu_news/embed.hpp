#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "urdu_news/corpus.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/tfidf.hpp"
#include "urdu_news/utf8.hpp"

namespace urdu_news {

// Finite, fixed-length dense vector.
class DenseVector {
 public:
  DenseVector() = default;

  explicit DenseVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DimensionError("dense vector must have positive dimension");
    for (double v : values_) {
      if (!std::isfinite(v)) throw DataError("dense vector contains a non-finite value");
    }
  }

  std::size_t dim() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

inline double cosine(const DenseVector& a, const DenseVector& b) { return cosine(a.span(), b.span()); }

// Anything that can hand out a vector per article.
class VectorSource {
 public:
  virtual ~VectorSource() = default;
  // Throws NotFoundError for unknown ids, NetworkError for remote failures.
  virtual DenseVector vector_for(ArticleId id) const = 0;
};

class EmbeddingStore : public VectorSource {
 public:
  explicit EmbeddingStore(std::size_t dim = 1) : dim_(dim) {
    if (dim_ == 0) throw DimensionError("embedding dimension must be positive");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(ArticleId id) const { return vectors_.count(id) != 0; }
  const std::map<ArticleId, DenseVector>& vectors() const { return vectors_; }

  void insert(ArticleId id, DenseVector v) {
    if (v.dim() != dim_) {
      throw DimensionError("vector for article " + std::to_string(id) + " has dimension " +
                           std::to_string(v.dim()) + ", expected " + std::to_string(dim_));
    }
    if (!vectors_.emplace(id, std::move(v)).second) {
      throw DataError("duplicate embedding for article " + std::to_string(id));
    }
  }

  DenseVector vector_for(ArticleId id) const override { return get(id); }

  const DenseVector& get(ArticleId id) const {
    auto it = vectors_.find(id);
    if (it == vectors_.end()) throw NotFoundError("no embedding for article " + std::to_string(id));
    return it->second;
  }

  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
    return a.dim_ == b.dim_ && a.vectors_ == b.vectors_;
  }

 private:
  std::size_t dim_;
  std::map<ArticleId, DenseVector> vectors_;
};

inline const DenseVector& get_embedding(const EmbeddingStore& store, ArticleId id) { return store.get(id); }

// File format:
//   dim <d>
//   <article_id>\t<v1> <v2> ... <vd>
inline EmbeddingStore parse_embeddings(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto l = text.substr(pos, nl - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    pos = nl + 1;
  }
  if (lines.empty() || lines[0].substr(0, 4) != "dim ") throw DataError("embeddings: line 1: expected 'dim <d>'");
  std::size_t dim = 0;
  try {
    dim = detail::parse_number<std::size_t>(lines[0].substr(4), "dimension");
  } catch (const DataError&) {
    throw DataError("embeddings: line 1: malformed dimension");
  }
  if (dim == 0) throw DataError("embeddings: line 1: dimension must be positive");
  EmbeddingStore store(dim);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = std::to_string(i + 1);
    auto l = lines[i];
    if (l.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto tab = l.find('\t');
    if (tab == std::string_view::npos) throw DataError("embeddings: line " + line_no + ": missing tab after id");
    ArticleId id = 0;
    std::vector<double> values;
    try {
      id = detail::parse_number<ArticleId>(l.substr(0, tab), "article id");
      std::istringstream row{std::string(l.substr(tab + 1))};
      std::string cell;
      while (row >> cell) values.push_back(detail::parse_number<double>(cell, "component"));
    } catch (const DataError& e) {
      throw DataError("embeddings: line " + line_no + ": " + e.what());
    }
    if (values.size() != dim) {
      throw DimensionError("embeddings: line " + line_no + ": expected " + std::to_string(dim) +
                           " components, found " + std::to_string(values.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw DataError("embeddings: line " + line_no + ": non-finite value");
    }
    if (store.contains(id)) throw DataError("embeddings: line " + line_no + ": duplicate id " + std::to_string(id));
    store.insert(id, DenseVector(std::move(values)));
  }
  return store;
}

inline EmbeddingStore load_embeddings(const std::string& path) { return parse_embeddings(utf8::read_file(path)); }

inline void save_embeddings(const EmbeddingStore& store, std::ostream& out) {
  out << "dim " << store.dim() << '\n';
  for (const auto& [id, vec] : store.vectors()) {
    out << id << '\t';
    for (std::size_t i = 0; i < vec.dim(); ++i) {
      if (i) out << ' ';
      out << detail::format_double(vec.values()[i]);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Remote provider

enum class EmbeddingMode { file, remote };

struct EmbeddingProviderConfig {
  EmbeddingMode mode = EmbeddingMode::file;
  std::optional<std::string> path;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{10'000};
  std::optional<std::size_t> expected_dim;

  void validate() const {
    if (mode == EmbeddingMode::file && !path) throw ConfigError("file embedding mode requires a path");
    if (mode == EmbeddingMode::remote && !endpoint) throw ConfigError("remote embedding mode requires an endpoint");
    if (timeout.count() <= 0) throw ConfigError("embedding timeout must be positive");
  }
};

namespace detail {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // begins with '/'
};

inline ParsedUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must be an absolute URL: " + url);
  if (url.compare(0, scheme_end, "http") != 0) throw ConfigError("only http endpoints are supported: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

inline void set_seconds(httplib::Client& client, std::chrono::milliseconds timeout) {
  auto sec = static_cast<time_t>(timeout.count() / 1000);
  auto usec = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
}

}  // namespace detail

// POST {"text": ...} -> {"embedding": [...]}. Each call uses its own
// connection, so concurrent calls share no mutable state.
inline DenseVector embed_remote(std::string_view text, const EmbeddingProviderConfig& config) {
  if (config.mode != EmbeddingMode::remote) throw ConfigError("embed_remote requires remote mode");
  config.validate();
  auto url = detail::split_url(*config.endpoint);
  httplib::Client client(url.origin);
  detail::set_seconds(client, config.timeout);
  nlohmann::json request = {{"text", std::string(text)}};
  auto res = client.Post(url.path, request.dump(), "application/json");
  if (!res) {
    throw NetworkError("embedding request to " + *config.endpoint + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw NetworkError("embedding endpoint returned HTTP " + std::to_string(res->status));
  }
  std::vector<double> values;
  try {
    auto body = nlohmann::json::parse(res->body);
    values = body.at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(std::string("malformed embedding response: ") + e.what());
  }
  if (config.expected_dim && values.size() != *config.expected_dim) {
    throw DimensionError("embedding endpoint returned dimension " + std::to_string(values.size()) +
                         ", expected " + std::to_string(*config.expected_dim));
  }
  try {
    return DenseVector(std::move(values));
  } catch (const Error& e) {
    throw NetworkError(std::string("malformed embedding response: ") + e.what());
  }
}

// Embeds article texts on first use through the remote endpoint and caches
// the result. Dimension is pinned by the first vector received unless set.
class RemoteVectorSource : public VectorSource {
 public:
  RemoteVectorSource(EmbeddingProviderConfig config, std::map<ArticleId, std::string> texts)
      : config_(std::move(config)), texts_(std::move(texts)) {
    config_.validate();
  }

  DenseVector vector_for(ArticleId id) const override {
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(id); it != cache_.end()) return it->second;
    }
    auto text = texts_.find(id);
    if (text == texts_.end()) throw NotFoundError("no text for article " + std::to_string(id));
    EmbeddingProviderConfig cfg = config_;
    {
      std::lock_guard lock(mutex_);
      if (!cfg.expected_dim && !cache_.empty()) cfg.expected_dim = cache_.begin()->second.dim();
    }
    DenseVector v = embed_remote(text->second, cfg);
    std::lock_guard lock(mutex_);
    return cache_.emplace(id, std::move(v)).first->second;
  }

 private:
  EmbeddingProviderConfig config_;
  std::map<ArticleId, std::string> texts_;
  mutable std::mutex mutex_;
  mutable std::map<ArticleId, DenseVector> cache_;
};

}  // namespace urdu_news
