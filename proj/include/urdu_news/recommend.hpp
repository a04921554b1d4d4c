#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "urdu_news/corpus.hpp"
#include "urdu_news/embed.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/tfidf.hpp"

namespace urdu_news {

enum class BackendKind { tfidf, embedding };

inline std::string_view backend_name(BackendKind b) { return b == BackendKind::tfidf ? "tfidf" : "embedding"; }

inline std::optional<BackendKind> parse_backend(std::string_view name) {
  if (name == "tfidf") return BackendKind::tfidf;
  if (name == "embedding") return BackendKind::embedding;
  return std::nullopt;
}

enum class Aggregation { per_last_read, max_over_reads };

inline std::string_view aggregation_name(Aggregation a) {
  return a == Aggregation::per_last_read ? "per_last_read" : "max_over_reads";
}

inline std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "per_last_read") return Aggregation::per_last_read;
  if (name == "max_over_reads") return Aggregation::max_over_reads;
  return std::nullopt;
}

struct RecommenderConfig {
  double threshold = 0.60;  // strict: score must exceed it
  std::size_t top_k = 10;
  BackendKind backend = BackendKind::tfidf;
  Aggregation aggregation = Aggregation::per_last_read;

  void validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in [0, 1]");
    if (top_k == 0) throw ConfigError("top_k must be positive");
  }
};

struct ScoredArticle {
  ArticleId article_id = 0;
  double score = 0.0;

  friend bool operator==(const ScoredArticle&, const ScoredArticle&) = default;
};

struct Recommendation {
  ArticleId article_id = 0;
  double score = 0.0;
  BackendKind backend = BackendKind::tfidf;
  ArticleId against_read_id = 0;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// ---------------------------------------------------------------------------
// Backends

class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  virtual BackendKind kind() const = 0;
  // Scores every corpus article except `read_id`, in corpus order.
  virtual std::vector<ScoredArticle> score_all(ArticleId read_id, const Corpus& corpus) const = 0;
};

class TfIdfBackend : public SimilarityBackend {
 public:
  explicit TfIdfBackend(const TfIdfIndex* index) : index_(index) {}

  BackendKind kind() const override { return BackendKind::tfidf; }

  std::vector<ScoredArticle> score_all(ArticleId read_id, const Corpus& corpus) const override {
    if (!index_ || index_->doc_vectors.empty()) throw BackendUnavailableError("TF-IDF index is not built");
    const SparseVector& read = vector_of(read_id);
    std::vector<ScoredArticle> out;
    out.reserve(corpus.size());
    for (const Article& a : corpus) {
      if (a.id == read_id) continue;
      out.push_back({a.id, cosine(read, vector_of(a.id))});
    }
    return out;
  }

 private:
  const SparseVector& vector_of(ArticleId id) const {
    const SparseVector* v = index_->find(id);
    if (!v) throw BackendUnavailableError("TF-IDF index has no vector for article " + std::to_string(id));
    return *v;
  }

  const TfIdfIndex* index_;
};

class EmbeddingBackend : public SimilarityBackend {
 public:
  explicit EmbeddingBackend(const VectorSource* source) : source_(source) {}

  BackendKind kind() const override { return BackendKind::embedding; }

  std::vector<ScoredArticle> score_all(ArticleId read_id, const Corpus& corpus) const override {
    if (!source_) throw BackendUnavailableError("no embedding provider configured");
    const DenseVector read = lookup(read_id);
    std::vector<ScoredArticle> out;
    out.reserve(corpus.size());
    for (const Article& a : corpus) {
      if (a.id == read_id) continue;
      out.push_back({a.id, cosine(read, lookup(a.id))});
    }
    return out;
  }

 private:
  DenseVector lookup(ArticleId id) const {
    try {
      return source_->vector_for(id);
    } catch (const NotFoundError& e) {
      throw BackendUnavailableError(e.what());
    }
  }

  const VectorSource* source_;
};

inline std::vector<ScoredArticle> score_against_corpus(ArticleId read_id, const SimilarityBackend& backend,
                                                       const Corpus& corpus) {
  if (!corpus.contains(read_id)) throw NotFoundError("unknown article id " + std::to_string(read_id));
  return backend.score_all(read_id, corpus);
}

// ---------------------------------------------------------------------------
// Sessions

inline std::int64_t now_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

struct Session {
  std::string session_id;
  std::vector<ArticleId> read_ids;  // insertion order, no duplicates
  std::int64_t created_at = 0;      // ms since epoch
  std::int64_t updated_at = 0;

  bool has_read(ArticleId id) const {
    return std::find(read_ids.begin(), read_ids.end(), id) != read_ids.end();
  }

  friend bool operator==(const Session&, const Session&) = default;
};

inline Session new_session(std::string id, std::int64_t now = now_millis()) {
  return Session{std::move(id), {}, now, now};
}

// Appends `id` when absent; repeated reads leave the order untouched.
inline Session mark_read(Session session, ArticleId id, const Corpus& corpus, std::int64_t now = now_millis()) {
  if (!corpus.contains(id)) throw NotFoundError("unknown article id " + std::to_string(id));
  if (!session.has_read(id)) session.read_ids.push_back(id);
  session.updated_at = std::max(now, session.created_at);
  return session;
}

// ---------------------------------------------------------------------------
// Recommendation

inline std::vector<Recommendation> recommend(const Session& session, const RecommenderConfig& config,
                                             const SimilarityBackend& backend, const Corpus& corpus) {
  config.validate();
  if (session.read_ids.empty()) throw ConfigError("session '" + session.session_id + "' has no read articles");
  if (backend.kind() != config.backend) {
    throw ConfigError("backend mismatch: configured " + std::string(backend_name(config.backend)) +
                      ", given " + std::string(backend_name(backend.kind())));
  }
  std::vector<ArticleId> anchors;
  if (config.aggregation == Aggregation::per_last_read) {
    anchors.push_back(session.read_ids.back());
  } else {
    anchors = session.read_ids;
  }
  const std::set<ArticleId> read(session.read_ids.begin(), session.read_ids.end());

  struct Best {
    double score;
    ArticleId against;
  };
  std::map<ArticleId, Best> best;
  for (ArticleId anchor : anchors) {
    for (const auto& s : score_against_corpus(anchor, backend, corpus)) {
      if (read.count(s.article_id)) continue;
      auto [it, fresh] = best.try_emplace(s.article_id, Best{s.score, anchor});
      if (!fresh && (s.score > it->second.score || (s.score == it->second.score && anchor < it->second.against))) {
        it->second = Best{s.score, anchor};
      }
    }
  }

  std::vector<Recommendation> out;
  for (const auto& [id, b] : best) {
    if (b.score > config.threshold) out.push_back({id, b.score, backend.kind(), b.against});
  }
  std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.article_id < b.article_id;
  });
  if (out.size() > config.top_k) out.resize(config.top_k);
  return out;
}

}  // namespace urdu_news
