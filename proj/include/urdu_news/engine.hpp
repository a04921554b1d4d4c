#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "urdu_news/corpus.hpp"
#include "urdu_news/embed.hpp"
#include "urdu_news/metrics.hpp"
#include "urdu_news/recommend.hpp"
#include "urdu_news/textnorm.hpp"
#include "urdu_news/tfidf.hpp"
#include "urdu_news/tokenize.hpp"

namespace urdu_news {

// normalize -> tokenize -> drop stopwords
inline TokenList preprocess_text(std::string_view text, const textnorm::NormalizerConfig& normalizer,
                                 const StopwordSet& stopwords, std::optional<ArticleId> source = std::nullopt) {
  return remove_stopwords(tokenize(textnorm::normalize(text, normalizer), source), stopwords);
}

inline std::map<ArticleId, TokenList> preprocess_corpus(const Corpus& corpus,
                                                        const textnorm::NormalizerConfig& normalizer,
                                                        const StopwordSet& stopwords) {
  std::map<ArticleId, TokenList> docs;
  for (const Article& a : corpus) docs.emplace(a.id, preprocess_text(a.body, normalizer, stopwords, a.id));
  return docs;
}

inline void save_index_file(const TfIdfIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write index file: " + path);
  save_index(index, out);
  out.flush();
  if (!out) throw IoError("failed writing index file: " + path);
}

inline TfIdfIndex load_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index file: " + path);
  return load_index(in);
}

struct EngineConfig {
  std::string corpus_path;
  char delimiter = ',';
  std::optional<std::string> stopwords_path;
  textnorm::NormalizerConfig normalizer;
  TfScheme tf_scheme = TfScheme::raw;
  std::optional<std::string> index_path;  // load instead of building
  std::optional<EmbeddingProviderConfig> embedding;
};

// Corpus, index and embedding source, loaded once and read-only afterwards.
class Engine {
 public:
  Engine(Corpus corpus, StopwordSet stopwords, textnorm::NormalizerConfig normalizer,
         std::optional<TfIdfIndex> index = std::nullopt, TfScheme tf_scheme = TfScheme::raw)
      : corpus_(std::make_unique<Corpus>(std::move(corpus))),
        stopwords_(std::move(stopwords)),
        normalizer_(std::move(normalizer)) {
    normalizer_.validate();
    if (index) {
      index_ = std::make_unique<TfIdfIndex>(std::move(*index));
      for (const Article& a : *corpus_) {
        if (!index_->find(a.id)) {
          throw DataError("index has no vector for article " + std::to_string(a.id) + "; rebuild it");
        }
      }
    } else if (!corpus_->empty()) {
      index_ = std::make_unique<TfIdfIndex>(
          build_index(preprocess_corpus(*corpus_, normalizer_, stopwords_), tf_scheme));
    } else {
      index_ = std::make_unique<TfIdfIndex>();
    }
    tfidf_ = std::make_unique<TfIdfBackend>(index_.get());
    embedding_ = std::make_unique<EmbeddingBackend>(nullptr);
  }

  static Engine load(const EngineConfig& config) {
    Corpus corpus = load_corpus(config.corpus_path, config.delimiter);
    StopwordSet stopwords = config.stopwords_path ? load_stopwords(*config.stopwords_path) : StopwordSet{};
    std::optional<TfIdfIndex> index;
    if (config.index_path) index = load_index_file(*config.index_path);
    Engine engine(std::move(corpus), std::move(stopwords), config.normalizer, std::move(index), config.tf_scheme);
    if (config.embedding) engine.attach_embeddings(*config.embedding);
    return engine;
  }

  void attach_embeddings(const EmbeddingProviderConfig& config) {
    config.validate();
    if (config.mode == EmbeddingMode::file) {
      auto store = std::make_unique<EmbeddingStore>(load_embeddings(*config.path));
      if (config.expected_dim && store->dim() != *config.expected_dim) {
        throw DimensionError("embedding file dimension " + std::to_string(store->dim()) + " != expected " +
                             std::to_string(*config.expected_dim));
      }
      attach_vector_source(std::move(store));
    } else {
      std::map<ArticleId, std::string> texts;
      for (const Article& a : *corpus_) texts.emplace(a.id, textnorm::normalize(a.body, normalizer_));
      attach_vector_source(std::make_unique<RemoteVectorSource>(config, std::move(texts)));
    }
  }

  void attach_vector_source(std::unique_ptr<VectorSource> source) {
    vectors_ = std::move(source);
    embedding_ = std::make_unique<EmbeddingBackend>(vectors_.get());
  }

  const Corpus& corpus() const { return *corpus_; }
  const TfIdfIndex& index() const { return *index_; }
  const StopwordSet& stopwords() const { return stopwords_; }
  const textnorm::NormalizerConfig& normalizer() const { return normalizer_; }
  bool has_embeddings() const { return vectors_ != nullptr; }

  const SimilarityBackend& backend(BackendKind kind) const {
    if (kind == BackendKind::tfidf) return *tfidf_;
    return *embedding_;
  }

  std::vector<Recommendation> recommend(const Session& session, const RecommenderConfig& config) const {
    return urdu_news::recommend(session, config, backend(config.backend), *corpus_);
  }

 private:
  std::unique_ptr<Corpus> corpus_;
  StopwordSet stopwords_;
  textnorm::NormalizerConfig normalizer_;
  std::unique_ptr<TfIdfIndex> index_;
  std::unique_ptr<VectorSource> vectors_;
  std::unique_ptr<TfIdfBackend> tfidf_;
  std::unique_ptr<EmbeddingBackend> embedding_;
};

struct SessionEvaluation {
  ConfusionMatrix confusion;
  MetricsReport report;
};

// Relevance convention: a candidate is relevant when it shares a category
// with an anchor read (the last read, or every read under max_over_reads).
// The universe is every unread article.
inline SessionEvaluation evaluate_session(const Engine& engine, const Session& session,
                                          const RecommenderConfig& config) {
  auto recs = engine.recommend(session, config);
  const Corpus& corpus = engine.corpus();
  std::set<Category> anchor_categories;
  if (config.aggregation == Aggregation::per_last_read) {
    anchor_categories.insert(get_article(corpus, session.read_ids.back()).category);
  } else {
    for (ArticleId id : session.read_ids) anchor_categories.insert(get_article(corpus, id).category);
  }
  std::set<ArticleId> universe;
  std::set<ArticleId> relevant;
  for (const Article& a : corpus) {
    if (session.has_read(a.id)) continue;
    universe.insert(a.id);
    if (anchor_categories.count(a.category)) relevant.insert(a.id);
  }
  std::set<ArticleId> predicted;
  for (const auto& r : recs) predicted.insert(r.article_id);
  SessionEvaluation out;
  out.confusion = confusion_from_labels(predicted, relevant, universe);
  out.report = compute_metrics(out.confusion);
  return out;
}

}  // namespace urdu_news
