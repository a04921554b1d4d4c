#pragma once

// Randomized recommender contract checks shared by the unit and acceptance suites.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "urdu_news/recommend.hpp"

namespace contract {

using namespace urdu_news;

struct SyntheticCase {
  Corpus corpus;
  TfIdfIndex index;
  EmbeddingStore embeddings{4};
};

// Small vocabularies and repeated documents make high scores and exact ties common.
inline SyntheticCase synthetic_case(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_docs(2, 30);
  std::uniform_int_distribution<int> n_terms(2, 8);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_real_distribution<double> comp(0.0, 1.0);
  std::bernoulli_distribution duplicate(0.25);
  const int docs = n_docs(rng);
  const int terms = n_terms(rng);
  std::uniform_int_distribution<int> term(0, terms - 1);

  std::vector<ArticleId> ids(static_cast<std::size_t>(docs));
  for (int i = 0; i < docs; ++i) ids[i] = static_cast<ArticleId>(i) * 7 + 3;
  std::shuffle(ids.begin(), ids.end(), rng);

  SyntheticCase out;
  std::vector<Article> articles;
  std::map<ArticleId, TokenList> tokens;
  std::vector<std::vector<std::string>> bodies;
  std::vector<std::vector<double>> vectors;
  for (int i = 0; i < docs; ++i) {
    std::vector<std::string> body;
    std::vector<double> vec(4);
    if (i > 0 && duplicate(rng)) {
      std::uniform_int_distribution<int> prev(0, i - 1);
      int j = prev(rng);
      body = bodies[j];
      vec = vectors[j];
    } else {
      int l = len(rng);
      for (int k = 0; k < l; ++k) body.push_back("w" + std::to_string(term(rng)));
      for (auto& x : vec) x = comp(rng);
    }
    bodies.push_back(body);
    vectors.push_back(vec);
    Article a;
    a.id = ids[i];
    a.headline = "h" + std::to_string(a.id);
    for (const auto& w : body) a.body += (a.body.empty() ? "" : " ") + w;
    a.category = kAllCategories[static_cast<std::size_t>(i) % 4];
    a.news_length = a.body.size();
    articles.push_back(a);
    tokens.emplace(a.id, test_support::token_list(body));
    out.embeddings.insert(a.id, DenseVector(vec));
  }
  out.corpus = Corpus(std::move(articles));
  out.index = build_index(tokens);
  return out;
}

// Independent selection oracle over the raw per-anchor scores.
inline std::vector<Recommendation> oracle(const Session& session, const RecommenderConfig& config,
                                          const SimilarityBackend& backend, const Corpus& corpus) {
  std::vector<ArticleId> anchors = config.aggregation == Aggregation::per_last_read
                                       ? std::vector<ArticleId>{session.read_ids.back()}
                                       : session.read_ids;
  std::map<ArticleId, std::vector<std::pair<double, ArticleId>>> per_candidate;
  for (ArticleId anchor : anchors) {
    for (const auto& s : backend.score_all(anchor, corpus)) per_candidate[s.article_id].push_back({s.score, anchor});
  }
  std::vector<Recommendation> all;
  for (auto& [id, scores] : per_candidate) {
    if (session.has_read(id)) continue;
    // highest score, then smallest anchor id
    std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (scores.front().first > config.threshold) all.push_back({id, scores.front().first, backend.kind(), scores.front().second});
  }
  std::sort(all.begin(), all.end(), [](const Recommendation& a, const Recommendation& b) {
    return a.score != b.score ? a.score > b.score : a.article_id < b.article_id;
  });
  if (all.size() > config.top_k) all.resize(config.top_k);
  return all;
}

// Returns a description of the first contract violation, if any.
inline std::optional<std::string> check(const Session& session, const RecommenderConfig& config,
                                        const SimilarityBackend& backend, const Corpus& corpus) {
  auto recs = recommend(session, config, backend, corpus);
  if (recs.size() > config.top_k) return "list longer than k";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (session.has_read(r.article_id)) return "read article " + std::to_string(r.article_id) + " recommended";
    if (!(r.score > config.threshold)) return "score not above threshold";
    if (r.score > 1.0 + 1e-9) return "score above one";
    if (r.backend != config.backend) return "wrong backend tag";
    if (!session.has_read(r.against_read_id)) return "against_read_id is not a read article";
    if (i > 0) {
      const auto& p = recs[i - 1];
      if (p.score < r.score || (p.score == r.score && p.article_id >= r.article_id)) return "ordering violated";
    }
  }
  if (recommend(session, config, backend, corpus) != recs) return "non-deterministic output";
  if (oracle(session, config, backend, corpus) != recs) return "differs from brute-force selection";
  for (double delta : {0.05, 0.2}) {
    RecommenderConfig higher = config;
    higher.threshold = std::min(1.0, config.threshold + delta);
    std::set<ArticleId> before;
    for (const auto& r : recs) before.insert(r.article_id);
    for (const auto& r : recommend(session, higher, backend, corpus)) {
      if (!before.count(r.article_id)) return "raising the threshold added article " + std::to_string(r.article_id);
    }
  }
  return std::nullopt;
}

struct TrialSummary {
  int trials = 0;
  int violations = 0;
  std::string first_violation;
};

inline TrialSummary run_trials(unsigned seed, int trials) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> reads(1, 3);
  std::uniform_int_distribution<std::size_t> k(1, 12);
  std::uniform_real_distribution<double> any_threshold(0.0, 1.0);
  std::uniform_int_distribution<int> threshold_kind(0, 4);
  std::bernoulli_distribution coin(0.5);
  TrialSummary summary;
  for (int t = 0; t < trials; ++t) {
    auto c = synthetic_case(rng);
    Session s = new_session("trial", 1);
    std::uniform_int_distribution<std::size_t> pick(0, c.corpus.size() - 1);
    int n = reads(rng);
    for (int i = 0; i < n; ++i) s = mark_read(s, c.corpus.articles()[pick(rng)].id, c.corpus, 2);
    RecommenderConfig cfg;
    const double fixed[] = {0.0, 0.3, 0.6, 0.9};
    int kind = threshold_kind(rng);
    cfg.threshold = kind < 4 ? fixed[kind] : any_threshold(rng);
    cfg.top_k = k(rng);
    cfg.aggregation = coin(rng) ? Aggregation::per_last_read : Aggregation::max_over_reads;
    ++summary.trials;
    TfIdfBackend tfidf(&c.index);
    EmbeddingBackend embedding(&c.embeddings);
    for (const SimilarityBackend* backend : {static_cast<const SimilarityBackend*>(&tfidf),
                                             static_cast<const SimilarityBackend*>(&embedding)}) {
      cfg.backend = backend->kind();
      if (auto v = check(s, cfg, *backend, c.corpus)) {
        if (summary.violations++ == 0) summary.first_violation = *v;
      }
    }
  }
  return summary;
}

}  // namespace contract
