#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "contract.hpp"
#include "test_support.hpp"
#include "urdu_news/engine.hpp"

using namespace urdu_news;

namespace {

Engine fixture_engine() {
  return Engine(parse_corpus(test_support::fixture_csv()), load_stopwords(test_support::bundled_stopwords()),
                textnorm::NormalizerConfig{});
}

Session reading(const Corpus& corpus, std::initializer_list<ArticleId> ids) {
  Session s = new_session("t", 100);
  for (ArticleId id : ids) s = mark_read(s, id, corpus, 200);
  return s;
}

}  // namespace

TEST(ScoreAgainstCorpus, DuplicateAndDisjoint) {
  auto engine = fixture_engine();
  const auto& backend = engine.backend(BackendKind::tfidf);
  auto scores = score_against_corpus(0, backend, engine.corpus());
  ASSERT_EQ(scores.size(), engine.corpus().size() - 1);
  std::map<ArticleId, double> by_id;
  for (const auto& s : scores) by_id[s.article_id] = s.score;
  EXPECT_FALSE(by_id.count(0));
  EXPECT_EQ(by_id.at(3), 1.0);
  EXPECT_EQ(by_id.at(4), 0.0);
  for (const auto& s : score_against_corpus(4, backend, engine.corpus())) EXPECT_EQ(s.score, 0.0);
  EXPECT_THROW(score_against_corpus(99, backend, engine.corpus()), NotFoundError);
}

TEST(Recommend, AllBelowThresholdIsEmpty) {
  auto engine = fixture_engine();
  EXPECT_TRUE(engine.recommend(reading(engine.corpus(), {4}), RecommenderConfig{}).empty());
}

TEST(Recommend, DuplicateIsTheOnlyRecommendation) {
  auto engine = fixture_engine();
  auto recs = engine.recommend(reading(engine.corpus(), {0}), RecommenderConfig{});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0], (Recommendation{3, 1.0, BackendKind::tfidf, 0}));
}

TEST(Recommend, ThresholdIsStrict) {
  auto engine = fixture_engine();
  RecommenderConfig cfg;
  cfg.threshold = 1.0;
  EXPECT_TRUE(engine.recommend(reading(engine.corpus(), {0}), cfg).empty());
  cfg.threshold = 0.0;
  for (const auto& r : engine.recommend(reading(engine.corpus(), {0}), cfg)) EXPECT_GT(r.score, 0.0);
}

TEST(Recommend, TopTenOfFifteen) {
  // Candidate i is the read doc plus i copies of a term common to almost
  // every document, so scores fall with i but all stay high.
  std::vector<std::string> core;
  for (int t = 0; t < 40; ++t) core.push_back("c" + std::to_string(t));
  std::vector<std::vector<std::string>> raw = {core};
  for (int i = 1; i <= 15; ++i) {
    raw.push_back(core);
    raw.back().insert(raw.back().end(), static_cast<std::size_t>(i), "common");
  }
  for (int f = 0; f < 10; ++f) raw.push_back({"f" + std::to_string(f), "common"});

  std::vector<ArticleId> ids(raw.size());
  std::iota(ids.begin(), ids.end(), 100);
  std::mt19937 rng(4);
  std::shuffle(ids.begin() + 1, ids.end(), rng);
  std::vector<Article> articles;
  std::map<ArticleId, TokenList> docs;
  for (std::size_t d = 0; d < raw.size(); ++d) {
    articles.push_back({ids[d], "h", "b", Category::Sports, 1});
    docs.emplace(ids[d], test_support::token_list(raw[d]));
  }
  Corpus corpus(articles);
  auto index = build_index(docs);
  TfIdfBackend backend(&index);

  // Brute-force oracle over the dense tf x idf matrix.
  auto dense = test_support::dense_tfidf_oracle(raw);
  std::vector<std::pair<double, ArticleId>> expected;
  for (std::size_t d = 1; d < raw.size(); ++d) {
    double s = test_support::dense_cosine_oracle(dense.weights[0], dense.weights[d]);
    if (s > 0.6) expected.push_back({s, ids[d]});
  }
  ASSERT_EQ(expected.size(), 15u);
  std::sort(expected.begin(), expected.end(), [](auto& a, auto& b) { return a.first > b.first; });

  auto recs = recommend(reading(corpus, {ids[0]}), RecommenderConfig{}, backend, corpus);
  ASSERT_EQ(recs.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(recs[i].article_id, expected[i].second);
    EXPECT_NEAR(recs[i].score, expected[i].first, 1e-9);
  }
}

TEST(Recommend, Errors) {
  auto engine = fixture_engine();
  EXPECT_THROW(engine.recommend(new_session("empty", 1), RecommenderConfig{}), ConfigError);
  RecommenderConfig bad;
  bad.threshold = 1.5;
  EXPECT_THROW(engine.recommend(reading(engine.corpus(), {0}), bad), ConfigError);
  bad = RecommenderConfig{};
  bad.top_k = 0;
  EXPECT_THROW(engine.recommend(reading(engine.corpus(), {0}), bad), ConfigError);
  RecommenderConfig emb;
  emb.backend = BackendKind::embedding;
  EXPECT_THROW(engine.recommend(reading(engine.corpus(), {0}), emb), BackendUnavailableError);
  EXPECT_THROW(recommend(reading(engine.corpus(), {0}), emb, engine.backend(BackendKind::tfidf), engine.corpus()),
               ConfigError);
}

TEST(Recommend, BackendUnavailable) {
  auto engine = fixture_engine();
  TfIdfIndex empty;
  TfIdfBackend unbuilt(&empty);
  EXPECT_THROW(score_against_corpus(0, unbuilt, engine.corpus()), BackendUnavailableError);
  EmbeddingStore partial(2);
  partial.insert(0, DenseVector({1, 0}));
  EmbeddingBackend missing(&partial);
  EXPECT_THROW(score_against_corpus(0, missing, engine.corpus()), BackendUnavailableError);
}

TEST(Recommend, MaxOverReadsTracksArgmax) {
  Corpus corpus({{1, "h", "b", Category::Sports, 1},
                 {2, "h", "b", Category::Sports, 1},
                 {3, "h", "b", Category::Sports, 1},
                 {4, "h", "b", Category::Sports, 1}});
  EmbeddingStore store(2);
  store.insert(1, DenseVector({1, 0}));
  store.insert(2, DenseVector({0, 1}));
  store.insert(3, DenseVector({1, 0.1}));
  store.insert(4, DenseVector({1, 1}));
  EmbeddingBackend backend(&store);
  RecommenderConfig cfg;
  cfg.backend = BackendKind::embedding;
  cfg.aggregation = Aggregation::max_over_reads;
  cfg.threshold = 0.5;
  auto recs = recommend(reading(corpus, {2, 1}), cfg, backend, corpus);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].article_id, 3u);
  EXPECT_EQ(recs[0].against_read_id, 1u);
  EXPECT_EQ(recs[1].article_id, 4u);
  EXPECT_EQ(recs[1].against_read_id, 1u);  // equal score against 1 and 2: smaller id wins
  cfg.aggregation = Aggregation::per_last_read;
  auto last = recommend(reading(corpus, {1, 2}), cfg, backend, corpus);
  ASSERT_EQ(last.size(), 1u);
  EXPECT_EQ(last[0].article_id, 4u);
  EXPECT_EQ(last[0].against_read_id, 2u);
}

TEST(MarkRead, OrderAndIdempotence) {
  auto engine = fixture_engine();
  const auto& corpus = engine.corpus();
  Session s = new_session("s", 1000);
  s = mark_read(s, 3, corpus, 2000);
  EXPECT_EQ(s.read_ids, (std::vector<ArticleId>{3}));
  s = mark_read(s, 3, corpus, 3000);
  EXPECT_EQ(s.read_ids, (std::vector<ArticleId>{3}));
  s = mark_read(s, 1, corpus, 4000);
  EXPECT_EQ(s.read_ids, (std::vector<ArticleId>{3, 1}));
  EXPECT_EQ(s.updated_at, 4000);
  EXPECT_EQ(mark_read(s, 0, corpus, 10).updated_at, 1000);  // clock skew never predates creation
  EXPECT_THROW(mark_read(s, 42, corpus), NotFoundError);
}

TEST(RecommendProperties, ContractHoldsOnRandomSessions) {
  auto summary = contract::run_trials(1234, 300);
  EXPECT_EQ(summary.trials, 300);
  EXPECT_EQ(summary.violations, 0) << summary.first_violation;
}
