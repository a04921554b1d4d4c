#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "golden.hpp"
#include "test_support.hpp"
#include "urdu_news/textnorm.hpp"
#include "urdu_news/tokenize.hpp"

using namespace urdu_news;
using test_support::TempDir;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i) {
    if (seq[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

}  // namespace

TEST(Tokenize, SentenceHasFourteenTokens) {
  auto t = tokenize(golden::kTokenSentence);
  EXPECT_EQ(t.size(), 14u);
  EXPECT_EQ(t.tokens, golden::kTokenSentenceTokens);
  EXPECT_FALSE(t.source_article_id.has_value());
}

TEST(Tokenize, TrivialCases) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize(textnorm::normalize_whitespace("a b  c")).tokens, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(tokenize(" a\tb​c ").tokens, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(tokenize("x", 42).source_article_id, std::optional<ArticleId>(42));
}

TEST(Tokenize, JoinReproducesNormalizedInput) {
  for (const auto& text : {golden::kTokenSentence, golden::kWhitespace.input, golden::kCurrency.input}) {
    auto normalized = textnorm::normalize_whitespace(text);
    auto t = tokenize(normalized);
    EXPECT_EQ(join(t.tokens), normalized);
    for (const auto& tok : t.tokens) {
      EXPECT_FALSE(tok.empty());
      EXPECT_EQ(tok.find(' '), std::string::npos);
    }
  }
}

TEST(Stopwords, SentenceFiltersToEleven) {
  auto stop = load_stopwords(test_support::bundled_stopwords());
  auto filtered = remove_stopwords(tokenize(golden::kTokenSentence), stop);
  EXPECT_EQ(filtered.size(), 11u);
  std::vector<std::string> removed;
  for (const auto& t : golden::kTokenSentenceTokens) {
    if (stop.contains(t)) removed.push_back(t);
  }
  EXPECT_EQ(removed, (std::vector<std::string>{"ہیں", "تک", "ہے"}));
}

TEST(Stopwords, BundledListSizeMatchesDistinctLines) {
  // Oracle: read the shipped file directly.
  std::ifstream in(test_support::bundled_stopwords());
  ASSERT_TRUE(in.good());
  std::set<std::string> distinct;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    distinct.insert(line);
  }
  auto stop = load_stopwords(test_support::bundled_stopwords());
  EXPECT_EQ(stop.size(), distinct.size());
  EXPECT_EQ(stop.size(), 86u);
  for (const auto& w : {"ہے", "ہیں", "کی", "کے", "اور", "تک", "سے", "میں"}) EXPECT_TRUE(stop.contains(w)) << w;
}

TEST(Stopwords, FileParsing) {
  TempDir dir;
  EXPECT_EQ(load_stopwords(dir.write("dup.txt", "ہے\nتک\nہے\n")).size(), 2u);
  EXPECT_TRUE(load_stopwords(dir.write("empty.txt", "")).empty());
  auto s = load_stopwords(dir.write("mixed.txt", "# comment\n\n  ہے  \r\n\t\nکی"));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains("ہے"));
  EXPECT_TRUE(s.contains("کی"));
  EXPECT_FALSE(s.contains("# comment"));
}

TEST(Stopwords, Errors) {
  TempDir dir;
  EXPECT_THROW(load_stopwords(dir.file("missing.txt")), IoError);
  EXPECT_THROW(load_stopwords(dir.write("bad.txt", "ہے\n\xC3\x28\n")), DataError);
}

TEST(Stopwords, TrivialRemovals) {
  auto tokens = tokenize(golden::kTokenSentence);
  EXPECT_EQ(remove_stopwords(tokens, StopwordSet{}).tokens, tokens.tokens);
  StopwordSet all(tokens.tokens);
  EXPECT_TRUE(remove_stopwords(tokens, all).empty());
  auto keep_source = remove_stopwords(tokenize("a b", 7), StopwordSet{});
  EXPECT_EQ(keep_source.source_article_id, std::optional<ArticleId>(7));
}

TEST(StopwordProperties, SubsequenceDisjointIdempotent) {
  std::mt19937 rng(3);
  const std::vector<std::string> vocab = {"ہے", "ہیں", "کا", "کی", "ملک", "خبر", "بینک", "تک", "اور", "میچ"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(0, 25);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> words;
    for (const auto& w : vocab) {
      if (coin(rng)) words.push_back(w);
    }
    StopwordSet stop(words);
    TokenList tokens;
    int n = len(rng);
    for (int i = 0; i < n; ++i) tokens.tokens.push_back(vocab[pick(rng)]);
    auto out = remove_stopwords(tokens, stop);
    ASSERT_LE(out.size(), tokens.size());
    ASSERT_TRUE(is_subsequence(out.tokens, tokens.tokens));
    for (const auto& t : out.tokens) ASSERT_FALSE(stop.contains(t));
    ASSERT_EQ(remove_stopwords(out, stop).tokens, out.tokens);
  }
}
