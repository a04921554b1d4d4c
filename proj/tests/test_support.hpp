#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "urdu_news/corpus.hpp"
#include "urdu_news/tokenize.hpp"

#ifndef URDU_NEWS_DATA_DIR
#define URDU_NEWS_DATA_DIR ""
#endif

namespace test_support {

inline std::string bundled_stopwords() { return std::string(URDU_NEWS_DATA_DIR) + "/stopwords_ur.txt"; }

// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("urdu_news_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    auto p = file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small Urdu corpus: articles 0 and 3 share their body text exactly; 1 and 2
// share a few terms with 0; 4 shares nothing with any other article.
inline std::string fixture_csv() {
  return "ID,Headline,News Text,Category,News Length\n"
         "0,عالمی بینک قرض,عالمی بینک پاکستان قرض منصوبہ ڈالر,Business & Economics,34\n"
         "1,کرکٹ میچ,پاکستان کرکٹ ٹیم میچ جیت گئی,Sports,28\n"
         "2,بینک شرح,بینک شرح سود معیشت ڈالر,Business & Economics,25\n"
         "3,عالمی بینک منصوبہ,عالمی بینک پاکستان قرض منصوبہ ڈالر,Business & Economics,34\n"
         "4,فلم ریلیز,نئی فلم سینما گھروں میں ریلیز,Entertainment,27\n";
}

// Dense brute-force TF-IDF: weight[d][t] = count(t, d) * ln(N / df(t)).
// Terms ordered lexicographically, documents in input order.
struct DenseTfIdf {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> weights;
};

inline DenseTfIdf dense_tfidf_oracle(const std::vector<std::vector<std::string>>& docs) {
  std::set<std::string> vocab;
  for (const auto& d : docs)
    for (const auto& t : d) vocab.insert(t);
  DenseTfIdf out;
  out.terms.assign(vocab.begin(), vocab.end());
  const double n = static_cast<double>(docs.size());
  for (const auto& d : docs) {
    std::vector<double> row;
    for (const auto& term : out.terms) {
      double count = 0;
      for (const auto& t : d) count += (t == term) ? 1 : 0;
      double df = 0;
      for (const auto& other : docs) {
        bool has = false;
        for (const auto& t : other) has = has || t == term;
        df += has ? 1 : 0;
      }
      row.push_back(count * std::log(n / df));
    }
    out.weights.push_back(row);
  }
  return out;
}

inline double dense_cosine_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(dot / std::sqrt(na * nb));
}

// Random corpus of documents over the terms "t0".."t<terms-1>".
inline std::vector<std::vector<std::string>> random_docs(std::mt19937& rng, int max_docs, int max_terms,
                                                         int max_len = 12) {
  std::uniform_int_distribution<int> n_docs(1, max_docs);
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::uniform_int_distribution<int> len(0, max_len);
  const int docs = n_docs(rng);
  const int terms = n_terms(rng);
  std::uniform_int_distribution<int> pick(0, terms - 1);
  std::vector<std::vector<std::string>> out(docs);
  for (auto& d : out) {
    int l = len(rng);
    for (int i = 0; i < l; ++i) d.push_back("t" + std::to_string(pick(rng)));
  }
  return out;
}

inline urdu_news::TokenList token_list(const std::vector<std::string>& tokens) {
  urdu_news::TokenList t;
  t.tokens = tokens;
  return t;
}

}  // namespace test_support
