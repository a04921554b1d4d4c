#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "urdu_news/corpus.hpp"
#include "urdu_news/textnorm.hpp"
#include "urdu_news/utf8.hpp"

namespace urdu_news {

struct TokenList {
  std::vector<std::string> tokens;
  std::optional<ArticleId> source_article_id;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  friend bool operator==(const TokenList&, const TokenList&) = default;
};

// Maximal non-whitespace runs, in order.
inline TokenList tokenize(std::string_view text, std::optional<ArticleId> source = std::nullopt) {
  TokenList out;
  out.source_article_id = source;
  auto cps = utf8::decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && textnorm::is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !textnorm::is_space(cps[j])) ++j;
    if (j > i) out.tokens.push_back(utf8::encode(std::u32string_view(cps).substr(i, j - i)));
    i = j;
  }
  return out;
}

class StopwordSet {
 public:
  StopwordSet() = default;

  // Entries are trimmed; blank entries are skipped.
  explicit StopwordSet(const std::vector<std::string>& words) {
    for (const auto& w : words) insert(w);
  }

  void insert(std::string_view word) {
    auto trimmed = textnorm::normalize_whitespace(word);
    if (!trimmed.empty()) words_.insert(std::move(trimmed));
  }

  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

  friend bool operator==(const StopwordSet&, const StopwordSet&) = default;

 private:
  std::set<std::string, std::less<>> words_;
};

// One word per line; blank lines and lines starting with '#' are ignored.
inline StopwordSet parse_stopwords(std::string_view text) {
  if (auto bad = utf8::find_invalid(text)) {
    throw DataError("stopwords: invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  StopwordSet set;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = textnorm::normalize_whitespace(text.substr(pos, nl - pos));
    if (!line.empty() && line.front() != '#') set.insert(line);
    pos = nl + 1;
  }
  return set;
}

inline StopwordSet load_stopwords(const std::string& path) {
  return parse_stopwords(utf8::read_file(path));
}

// Order-preserving exact-match filter.
inline TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords) {
  TokenList out;
  out.source_article_id = tokens.source_article_id;
  out.tokens.reserve(tokens.tokens.size());
  std::copy_if(tokens.tokens.begin(), tokens.tokens.end(), std::back_inserter(out.tokens),
               [&](const std::string& t) { return !stopwords.contains(t); });
  return out;
}

}  // namespace urdu_news
