#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "urdu_news/csv.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/utf8.hpp"

namespace urdu_news {

using ArticleId = std::uint64_t;

enum class Category { BusinessEconomics, ScienceTechnology, Entertainment, Sports };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::BusinessEconomics, Category::ScienceTechnology, Category::Entertainment,
    Category::Sports};

// Human-readable label as printed in dataset tables.
inline std::string_view display_name(Category c) {
  switch (c) {
    case Category::BusinessEconomics: return "Business & Economics";
    case Category::ScienceTechnology: return "Science & Technology";
    case Category::Entertainment: return "Entertainment";
    case Category::Sports: return "Sports";
  }
  return "";
}

// Stable machine identifier used in JSON and query strings.
inline std::string_view slug(Category c) {
  switch (c) {
    case Category::BusinessEconomics: return "business_economics";
    case Category::ScienceTechnology: return "science_technology";
    case Category::Entertainment: return "entertainment";
    case Category::Sports: return "sports";
  }
  return "";
}

// Accepts display names, slugs and enum spellings, ignoring case and
// non-alphanumeric characters ("Business & Economics" == "business_economics").
inline std::optional<Category> parse_category(std::string_view label) {
  std::string key;
  for (char c : label) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) key.push_back(static_cast<char>(std::tolower(uc)));
  }
  static const std::unordered_map<std::string, Category> table = {
      {"businesseconomics", Category::BusinessEconomics},
      {"businessandeconomics", Category::BusinessEconomics},
      {"business", Category::BusinessEconomics},
      {"sciencetechnology", Category::ScienceTechnology},
      {"scienceandtechnology", Category::ScienceTechnology},
      {"science", Category::ScienceTechnology},
      {"entertainment", Category::Entertainment},
      {"sports", Category::Sports},
      {"sport", Category::Sports},
  };
  auto it = table.find(key);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct Article {
  ArticleId id = 0;
  std::string headline;
  std::string body;
  Category category = Category::BusinessEconomics;
  std::uint64_t news_length = 0;

  friend bool operator==(const Article&, const Article&) = default;
};

struct DroppedRow {
  std::size_t line = 0;
  std::string reason;

  friend bool operator==(const DroppedRow&, const DroppedRow&) = default;
};

// Immutable once loaded. Articles keep source order.
class Corpus {
 public:
  Corpus() = default;

  Corpus(std::vector<Article> articles, std::string source_path = {},
         std::vector<DroppedRow> dropped = {})
      : articles_(std::move(articles)),
        source_path_(std::move(source_path)),
        dropped_(std::move(dropped)) {
    for (std::size_t i = 0; i < articles_.size(); ++i) {
      if (!by_id_.emplace(articles_[i].id, i).second) {
        throw DataError("duplicate article id " + std::to_string(articles_[i].id));
      }
    }
  }

  const std::vector<Article>& articles() const { return articles_; }
  const std::string& source_path() const { return source_path_; }
  // Rows rejected for missing values; reported, never loaded.
  const std::vector<DroppedRow>& dropped_rows() const { return dropped_; }

  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }
  bool contains(ArticleId id) const { return by_id_.count(id) != 0; }

  const Article* find(ArticleId id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &articles_[it->second];
  }

  auto begin() const { return articles_.begin(); }
  auto end() const { return articles_.end(); }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.articles_ == b.articles_ && a.source_path_ == b.source_path_ &&
           a.dropped_ == b.dropped_;
  }

 private:
  std::vector<Article> articles_;
  std::string source_path_;
  std::vector<DroppedRow> dropped_;
  std::unordered_map<ArticleId, std::size_t> by_id_;
};

inline const Article& get_article(const Corpus& corpus, ArticleId id) {
  if (const Article* a = corpus.find(id)) return *a;
  throw NotFoundError("unknown article id " + std::to_string(id));
}

inline std::map<Category, std::size_t> category_counts(const Corpus& corpus) {
  std::map<Category, std::size_t> counts;
  for (Category c : kAllCategories) counts[c] = 0;
  for (const Article& a : corpus) ++counts[a.category];
  return counts;
}

namespace detail {

inline std::string normalize_header(std::string_view name) {
  std::size_t b = 0;
  std::size_t e = name.size();
  while (b < e && std::isspace(static_cast<unsigned char>(name[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(name[e - 1]))) --e;
  std::string out;
  for (char c : name.substr(b, e - b)) {
    if (c == '_' || c == '-') c = ' ';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

inline std::string trim_ascii(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::uint64_t parse_uint(std::string_view raw, std::string_view what, std::size_t line) {
  std::string s = trim_ascii(raw);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    // Spreadsheet exports sometimes write integers as "12.0".
    double d = 0;
    auto [p2, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec2 == std::errc{} && p2 == s.data() + s.size() && d >= 0 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
      return static_cast<std::uint64_t>(d);
    }
    throw DataError("line " + std::to_string(line) + ": invalid " + std::string(what) + " '" + s + "'");
  }
  return value;
}

}  // namespace detail

// Parses delimited text with a header row. Required columns: headline,
// news text, category. Optional: id, news length. Rows with an empty
// required cell are dropped and recorded in Corpus::dropped_rows().
// Without an id column, ids are the 0-based data row positions.
inline Corpus parse_corpus(std::string_view text, char delimiter = ',', std::string source_path = {}) {
  if (auto bad = utf8::find_invalid(text)) {
    throw DataError("invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.remove_prefix(3);
  auto records = csv::parse(text, delimiter);
  if (records.empty()) throw DataError("missing header row");

  static const std::map<std::string, std::string> aliases = {
      {"id", "id"},           {"article id", "id"},     {"headline", "headline"},
      {"title", "headline"},  {"news text", "body"},    {"news", "body"},
      {"text", "body"},       {"body", "body"},         {"category", "category"},
      {"news length", "length"}, {"length", "length"},
  };
  std::map<std::string, std::size_t> column;
  const auto& header = records.front().fields;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto it = aliases.find(detail::normalize_header(header[i]));
    if (it != aliases.end() && !column.count(it->second)) column[it->second] = i;
  }
  for (const char* required : {"headline", "body", "category"}) {
    if (!column.count(required)) {
      throw DataError(std::string("missing required column: ") +
                      (std::string_view(required) == "body" ? "news text" : required));
    }
  }
  const bool has_id = column.count("id") != 0;
  const bool has_length = column.count("length") != 0;

  std::vector<Article> articles;
  std::vector<DroppedRow> dropped;
  std::unordered_map<ArticleId, std::size_t> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto cell = [&](const char* name) -> std::optional<std::string_view> {
      std::size_t idx = column.at(name);
      if (idx >= rec.fields.size() || detail::is_blank(rec.fields[idx])) return std::nullopt;
      return std::string_view(rec.fields[idx]);
    };
    std::vector<std::string> missing;
    for (const char* name : {"id", "headline", "body", "category", "length"}) {
      if (!column.count(name)) continue;
      if (!cell(name)) missing.emplace_back(name);
    }
    if (!missing.empty()) {
      std::string reason = "missing";
      for (const auto& m : missing) reason += " " + m;
      dropped.push_back({rec.line, reason});
      continue;
    }
    Article a;
    a.id = has_id ? detail::parse_uint(*cell("id"), "id", rec.line) : static_cast<ArticleId>(r - 1);
    a.headline = detail::trim_ascii(*cell("headline"));
    a.body = detail::trim_ascii(*cell("body"));
    auto cat = parse_category(*cell("category"));
    if (!cat) {
      throw DataError("line " + std::to_string(rec.line) + ": unknown category '" +
                      std::string(*cell("category")) + "'");
    }
    a.category = *cat;
    a.news_length = has_length ? detail::parse_uint(*cell("length"), "news length", rec.line)
                               : utf8::length(a.body);
    if (auto [it, fresh] = seen.emplace(a.id, rec.line); !fresh) {
      throw DataError("line " + std::to_string(rec.line) + ": duplicate id " + std::to_string(a.id) +
                      " (first seen on line " + std::to_string(it->second) + ")");
    }
    articles.push_back(std::move(a));
  }
  return Corpus(std::move(articles), std::move(source_path), std::move(dropped));
}

inline Corpus load_corpus(const std::string& path, char delimiter = ',') {
  return parse_corpus(utf8::read_file(path), delimiter, path);
}

}  // namespace urdu_news
