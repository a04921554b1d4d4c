#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "urdu_news/corpus.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/tokenize.hpp"

namespace urdu_news {

using TermId = std::uint32_t;

struct SparseEntry {
  TermId term = 0;
  double weight = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Sorted by term id, no duplicates, no zero weights.
class SparseVector {
 public:
  SparseVector() = default;

  // Builds from arbitrary (term, weight) pairs: sums duplicates, drops zeros.
  static SparseVector from_pairs(std::vector<SparseEntry> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
    SparseVector v;
    for (const auto& p : pairs) {
      if (!v.entries_.empty() && v.entries_.back().term == p.term) {
        v.entries_.back().weight += p.weight;
      } else {
        v.entries_.push_back(p);
      }
    }
    std::erase_if(v.entries_, [](const SparseEntry& e) { return e.weight == 0.0; });
    return v;
  }

  const std::vector<SparseEntry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double weight(TermId term) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                               [](const SparseEntry& e, TermId t) { return e.term < t; });
    return (it != entries_.end() && it->term == term) ? it->weight : 0.0;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.weight * e.weight;
    return s;
  }

  double dot(const SparseVector& other) const {
    double s = 0.0;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() && b != other.entries_.end()) {
      if (a->term < b->term) {
        ++a;
      } else if (b->term < a->term) {
        ++b;
      } else {
        s += a->weight * b->weight;
        ++a;
        ++b;
      }
    }
    return s;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<SparseEntry> entries_;
};

// Lexicographically ordered term ids, contiguous from 0.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Terms are sorted and de-duplicated.
  explicit Vocabulary(std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    id_to_term_ = std::move(terms);
    for (std::size_t i = 0; i < id_to_term_.size(); ++i) {
      term_to_id_.emplace(id_to_term_[i], static_cast<TermId>(i));
    }
  }

  std::optional<TermId> id_of(std::string_view term) const {
    auto it = term_to_id_.find(term);
    if (it == term_to_id_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& term(TermId id) const { return id_to_term_.at(id); }
  const std::vector<std::string>& terms() const { return id_to_term_; }
  std::size_t size() const { return id_to_term_.size(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_term_ == b.id_to_term_;
  }

 private:
  std::map<std::string, TermId, std::less<>> term_to_id_;
  std::vector<std::string> id_to_term_;
};

// Raw count is the default. The other schemes rescale the count by the
// document's length or by its most frequent term.
enum class TfScheme { raw, log_scaled, length_normalized, max_normalized };

inline std::string_view tf_scheme_name(TfScheme s) {
  switch (s) {
    case TfScheme::raw: return "raw";
    case TfScheme::log_scaled: return "log_scaled";
    case TfScheme::length_normalized: return "length_normalized";
    case TfScheme::max_normalized: return "max_normalized";
  }
  return "";
}

inline std::optional<TfScheme> parse_tf_scheme(std::string_view name) {
  for (TfScheme s : {TfScheme::raw, TfScheme::log_scaled, TfScheme::length_normalized,
                     TfScheme::max_normalized}) {
    if (tf_scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

inline std::map<std::string, std::size_t> term_frequency(const TokenList& doc) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : doc.tokens) ++counts[t];
  return counts;
}

namespace detail {

inline double tf_weight(std::size_t count, std::size_t doc_length, std::size_t max_count, TfScheme scheme) {
  switch (scheme) {
    case TfScheme::raw: return static_cast<double>(count);
    case TfScheme::log_scaled: return count ? 1.0 + std::log(static_cast<double>(count)) : 0.0;
    case TfScheme::length_normalized:
      return doc_length ? static_cast<double>(count) / static_cast<double>(doc_length) : 0.0;
    case TfScheme::max_normalized:
      return max_count ? static_cast<double>(count) / static_cast<double>(max_count) : 0.0;
  }
  return 0.0;
}

}  // namespace detail

struct IdfTable {
  Vocabulary vocabulary;
  std::size_t doc_count = 0;
  std::vector<std::size_t> df;  // indexed by TermId
  std::vector<double> idf;      // ln(doc_count / df)
};

inline IdfTable inverse_document_frequency(std::span<const TokenList> docs) {
  if (docs.empty()) throw ConfigError("inverse document frequency needs at least one document");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    for (const auto& [term, count] : term_frequency(doc)) ++df[term];
  }
  IdfTable table;
  table.doc_count = docs.size();
  std::vector<std::string> terms;
  terms.reserve(df.size());
  for (const auto& [term, n] : df) terms.push_back(term);
  table.vocabulary = Vocabulary(std::move(terms));
  table.df.reserve(df.size());
  table.idf.reserve(df.size());
  const auto n_docs = static_cast<double>(docs.size());
  for (const auto& [term, n] : df) {
    table.df.push_back(n);
    table.idf.push_back(std::log(n_docs / static_cast<double>(n)));
  }
  return table;
}

struct TfIdfIndex {
  Vocabulary vocabulary;
  std::size_t doc_count = 0;
  std::vector<std::size_t> df;
  std::vector<double> idf;
  std::map<ArticleId, SparseVector> doc_vectors;
  TfScheme tf_scheme = TfScheme::raw;

  const SparseVector* find(ArticleId id) const {
    auto it = doc_vectors.find(id);
    return it == doc_vectors.end() ? nullptr : &it->second;
  }

  friend bool operator==(const TfIdfIndex&, const TfIdfIndex&) = default;
};

inline SparseVector vectorize_query(const TokenList& doc, const TfIdfIndex& index) {
  auto counts = term_frequency(doc);
  std::size_t max_count = 0;
  for (const auto& [term, n] : counts) max_count = std::max(max_count, n);
  std::vector<SparseEntry> pairs;
  pairs.reserve(counts.size());
  for (const auto& [term, n] : counts) {
    auto id = index.vocabulary.id_of(term);
    if (!id) continue;
    double w = detail::tf_weight(n, doc.size(), max_count, index.tf_scheme) * index.idf[*id];
    if (w != 0.0) pairs.push_back({*id, w});
  }
  return SparseVector::from_pairs(std::move(pairs));
}

inline TfIdfIndex build_index(const std::map<ArticleId, TokenList>& docs, TfScheme scheme = TfScheme::raw) {
  if (docs.empty()) throw ConfigError("cannot build a TF-IDF index over an empty corpus");
  std::vector<TokenList> ordered;
  ordered.reserve(docs.size());
  for (const auto& [id, tokens] : docs) ordered.push_back(tokens);
  IdfTable table = inverse_document_frequency(ordered);

  TfIdfIndex index;
  index.vocabulary = std::move(table.vocabulary);
  index.doc_count = table.doc_count;
  index.df = std::move(table.df);
  index.idf = std::move(table.idf);
  index.tf_scheme = scheme;
  for (const auto& [id, tokens] : docs) index.doc_vectors.emplace(id, vectorize_query(tokens, index));
  return index;
}

// ---------------------------------------------------------------------------
// Cosine similarity. Zero when either vector has zero norm.

inline double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / std::sqrt(na * nb), -1.0, 1.0);
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Persistence: versioned line-oriented text, doubles in shortest round-trip form.
//
//   urdu-news-tfidf 1
//   tf_scheme <name>
//   docs <N>
//   terms <V>
//   <df> <idf> <term>            (V lines, in term-id order)
//   vectors <count>
//   <article_id> <nnz> <term_id>:<weight> ...

inline constexpr std::string_view kIndexMagic = "urdu-news-tfidf";
inline constexpr int kIndexVersion = 1;

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("index: invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace detail

inline void save_index(const TfIdfIndex& index, std::ostream& out) {
  out << kIndexMagic << ' ' << kIndexVersion << '\n';
  out << "tf_scheme " << tf_scheme_name(index.tf_scheme) << '\n';
  out << "docs " << index.doc_count << '\n';
  out << "terms " << index.vocabulary.size() << '\n';
  for (std::size_t t = 0; t < index.vocabulary.size(); ++t) {
    out << index.df[t] << ' ' << detail::format_double(index.idf[t]) << ' '
        << index.vocabulary.term(static_cast<TermId>(t)) << '\n';
  }
  out << "vectors " << index.doc_vectors.size() << '\n';
  for (const auto& [id, vec] : index.doc_vectors) {
    out << id << ' ' << vec.nnz();
    for (const auto& e : vec.entries()) out << ' ' << e.term << ':' << detail::format_double(e.weight);
    out << '\n';
  }
}

inline TfIdfIndex load_index(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string_view what) {
    if (!std::getline(in, line)) throw DataError("index: unexpected end of file reading " + std::string(what));
    return std::string_view(line);
  };
  auto expect_keyword = [&](std::string_view keyword) {
    auto l = next_line(keyword);
    if (l.substr(0, keyword.size() + 1) != std::string(keyword) + ' ') {
      throw DataError("index: expected '" + std::string(keyword) + "' line");
    }
    return std::string(l.substr(keyword.size() + 1));
  };

  auto version = expect_keyword(kIndexMagic);
  if (detail::parse_number<int>(version, "version") != kIndexVersion) {
    throw DataError("index: unsupported format version " + version);
  }
  TfIdfIndex index;
  auto scheme = parse_tf_scheme(expect_keyword("tf_scheme"));
  if (!scheme) throw DataError("index: unknown tf scheme");
  index.tf_scheme = *scheme;
  index.doc_count = detail::parse_number<std::size_t>(expect_keyword("docs"), "doc count");
  auto n_terms = detail::parse_number<std::size_t>(expect_keyword("terms"), "term count");

  std::vector<std::string> terms;
  terms.reserve(n_terms);
  for (std::size_t t = 0; t < n_terms; ++t) {
    auto l = next_line("term");
    auto s1 = l.find(' ');
    auto s2 = s1 == std::string_view::npos ? s1 : l.find(' ', s1 + 1);
    if (s2 == std::string_view::npos || s2 + 1 >= l.size()) throw DataError("index: malformed term line");
    index.df.push_back(detail::parse_number<std::size_t>(l.substr(0, s1), "df"));
    index.idf.push_back(detail::parse_number<double>(l.substr(s1 + 1, s2 - s1 - 1), "idf"));
    terms.emplace_back(l.substr(s2 + 1));
  }
  if (!std::is_sorted(terms.begin(), terms.end()) ||
      std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
    throw DataError("index: terms are not in strictly increasing order");
  }
  index.vocabulary = Vocabulary(std::move(terms));

  auto n_vectors = detail::parse_number<std::size_t>(expect_keyword("vectors"), "vector count");
  for (std::size_t v = 0; v < n_vectors; ++v) {
    std::istringstream row(std::string(next_line("vector")));
    std::string id_text;
    std::string nnz_text;
    row >> id_text >> nnz_text;
    auto id = detail::parse_number<ArticleId>(id_text, "article id");
    auto nnz = detail::parse_number<std::size_t>(nnz_text, "nnz");
    std::vector<SparseEntry> entries;
    std::string cell;
    while (row >> cell) {
      auto colon = cell.find(':');
      if (colon == std::string::npos) throw DataError("index: malformed vector entry '" + cell + "'");
      auto term = detail::parse_number<TermId>(std::string_view(cell).substr(0, colon), "term id");
      if (term >= index.vocabulary.size()) throw DataError("index: term id out of range");
      entries.push_back({term, detail::parse_number<double>(std::string_view(cell).substr(colon + 1), "weight")});
    }
    if (entries.size() != nnz) throw DataError("index: entry count mismatch for article " + id_text);
    if (!index.doc_vectors.emplace(id, SparseVector::from_pairs(std::move(entries))).second) {
      throw DataError("index: duplicate article id " + id_text);
    }
  }
  return index;
}

}  // namespace urdu_news
