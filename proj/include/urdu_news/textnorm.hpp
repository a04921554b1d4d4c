#pragma once

// Character-level cleaning of Urdu news text.
//
// Every step takes UTF-8 and returns UTF-8 with whitespace collapsed to single
// spaces and trimmed, so steps compose in any order and each one is
// idempotent. Pattern removals (URL, e-mail, phone) replace the matched span
// with a space; character-class removals (punctuation, diacritics, digits,
// Latin letters) delete the characters outright.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "urdu_news/error.hpp"
#include "urdu_news/utf8.hpp"

namespace urdu_news::textnorm {

// ---------------------------------------------------------------------------
// Character classes

inline bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200B) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

inline bool is_ascii_punct(char32_t c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

inline bool is_punct(char32_t c) {
  if (c < 0x80) return is_ascii_punct(c);
  switch (c) {
    // Latin-1: ¡ § « ¶ · » ¿
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    // Arabic script: per-mille signs, comma, date separator, semicolon,
    // end-of-text, triple dot, question mark, percent, decimal and thousands
    // separators, five-pointed star, full stop, ornate parentheses.
    case 0x0609: case 0x060A: case 0x060C: case 0x060D: case 0x061B: case 0x061D:
    case 0x061E: case 0x061F: case 0x066A: case 0x066B: case 0x066C: case 0x066D:
    case 0x06D4: case 0xFD3E: case 0xFD3F:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x2043) ||
         (c >= 0x2045 && c <= 0x2051) || (c >= 0x2053 && c <= 0x205E) ||
         (c >= 0x2E00 && c <= 0x2E4F) || (c >= 0x3001 && c <= 0x3003);
}

// Harakat: fathatan .. sukun. U+0670 (superscript alef) is opt-in.
inline bool is_diacritic(char32_t c, bool include_superscript_alef) {
  return (c >= 0x064B && c <= 0x0652) || (include_superscript_alef && c == 0x0670);
}

inline bool is_digit(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= 0x0660 && c <= 0x0669) || (c >= 0x06F0 && c <= 0x06F9);
}

inline bool is_latin_letter(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
}

inline bool is_ascii_alnum(char32_t c) {
  return is_latin_letter(c) || (c >= U'0' && c <= U'9');
}

// ---------------------------------------------------------------------------
// Code-point level primitives

namespace detail {

inline std::u32string collapse(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  bool gap = false;
  for (char32_t c : s) {
    if (is_space(c)) {
      gap = !out.empty();
      continue;
    }
    if (gap) out.push_back(U' ');
    gap = false;
    out.push_back(c);
  }
  return out;
}

template <class Pred>
std::u32string erase_if(std::u32string_view s, Pred pred) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (!pred(c)) out.push_back(c);
  }
  return out;
}

inline char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

inline bool starts_with_icase(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (ascii_lower(s[pos + k]) != prefix[k]) return false;
  }
  return true;
}

// Length of a URL starting at pos, 0 when none starts there.
inline std::size_t match_url(std::u32string_view s, std::size_t pos) {
  if (pos > 0 && is_ascii_alnum(s[pos - 1])) return 0;
  auto run_end = [&](std::size_t from) {
    while (from < s.size() && !is_space(s[from])) ++from;
    return from;
  };
  for (std::u32string_view scheme : {U"https://", U"http://", U"ftp://"}) {
    if (starts_with_icase(s, pos, scheme)) {
      std::size_t body = pos + scheme.size();
      std::size_t end = run_end(body);
      return end > body ? end - pos : 0;
    }
  }
  if (starts_with_icase(s, pos, U"www.")) {
    std::size_t host = pos + 4;
    std::size_t end = run_end(host);
    // The host after "www." must itself contain a dot followed by something.
    for (std::size_t k = host + 1; k + 1 < end; ++k) {
      if (s[k] == U'.') return end - pos;
    }
  }
  return 0;
}

inline bool is_email_local(char32_t c) {
  return is_ascii_alnum(c) || c == U'.' || c == U'_' || c == U'%' || c == U'+' || c == U'-';
}

inline bool is_email_domain(char32_t c) { return is_ascii_alnum(c) || c == U'.' || c == U'-'; }

// Span [begin, end) of an e-mail address around the '@' at `at`, if valid.
inline std::optional<std::pair<std::size_t, std::size_t>> match_email(std::u32string_view s,
                                                                      std::size_t at) {
  std::size_t begin = at;
  while (begin > 0 && is_email_local(s[begin - 1])) --begin;
  if (begin == at) return std::nullopt;
  std::size_t end = at + 1;
  while (end < s.size() && is_email_domain(s[end])) ++end;
  while (end > at + 1 && (s[end - 1] == U'.' || s[end - 1] == U'-')) --end;
  std::u32string_view domain = s.substr(at + 1, end - at - 1);
  std::size_t last_dot = domain.rfind(U'.');
  if (last_dot == std::u32string_view::npos || last_dot == 0) return std::nullopt;
  std::u32string_view tld = domain.substr(last_dot + 1);
  if (tld.size() < 2 || !std::all_of(tld.begin(), tld.end(), is_latin_letter)) return std::nullopt;
  if (domain.find(U"..") != std::u32string_view::npos || domain.front() == U'.') return std::nullopt;
  return std::make_pair(begin, end);
}

inline std::size_t digit_run(std::u32string_view s, std::size_t pos) {
  std::size_t end = pos;
  while (end < s.size() && is_digit(s[end])) ++end;
  return end - pos;
}

// Length of a phone number starting at pos, 0 when none starts there.
// Shape: optional "+<1-3 digit country code><sep>", then digit groups of 3 to 7
// joined by single '-' or ' '; at least two groups unless a country code was
// given; 7 to 15 digits in total.
inline std::size_t match_phone(std::u32string_view s, std::size_t pos) {
  if (pos > 0 && (is_digit(s[pos - 1]) || s[pos - 1] == U'+' || is_latin_letter(s[pos - 1]))) return 0;
  std::size_t i = pos;
  std::size_t digits = 0;
  bool country = false;
  auto is_sep = [](char32_t c) { return c == U'-' || c == U' '; };
  if (s[i] == U'+') {
    std::size_t cc = digit_run(s, i + 1);
    if (cc < 1 || cc > 3) return 0;
    i += 1 + cc;
    if (i + 1 >= s.size() || !is_sep(s[i]) || !is_digit(s[i + 1])) return 0;
    ++i;
    digits += cc;
    country = true;
  }
  std::size_t groups = 0;
  std::size_t end = pos;
  while (i < s.size()) {
    std::size_t len = digit_run(s, i);
    if (len < 3 || len > 7) break;
    // A group glued to a letter is a code, not a number.
    if (i + len < s.size() && is_latin_letter(s[i + len])) break;
    if (digits + len > 15) break;
    digits += len;
    ++groups;
    i += len;
    end = i;
    if (i + 1 < s.size() && is_sep(s[i]) && is_digit(s[i + 1])) {
      ++i;
      continue;
    }
    break;
  }
  if (groups == 0 || (groups < 2 && !country)) return 0;
  if (digits < 7) return 0;
  return end - pos;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Steps

inline std::string normalize_whitespace(std::string_view text) {
  return utf8::encode(detail::collapse(utf8::decode(text)));
}

inline std::string remove_punctuation(std::string_view text) {
  auto cps = utf8::decode(text);
  return utf8::encode(detail::collapse(detail::erase_if(cps, is_punct)));
}

inline std::string remove_diacritics(std::string_view text, bool remove_superscript_alef = false) {
  auto cps = utf8::decode(text);
  auto out = detail::erase_if(cps, [&](char32_t c) { return is_diacritic(c, remove_superscript_alef); });
  return utf8::encode(detail::collapse(out));
}

namespace detail {

inline std::u32string url_pass(const std::u32string& cps) {
  std::u32string out;
  out.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size();) {
    if (std::size_t len = match_url(cps, i)) {
      out.push_back(U' ');
      i += len;
    } else {
      out.push_back(cps[i++]);
    }
  }
  return collapse(out);
}

inline std::u32string email_pass(const std::u32string& cps) {
  std::u32string out;
  out.reserve(cps.size());
  std::size_t copied = 0;  // cps[0, copied) already emitted
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] != U'@') continue;
    auto span = match_email(cps, i);
    if (!span || span->first < copied) continue;
    out.append(cps, copied, span->first - copied);
    out.push_back(U' ');
    copied = span->second;
    i = span->second - 1;
  }
  out.append(cps, copied, std::u32string::npos);
  return collapse(out);
}

inline std::u32string phone_pass(const std::u32string& cps) {
  std::u32string out;
  out.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size();) {
    std::size_t len = (is_digit(cps[i]) || cps[i] == U'+') ? match_phone(cps, i) : 0;
    if (len) {
      out.push_back(U' ');
      i += len;
    } else {
      out.push_back(cps[i++]);
    }
  }
  return collapse(out);
}

// Removing a match can join its neighbours into a new one, so passes repeat
// until the text stops changing. Each productive pass shortens the text.
template <typename Pass>
std::string remove_until_stable(std::string_view text, Pass pass) {
  auto cur = collapse(utf8::decode(text));
  for (;;) {
    auto next = pass(cur);
    if (next == cur) return utf8::encode(cur);
    cur = std::move(next);
  }
}

}  // namespace detail

inline std::string remove_urls(std::string_view text) { return detail::remove_until_stable(text, detail::url_pass); }

inline std::string remove_emails(std::string_view text) {
  return detail::remove_until_stable(text, detail::email_pass);
}

inline std::string remove_phone_numbers(std::string_view text) {
  return detail::remove_until_stable(text, detail::phone_pass);
}

inline std::string remove_numbers(std::string_view text) {
  auto cps = utf8::decode(text);
  return utf8::encode(detail::collapse(detail::erase_if(cps, is_digit)));
}

// Symbol -> ISO code, e.g. "$" -> "USD".
using CurrencyMap = std::map<std::string, std::string>;

inline CurrencyMap default_currency_map() {
  return {
      {"$", "USD"},
      {"€", "EUR"},
      {"£", "GBP"},
      {"¥", "JPY"},
      {"₹", "INR"},
      {"₨", "PKR"},
  };
}

inline std::string replace_currency(std::string_view text, const CurrencyMap& map = default_currency_map()) {
  std::vector<std::pair<std::u32string, std::u32string>> table;
  for (const auto& [symbol, code] : map) {
    if (symbol.empty()) continue;
    table.emplace_back(utf8::decode(symbol), utf8::decode(code));
  }
  // Longest symbol wins when one is a prefix of another.
  std::stable_sort(table.begin(), table.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  auto cps = utf8::decode(text);
  std::u32string out;
  out.reserve(cps.size() + 8);
  std::u32string_view view(cps);
  for (std::size_t i = 0; i < cps.size();) {
    bool hit = false;
    for (const auto& [symbol, code] : table) {
      if (view.substr(i, symbol.size()) == symbol) {
        out.push_back(U' ');
        out += code;
        out.push_back(U' ');
        i += symbol.size();
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(cps[i++]);
  }
  return utf8::encode(detail::collapse(out));
}

// Strips A-Z/a-z. Whitespace-delimited tokens listed in `keep` survive intact.
inline std::string remove_english(std::string_view text, const std::set<std::string>& keep = {}) {
  auto cps = detail::collapse(utf8::decode(text));
  std::set<std::u32string> keep32;
  for (const auto& k : keep) keep32.insert(utf8::decode(k));
  std::u32string out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t j = cps.find(U' ', i);
    if (j == std::u32string::npos) j = cps.size();
    std::u32string_view token(cps.data() + i, j - i);
    if (!keep32.empty() && keep32.count(std::u32string(token))) {
      out += token;
    } else {
      out += detail::erase_if(token, is_latin_letter);
    }
    out.push_back(U' ');
    i = j + 1;
  }
  return utf8::encode(detail::collapse(out));
}

// ---------------------------------------------------------------------------
// Pipeline

enum class Step {
  remove_urls,
  remove_emails,
  remove_phone_numbers,
  replace_currency,
  remove_numbers,
  remove_punctuation,
  remove_diacritics,
  remove_english,
  normalize_whitespace,
};

inline constexpr std::string_view step_name(Step s) {
  switch (s) {
    case Step::remove_urls: return "remove_urls";
    case Step::remove_emails: return "remove_emails";
    case Step::remove_phone_numbers: return "remove_phone_numbers";
    case Step::replace_currency: return "replace_currency";
    case Step::remove_numbers: return "remove_numbers";
    case Step::remove_punctuation: return "remove_punctuation";
    case Step::remove_diacritics: return "remove_diacritics";
    case Step::remove_english: return "remove_english";
    case Step::normalize_whitespace: return "normalize_whitespace";
  }
  return "";
}

// Pattern-bearing removals run before the character-class strips that
// would break their patterns.
inline const std::vector<Step>& default_steps() {
  static const std::vector<Step> steps = {
      Step::remove_urls,     Step::remove_emails,      Step::remove_phone_numbers,
      Step::replace_currency, Step::remove_numbers,    Step::remove_punctuation,
      Step::remove_diacritics, Step::remove_english,   Step::normalize_whitespace,
  };
  return steps;
}

inline std::optional<Step> parse_step(std::string_view name) {
  for (Step s : default_steps()) {
    if (step_name(s) == name) return s;
  }
  return std::nullopt;
}

struct NormalizerConfig {
  std::vector<Step> enabled_steps = default_steps();
  CurrencyMap currency_map = default_currency_map();
  bool remove_superscript_alef = false;

  void validate() const {
    std::set<Step> seen;
    for (Step s : enabled_steps) {
      if (!seen.insert(s).second) {
        throw ConfigError("step listed twice: " + std::string(step_name(s)));
      }
    }
    auto usd = currency_map.find("$");
    if (usd == currency_map.end() || usd->second != "USD") {
      throw ConfigError("currency map must map \"$\" to \"USD\"");
    }
    for (const auto& [symbol, code] : currency_map) {
      if (symbol.empty() || !utf8::is_valid(symbol)) throw ConfigError("empty or invalid currency symbol");
      for (char32_t c : utf8::decode(symbol)) {
        if (is_space(c)) throw ConfigError("currency symbol contains whitespace");
      }
      if (code.empty() || !std::all_of(code.begin(), code.end(), [](char c) {
            return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
          })) {
        throw ConfigError("currency code must be Latin letters: '" + code + "'");
      }
    }
  }

  bool has_step(Step s) const {
    return std::find(enabled_steps.begin(), enabled_steps.end(), s) != enabled_steps.end();
  }

  nlohmann::json to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    for (Step s : enabled_steps) steps.push_back(std::string(step_name(s)));
    return {{"steps", steps},
            {"currency_map", currency_map},
            {"remove_superscript_alef", remove_superscript_alef}};
  }

  // Missing keys keep their defaults.
  static NormalizerConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("normalizer config must be a JSON object");
    NormalizerConfig cfg;
    try {
      if (j.contains("steps")) {
        cfg.enabled_steps.clear();
        for (const auto& name : j.at("steps")) {
          auto step = parse_step(name.get<std::string>());
          if (!step) throw ConfigError("unknown step: " + name.get<std::string>());
          cfg.enabled_steps.push_back(*step);
        }
      }
      if (j.contains("currency_map")) {
        cfg.currency_map = j.at("currency_map").get<CurrencyMap>();
      }
      if (j.contains("remove_superscript_alef")) {
        cfg.remove_superscript_alef = j.at("remove_superscript_alef").get<bool>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed normalizer config: ") + e.what());
    }
    cfg.validate();
    return cfg;
  }
};

inline NormalizerConfig load_normalizer_config(const std::string& path) {
  auto text = utf8::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return NormalizerConfig::from_json(j);
}

inline std::string apply_step(Step step, std::string_view text, const NormalizerConfig& config) {
  switch (step) {
    case Step::remove_urls: return remove_urls(text);
    case Step::remove_emails: return remove_emails(text);
    case Step::remove_phone_numbers: return remove_phone_numbers(text);
    case Step::replace_currency: return replace_currency(text, config.currency_map);
    case Step::remove_numbers: return remove_numbers(text);
    case Step::remove_punctuation: return remove_punctuation(text);
    case Step::remove_diacritics: return remove_diacritics(text, config.remove_superscript_alef);
    case Step::remove_english: {
      // Currency codes are the one Latin content the pipeline emits itself.
      std::set<std::string> keep;
      if (config.has_step(Step::replace_currency)) {
        for (const auto& [symbol, code] : config.currency_map) keep.insert(code);
      }
      return remove_english(text, keep);
    }
    case Step::normalize_whitespace: return normalize_whitespace(text);
  }
  return std::string(text);
}

// Runs the enabled steps in configured order. The result is always trimmed
// and single-spaced.
inline std::string normalize(std::string_view text, const NormalizerConfig& config = {}) {
  config.validate();
  std::string current = normalize_whitespace(text);
  for (Step step : config.enabled_steps) current = apply_step(step, current, config);
  return current;
}

}  // namespace urdu_news::textnorm
