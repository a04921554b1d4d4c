#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "urdu_news/error.hpp"

namespace urdu_news::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may contain the delimiter, doubled quotes
// and line breaks. CRLF and LF are both accepted. Blank lines are skipped.
inline std::vector<Record> parse(std::string_view text, char delimiter = ',') {
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
    throw ConfigError("invalid CSV delimiter");
  }
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  bool pending = false;  // something seen since the last record break
  while (i < n) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
      pending = true;
      ++i;
      continue;
    }
    if (c == delimiter) {
      end_field();
      pending = true;
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      end_record();
      ++line;
      current.line = line;
      pending = false;
      continue;
    }
    field.push_back(c);
    pending = true;
    ++i;
  }
  if (in_quotes) {
    throw DataError("unterminated quoted field starting on line " + std::to_string(current.line));
  }
  if (pending) end_record();
  return records;
}

// Quotes a field when it contains the delimiter, quotes or line breaks.
inline std::string escape(std::string_view value, char delimiter = ',') {
  if (value.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace urdu_news::csv
