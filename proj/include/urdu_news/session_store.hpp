#pragma once

// Line-delimited JSON session log: one session snapshot per line, the last
// line for a session id wins. Each append is fsync'ed before returning.

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "urdu_news/error.hpp"
#include "urdu_news/recommend.hpp"
#include "urdu_news/utf8.hpp"

namespace urdu_news {

inline nlohmann::json session_to_json(const Session& s) {
  return {{"session_id", s.session_id},
          {"read_ids", s.read_ids},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at}};
}

inline Session session_from_json(const nlohmann::json& j) {
  Session s;
  s.session_id = j.at("session_id").get<std::string>();
  s.read_ids = j.at("read_ids").get<std::vector<ArticleId>>();
  s.created_at = j.at("created_at").get<std::int64_t>();
  s.updated_at = j.at("updated_at").get<std::int64_t>();
  if (s.session_id.empty()) throw DataError("empty session_id");
  if (std::set<ArticleId>(s.read_ids.begin(), s.read_ids.end()).size() != s.read_ids.size()) {
    throw DataError("duplicate read ids");
  }
  if (s.updated_at < s.created_at) throw DataError("updated_at precedes created_at");
  return s;
}

namespace detail {

inline void write_all_and_sync(int fd, const std::string& data, const std::string& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write " + path + ": " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) throw IoError("fsync " + path + ": " + std::strerror(errno));
}

}  // namespace detail

// Missing file means no sessions. Any unparsable line is fatal.
inline std::map<std::string, Session> load_sessions(const std::string& path) {
  std::map<std::string, Session> sessions;
  if (!std::filesystem::exists(path)) return sessions;
  std::string text;
  try {
    text = utf8::read_file(path);
  } catch (const DataError& e) {
    throw CorruptStoreError(std::string("session store: ") + e.what());
  }
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    if (!terminated) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    const std::size_t offset = pos;
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      Session s = session_from_json(nlohmann::json::parse(line));
      sessions[s.session_id] = std::move(s);
    } catch (const std::exception& e) {
      throw CorruptStoreError(path + ": corrupt record on line " + std::to_string(line_no) + " (byte offset " +
                              std::to_string(offset) + (terminated ? "" : ", unterminated") + "): " + e.what());
    }
  }
  return sessions;
}

class SessionStore {
 public:
  explicit SessionStore(std::string path) : path_(std::move(path)), sessions_(load_sessions(path_)) {}

  const std::string& path() const { return path_; }
  const std::map<std::string, Session>& sessions() const { return sessions_; }
  std::size_t size() const { return sessions_.size(); }

  const Session* find(const std::string& id) const {
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : &it->second;
  }

  // Durable on return.
  void persist(const Session& session) {
    std::string line = session_to_json(session).dump() + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("open " + path_ + ": " + std::strerror(errno));
    try {
      detail::write_all_and_sync(fd, line, path_);
    } catch (...) {
      ::close(fd);
      throw;
    }
    ::close(fd);
    sessions_[session.session_id] = session;
  }

  // Rewrites the log with one line per session (atomic rename).
  void compact() {
    std::string data;
    for (const auto& [id, s] : sessions_) data += session_to_json(s).dump() + "\n";
    const std::string tmp = path_ + ".tmp";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("open " + tmp + ": " + std::strerror(errno));
    try {
      detail::write_all_and_sync(fd, data, tmp);
    } catch (...) {
      ::close(fd);
      throw;
    }
    ::close(fd);
    if (std::rename(tmp.c_str(), path_.c_str()) != 0) {
      throw IoError("rename " + tmp + ": " + std::strerror(errno));
    }
  }

  // Sequential ids "s-1", "s-2", ...; deterministic for a given store.
  std::string next_session_id() const {
    std::uint64_t max_seen = 0;
    for (const auto& [id, s] : sessions_) {
      if (id.rfind("s-", 0) != 0) continue;
      std::uint64_t n = 0;
      auto [ptr, ec] = std::from_chars(id.data() + 2, id.data() + id.size(), n);
      if (ec == std::errc{} && ptr == id.data() + id.size()) max_seen = std::max(max_seen, n);
    }
    return "s-" + std::to_string(max_seen + 1);
  }

 private:
  std::string path_;
  std::map<std::string, Session> sessions_;
};

}  // namespace urdu_news
