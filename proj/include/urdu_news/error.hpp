#pragma once

#include <stdexcept>
#include <string>

namespace urdu_news {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data is malformed: bad CSV, undecodable bytes, bad embedding rows.
class DataError : public Error {
 public:
  using Error::Error;
};

// A lookup by id (article, session, vector) found nothing.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or step identifiers.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Vector length mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Remote endpoint failure: unreachable, timeout, non-2xx, bad payload.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// A similarity backend has no data to answer with.
class BackendUnavailableError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures other than malformed content.
class IoError : public Error {
 public:
  using Error::Error;
};

// Session store file cannot be parsed.
class CorruptStoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace urdu_news
