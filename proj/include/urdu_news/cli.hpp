#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage, 2 data error,
// 3 runtime error. Data goes to `out`, diagnostics to `err`.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urdu_news/corpus.hpp"
#include "urdu_news/engine.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/metrics.hpp"
#include "urdu_news/recommend.hpp"
#include "urdu_news/service.hpp"
#include "urdu_news/session_store.hpp"
#include "urdu_news/textnorm.hpp"
#include "urdu_news/tokenize.hpp"

#ifndef URDU_NEWS_DATA_DIR
#define URDU_NEWS_DATA_DIR ""
#endif

namespace urdu_news::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeError = 3 };

inline std::string default_stopwords_path() {
  std::string dir = URDU_NEWS_DATA_DIR;
  if (dir.empty()) return {};
  auto path = dir + "/stopwords_ur.txt";
  return std::filesystem::exists(path) ? path : std::string{};
}

namespace detail {

struct UsageError : Error {
  using Error::Error;
};

// Shared corpus/preprocessing flags.
struct CorpusOptions {
  std::string corpus;
  std::string delimiter = ",";
  std::string stopwords = default_stopwords_path();
  bool no_stopwords = false;
  std::string normalizer_config;
  std::string index;

  void add_to(CLI::App* cmd, bool corpus_required = true, bool with_index = false) {
    auto* c = cmd->add_option("--corpus", corpus, "Delimited news dataset with a header row");
    if (corpus_required) c->required();
    cmd->add_option("--delimiter", delimiter, "Field delimiter (one character)")->capture_default_str();
    add_preprocessing(cmd);
    if (with_index) cmd->add_option("--index", index, "Load a saved TF-IDF index instead of building one");
  }

  void add_preprocessing(CLI::App* cmd) {
    cmd->add_option("--stopwords", stopwords, "Stopword list, one word per line")->capture_default_str();
    cmd->add_flag("--no-stopwords", no_stopwords, "Keep every token");
    cmd->add_option("--normalizer-config", normalizer_config, "JSON normalizer configuration");
  }

  char delimiter_char() const {
    if (delimiter == "\\t" || delimiter == "tab") return '\t';
    if (delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
    return delimiter[0];
  }

  textnorm::NormalizerConfig normalizer() const {
    return normalizer_config.empty() ? textnorm::NormalizerConfig{}
                                     : textnorm::load_normalizer_config(normalizer_config);
  }

  StopwordSet stopword_set() const {
    if (no_stopwords || stopwords.empty()) return {};
    return load_stopwords(stopwords);
  }

  EngineConfig engine_config() const {
    EngineConfig cfg;
    cfg.corpus_path = corpus;
    cfg.delimiter = delimiter_char();
    if (!no_stopwords && !stopwords.empty()) cfg.stopwords_path = stopwords;
    cfg.normalizer = normalizer();
    if (!index.empty()) cfg.index_path = index;
    return cfg;
  }
};

struct RecommendOptions {
  std::string backend = "tfidf";
  std::string aggregation = "per_last_read";
  double threshold = 0.60;
  std::size_t k = 10;
  std::string embeddings;
  std::string embed_endpoint;
  int embed_timeout_ms = 10'000;
  std::size_t embed_dim = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "Similarity backend: tfidf | embedding")->capture_default_str();
    cmd->add_option("--aggregation", aggregation, "per_last_read | max_over_reads")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Recommend only scores strictly above this")->capture_default_str();
    cmd->add_option("--k", k, "Maximum number of recommendations")->capture_default_str();
    cmd->add_option("--embeddings", embeddings, "Embedding file (dim header, id<TAB>values rows)");
    cmd->add_option("--embed-endpoint", embed_endpoint, "Remote embedding endpoint URL");
    cmd->add_option("--embed-timeout-ms", embed_timeout_ms, "Remote embedding timeout")->capture_default_str();
    cmd->add_option("--embed-dim", embed_dim, "Expected embedding dimension (0 = any)");
  }

  RecommenderConfig config() const {
    RecommenderConfig cfg;
    auto b = parse_backend(backend);
    if (!b) throw UsageError("unknown backend: " + backend);
    auto a = parse_aggregation(aggregation);
    if (!a) throw UsageError("unknown aggregation: " + aggregation);
    cfg.backend = *b;
    cfg.aggregation = *a;
    cfg.threshold = threshold;
    cfg.top_k = k;
    cfg.validate();
    return cfg;
  }

  std::optional<EmbeddingProviderConfig> embedding() const {
    if (!embeddings.empty() && !embed_endpoint.empty()) {
      throw UsageError("--embeddings and --embed-endpoint are mutually exclusive");
    }
    if (embeddings.empty() && embed_endpoint.empty()) return std::nullopt;
    EmbeddingProviderConfig cfg;
    if (!embeddings.empty()) {
      cfg.mode = EmbeddingMode::file;
      cfg.path = embeddings;
    } else {
      cfg.mode = EmbeddingMode::remote;
      cfg.endpoint = embed_endpoint;
    }
    cfg.timeout = std::chrono::milliseconds(embed_timeout_ms);
    if (embed_dim) cfg.expected_dim = embed_dim;
    return cfg;
  }
};

inline std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> read_input_lines(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return read_lines(in);
  std::istringstream file(utf8::read_file(path));
  return read_lines(file);
}

inline std::set<ArticleId> read_id_file(const std::string& path) {
  std::istringstream text(utf8::read_file(path));
  std::set<ArticleId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(text, line)) {
    ++line_no;
    auto trimmed = urdu_news::detail::trim_ascii(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    ids.insert(urdu_news::detail::parse_uint(trimmed, "article id", line_no));
  }
  return ids;
}

inline void print_recommendations(const std::vector<Recommendation>& recs, const Corpus& corpus,
                                  const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& r : recs) {
      items.push_back({{"article_id", r.article_id},
                       {"headline", get_article(corpus, r.article_id).headline},
                       {"score", r.score},
                       {"backend", backend_name(r.backend)},
                       {"against_read_id", r.against_read_id}});
    }
    out << items.dump(2) << '\n';
    return;
  }
  out << "rank\tarticle_id\tscore\tagainst\tcategory\theadline\n";
  std::size_t rank = 0;
  for (const auto& r : recs) {
    const Article& a = get_article(corpus, r.article_id);
    out << ++rank << '\t' << r.article_id << '\t' << fixed(r.score) << '\t' << r.against_read_id << '\t'
        << slug(a.category) << '\t' << a.headline << '\n';
  }
}

inline void print_report(const ConfusionMatrix& cm, const MetricsReport& report, const std::string& format,
                         std::ostream& out) {
  if (format == "json") {
    out << metrics_to_json(cm, report).dump(2) << '\n';
    return;
  }
  out << "TP=" << cm.tp << " FP=" << cm.fp << " FN=" << cm.fn << " TN=" << cm.tn << "\n";
  write_metrics_table(report, out);
}

inline void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format: text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_ingest(const CorpusOptions& opts, const std::string& format, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(opts.corpus, opts.delimiter_char());
  for (const auto& d : corpus.dropped_rows()) err << "dropped row at line " << d.line << ": " << d.reason << '\n';
  err << "loaded " << corpus.size() << " articles, dropped " << corpus.dropped_rows().size() << " rows\n";
  auto counts = category_counts(corpus);
  if (format == "json") {
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [c, n] : counts) cats[std::string(slug(c))] = n;
    out << nlohmann::json{{"articles", corpus.size()}, {"dropped", corpus.dropped_rows().size()}, {"categories", cats}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "Category\tNo of articles\n";
  for (const auto& [c, n] : counts) out << display_name(c) << '\t' << n << '\n';
  out << "Total\t" << corpus.size() << '\n';
  return kOk;
}

inline int cmd_normalize(const CorpusOptions& opts, const std::string& input, const std::string& format,
                         std::istream& in, std::ostream& out) {
  auto config = opts.normalizer();
  auto lines = read_input_lines(input, in);
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : lines) arr.push_back(textnorm::normalize(l, config));
    out << arr.dump(2) << '\n';
    return kOk;
  }
  for (const auto& l : lines) out << textnorm::normalize(l, config) << '\n';
  return kOk;
}

inline int cmd_tokenize(const CorpusOptions& opts, const std::string& input, bool raw, const std::string& format,
                        std::istream& in, std::ostream& out) {
  auto config = opts.normalizer();
  auto stopwords = opts.stopword_set();
  auto lines = read_input_lines(input, in);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : lines) {
    TokenList tokens = tokenize(raw ? textnorm::normalize_whitespace(l) : textnorm::normalize(l, config));
    TokenList filtered = remove_stopwords(tokens, stopwords);
    if (format == "json") {
      arr.push_back({{"tokens", tokens.tokens},
                     {"filtered", filtered.tokens},
                     {"token_count", tokens.size()},
                     {"filtered_count", filtered.size()}});
      continue;
    }
    out << "tokens\t" << tokens.size();
    for (const auto& t : tokens.tokens) out << '\t' << t;
    out << "\nfiltered\t" << filtered.size();
    for (const auto& t : filtered.tokens) out << '\t' << t;
    out << '\n';
  }
  if (format == "json") out << arr.dump(2) << '\n';
  return kOk;
}

inline int cmd_index(const CorpusOptions& opts, const std::string& output, const std::string& scheme_name,
                     const std::string& format, std::ostream& out, std::ostream& err) {
  auto scheme = parse_tf_scheme(scheme_name);
  if (!scheme) throw UsageError("unknown tf scheme: " + scheme_name);
  Corpus corpus = load_corpus(opts.corpus, opts.delimiter_char());
  if (corpus.empty()) throw DataError("corpus has no complete rows to index");
  auto index = build_index(preprocess_corpus(corpus, opts.normalizer(), opts.stopword_set()), *scheme);
  save_index_file(index, output);
  err << "wrote " << output << '\n';
  if (format == "json") {
    out << nlohmann::json{{"documents", index.doc_count}, {"terms", index.vocabulary.size()}, {"tf_scheme", scheme_name}}
               .dump(2)
        << '\n';
  } else {
    out << "documents\t" << index.doc_count << "\nterms\t" << index.vocabulary.size() << "\ntf_scheme\t"
        << scheme_name << '\n';
  }
  return kOk;
}

inline Engine load_engine(const CorpusOptions& opts, const RecommendOptions& rec) {
  EngineConfig cfg = opts.engine_config();
  cfg.embedding = rec.embedding();
  return Engine::load(cfg);
}

inline Session open_session(const SessionStore& store, const std::string& id) {
  if (const Session* s = store.find(id)) return *s;
  return new_session(id);
}

inline int cmd_recommend(const CorpusOptions& opts, const RecommendOptions& rec, const std::string& session_file,
                         const std::string& session_id, const std::vector<ArticleId>& reads,
                         const std::string& format, std::ostream& out, std::ostream& err) {
  RecommenderConfig config = rec.config();
  Engine engine = load_engine(opts, rec);
  SessionStore store(session_file);
  const bool known = store.find(session_id) != nullptr;
  Session session = open_session(store, session_id);
  Session updated = session;
  for (ArticleId id : reads) updated = mark_read(updated, id, engine.corpus());
  if (!known || updated.read_ids != session.read_ids) store.persist(updated);
  if (updated.read_ids.empty()) throw UsageError("session '" + session_id + "' has no reads; pass --read <id>");
  auto recs = engine.recommend(updated, config);
  if (recs.empty()) err << "no article scores above " << fixed(config.threshold, 2) << '\n';
  print_recommendations(recs, engine.corpus(), format, out);
  return kOk;
}

struct EvaluateOptions {
  std::optional<std::uint64_t> tp, fp, fn, tn;
  std::string predicted_file;
  std::string relevant_file;
  std::string universe_file;
  std::string corpus;
  std::string delimiter = ",";
};

inline int cmd_evaluate(const EvaluateOptions& o, const std::string& format, std::ostream& out) {
  const bool counts = o.tp || o.fp || o.fn || o.tn;
  const bool files = !o.predicted_file.empty() || !o.relevant_file.empty();
  if (counts == files) {
    throw UsageError("give either --tp/--fp/--fn/--tn or --predicted-file/--relevant-file");
  }
  ConfusionMatrix cm;
  if (counts) {
    if (!(o.tp && o.fp && o.fn && o.tn)) throw UsageError("--tp, --fp, --fn and --tn are all required");
    cm = {*o.tp, *o.fp, *o.fn, *o.tn};
  } else {
    if (o.predicted_file.empty() || o.relevant_file.empty()) {
      throw UsageError("--predicted-file and --relevant-file go together");
    }
    std::set<ArticleId> universe;
    if (!o.universe_file.empty()) {
      universe = read_id_file(o.universe_file);
    } else if (!o.corpus.empty()) {
      if (o.delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
      for (const Article& a : load_corpus(o.corpus, o.delimiter[0])) universe.insert(a.id);
    } else {
      throw UsageError("label files need --universe-file or --corpus");
    }
    cm = confusion_from_labels(read_id_file(o.predicted_file), read_id_file(o.relevant_file), universe);
  }
  print_report(cm, compute_metrics(cm), format, out);
  return kOk;
}

inline int cmd_serve(const CorpusOptions& opts, const RecommendOptions& rec, const std::string& host, int port,
                     const std::string& sessions, std::ostream& err) {
  ServiceConfig cfg;
  cfg.host = host;
  cfg.port = port;
  cfg.engine = opts.engine_config();
  cfg.engine.embedding = rec.embedding();
  cfg.session_store_path = sessions;
  cfg.recommender = rec.config();

  // Server threads inherit the blocked mask; this thread waits for the signal.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(cfg);
  int bound = service.start();
  err << "serving " << service.engine().corpus().size() << " articles on http://" << host << ':' << bound << '\n';
  int sig = 0;
  sigwait(&set, &sig);
  err << "shutting down\n";
  service.stop();
  pthread_sigmask(SIG_UNBLOCK, &set, nullptr);
  return kOk;
}

inline int cmd_session(const CorpusOptions& opts, const RecommendOptions& rec, const std::string& session_file,
                       const std::string& session_id, std::istream& in, std::ostream& out, std::ostream& err) {
  RecommenderConfig config = rec.config();
  Engine engine = load_engine(opts, rec);
  SessionStore store(session_file);
  Session session = open_session(store, session_id);
  if (!store.find(session_id)) store.persist(session);
  const Corpus& corpus = engine.corpus();

  auto show_recs = [&] {
    if (session.read_ids.empty()) {
      out << "read an article first\n";
      return;
    }
    print_recommendations(engine.recommend(session, config), corpus, "text", out);
  };

  err << "commands: list [category] [offset] [limit] | show <id> | read <id> | recommend | quit\n";
  std::string line;
  while (err << "> " << std::flush, std::getline(in, line)) {
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit" || cmd == "exit") break;
    try {
      if (cmd == "list") {
        std::string cat;
        std::size_t offset = 0;
        std::size_t limit = 20;
        words >> cat >> offset >> limit;
        std::optional<Category> filter;
        if (!cat.empty() && cat != "all") {
          filter = parse_category(cat);
          if (!filter) throw UsageError("unknown category: " + cat);
        }
        std::size_t seen = 0;
        std::size_t shown = 0;
        for (const Article& a : corpus) {
          if (filter && a.category != *filter) continue;
          if (seen++ < offset || shown >= limit) continue;
          ++shown;
          out << a.id << '\t' << slug(a.category) << '\t' << a.headline << (session.has_read(a.id) ? "\t(read)" : "")
              << '\n';
        }
      } else if (cmd == "show" || cmd == "read") {
        std::string raw;
        words >> raw;
        if (raw.empty()) throw UsageError(cmd + " needs an article id");
        ArticleId id = urdu_news::detail::parse_uint(raw, "article id", 0);
        const Article& a = get_article(corpus, id);
        if (cmd == "show") {
          out << a.headline << '\n' << a.body << '\n';
        } else {
          Session updated = mark_read(session, id, corpus);
          store.persist(updated);
          session = std::move(updated);
          out << a.headline << '\n';
          show_recs();
        }
      } else if (cmd == "recommend") {
        show_recs();
      } else if (cmd == "help") {
        out << "list [category] [offset] [limit] | show <id> | read <id> | recommend | quit\n";
      } else {
        err << "unknown command: " << cmd << '\n';
      }
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
    }
  }
  return kOk;
}

}  // namespace detail

// args excludes the program name.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content-based Urdu news recommender", "urdu-news"};
  app.require_subcommand(1);

  std::string format = "text";
  detail::CorpusOptions corpus_opts;
  detail::RecommendOptions rec_opts;

  auto* ingest = app.add_subcommand("ingest", "Validate a dataset and print per-category counts");
  corpus_opts.add_to(ingest);
  detail::add_format(ingest, format);

  std::string input;
  auto* normalize = app.add_subcommand("normalize", "Clean text line by line (stdin or --input)");
  normalize->add_option("--input", input, "Input file; '-' or absent reads stdin");
  normalize->add_option("--normalizer-config", corpus_opts.normalizer_config, "JSON normalizer configuration");
  detail::add_format(normalize, format);

  bool raw = false;
  auto* tok = app.add_subcommand("tokenize", "Print tokens and stopword-filtered tokens per line");
  tok->add_option("--input", input, "Input file; '-' or absent reads stdin");
  tok->add_flag("--raw", raw, "Skip normalization, only split on whitespace");
  corpus_opts.add_preprocessing(tok);
  detail::add_format(tok, format);

  std::string output;
  std::string tf_scheme = "raw";
  auto* index = app.add_subcommand("index", "Build and save a TF-IDF index");
  corpus_opts.add_to(index);
  index->add_option("--output,-o", output, "Index file to write")->required();
  index->add_option("--tf-scheme", tf_scheme, "raw | log_scaled | length_normalized | max_normalized")
      ->capture_default_str();
  detail::add_format(index, format);

  std::string session_file;
  std::string session_id = "cli";
  std::vector<ArticleId> reads;
  auto* rec = app.add_subcommand("recommend", "Mark reads in a session file and print recommendations");
  corpus_opts.add_to(rec, true, true);
  rec_opts.add_to(rec);
  rec->add_option("--session-file", session_file, "Session log (JSON lines)")->required();
  rec->add_option("--session-id", session_id, "Session to use or create")->capture_default_str();
  rec->add_option("--read", reads, "Article id read by the user (repeatable)");
  detail::add_format(rec, format);

  detail::EvaluateOptions eval_opts;
  auto* eval = app.add_subcommand("evaluate", "Print the confusion-matrix metrics table");
  eval->add_option("--tp", eval_opts.tp, "True positives");
  eval->add_option("--fp", eval_opts.fp, "False positives");
  eval->add_option("--fn", eval_opts.fn, "False negatives");
  eval->add_option("--tn", eval_opts.tn, "True negatives");
  eval->add_option("--predicted-file", eval_opts.predicted_file, "Recommended ids, one per line");
  eval->add_option("--relevant-file", eval_opts.relevant_file, "Relevant ids, one per line");
  eval->add_option("--universe-file", eval_opts.universe_file, "All candidate ids, one per line");
  eval->add_option("--corpus", eval_opts.corpus, "Use every corpus id as the universe");
  eval->add_option("--delimiter", eval_opts.delimiter, "Corpus delimiter")->capture_default_str();
  detail::add_format(eval, format);

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string sessions = "sessions.jsonl";
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  corpus_opts.add_to(serve, true, true);
  rec_opts.add_to(serve);
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--sessions", sessions, "Session log path")->capture_default_str();

  auto* sess = app.add_subcommand("session", "Interactive reading session: list, read, recommend");
  corpus_opts.add_to(sess, true, true);
  rec_opts.add_to(sess);
  sess->add_option("--session-file", session_file, "Session log (JSON lines)")->required();
  sess->add_option("--session-id", session_id, "Session to use or create")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return detail::cmd_ingest(corpus_opts, format, out, err);
    if (*normalize) return detail::cmd_normalize(corpus_opts, input, format, in, out);
    if (*tok) return detail::cmd_tokenize(corpus_opts, input, raw, format, in, out);
    if (*index) return detail::cmd_index(corpus_opts, output, tf_scheme, format, out, err);
    if (*rec) return detail::cmd_recommend(corpus_opts, rec_opts, session_file, session_id, reads, format, out, err);
    if (*eval) return detail::cmd_evaluate(eval_opts, format, out);
    if (*serve) return detail::cmd_serve(corpus_opts, rec_opts, host, port, sessions, err);
    if (*sess) return detail::cmd_session(corpus_opts, rec_opts, session_file, session_id, in, out, err);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NotFoundError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const ConfigError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const CorruptStoreError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const IoError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const DimensionError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsage;
}

}  // namespace urdu_news::cli
