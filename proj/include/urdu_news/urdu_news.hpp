#pragma once

#include "urdu_news/corpus.hpp"
#include "urdu_news/embed.hpp"
#include "urdu_news/engine.hpp"
#include "urdu_news/error.hpp"
#include "urdu_news/metrics.hpp"
#include "urdu_news/recommend.hpp"
#include "urdu_news/session_store.hpp"
#include "urdu_news/textnorm.hpp"
#include "urdu_news/tfidf.hpp"
#include "urdu_news/tokenize.hpp"
#include "urdu_news/utf8.hpp"
