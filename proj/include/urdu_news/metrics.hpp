#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "urdu_news/corpus.hpp"
#include "urdu_news/error.hpp"

namespace urdu_news {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// A metric with a zero denominator is nullopt, never 0.
using Metric = std::optional<double>;

struct MetricsReport {
  Metric sensitivity;  // TPR
  Metric specificity;  // SPC
  Metric precision;    // PPV
  Metric npv;
  Metric fpr;
  Metric fdr;
  Metric fnr;
  Metric accuracy;
  Metric f1;
  Metric mcc;

  struct Row {
    std::string_view measure;
    Metric value;
    std::string_view formula;
  };

  // Rows in the canonical table order.
  std::vector<Row> rows() const {
    return {
        {"Sensitivity", sensitivity, "TPR = TP / (TP + FN)"},
        {"Specificity", specificity, "SPC = TN / (FP + TN)"},
        {"Precision", precision, "PPV = TP / (TP + FP)"},
        {"Negative Predictive Value", npv, "NPV = TN / (TN + FN)"},
        {"False Positive Rate", fpr, "FPR = FP / (FP + TN)"},
        {"False Discovery Rate", fdr, "FDR = FP / (FP + TP)"},
        {"False Negative Rate", fnr, "FNR = FN / (FN + TP)"},
        {"Accuracy", accuracy, "ACC = (TP + TN) / (P + N)"},
        {"F1 Score", f1, "F1 = 2TP / (2TP + FP + FN)"},
        {"Matthews Correlation Coefficient", mcc,
         "MCC = (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN))"},
    };
  }
};

// predicted and relevant must both be subsets of universe.
inline ConfusionMatrix confusion_from_labels(const std::set<ArticleId>& predicted,
                                             const std::set<ArticleId>& relevant,
                                             const std::set<ArticleId>& universe) {
  for (ArticleId id : predicted) {
    if (!universe.count(id)) throw ConfigError("predicted id " + std::to_string(id) + " is outside the universe");
  }
  for (ArticleId id : relevant) {
    if (!universe.count(id)) throw ConfigError("relevant id " + std::to_string(id) + " is outside the universe");
  }
  ConfusionMatrix cm;
  for (ArticleId id : universe) {
    const bool p = predicted.count(id) != 0;
    const bool r = relevant.count(id) != 0;
    if (p && r) ++cm.tp;
    else if (p) ++cm.fp;
    else if (r) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

inline MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ConfigError("confusion matrix is all zero");
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn);
  const auto tn = static_cast<double>(cm.tn);
  auto ratio = [](double num, double den) -> Metric {
    if (den == 0.0) return std::nullopt;
    return num / den;
  };
  MetricsReport r;
  r.sensitivity = ratio(tp, tp + fn);
  r.specificity = ratio(tn, fp + tn);
  r.precision = ratio(tp, tp + fp);
  r.npv = ratio(tn, tn + fn);
  r.fpr = ratio(fp, fp + tn);
  r.fdr = ratio(fp, fp + tp);
  r.fnr = ratio(fn, fn + tp);
  r.accuracy = ratio(tp + tn, tp + fp + fn + tn);
  r.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  r.mcc = ratio(tp * tn - fp * fn, std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)));
  return r;
}

inline std::string format_metric(const Metric& m, int precision = 4) {
  if (!m) return "undefined";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << *m;
  return os.str();
}

// Two-column (measure, value) table with the defining formula alongside.
inline void write_metrics_table(const MetricsReport& report, std::ostream& out) {
  std::size_t width = std::string_view("Measure").size();
  for (const auto& row : report.rows()) width = std::max(width, row.measure.size());
  auto pad = [&](std::string_view s) { return std::string(s) + std::string(width - s.size() + 2, ' '); };
  out << pad("Measure") << "Value      Derivation\n";
  for (const auto& row : report.rows()) {
    auto value = format_metric(row.value);
    out << pad(row.measure) << value << std::string(value.size() < 11 ? 11 - value.size() : 1, ' ')
        << row.formula << '\n';
  }
}

inline nlohmann::json metrics_to_json(const ConfusionMatrix& cm, const MetricsReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows()) {
    rows.push_back({{"measure", row.measure},
                    {"value", row.value ? nlohmann::json(*row.value) : nlohmann::json(nullptr)}});
  }
  return {{"confusion", {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}}}, {"metrics", rows}};
}

}  // namespace urdu_news
