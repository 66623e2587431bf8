// eval.hpp
//
// Confusion counts, precision / recall / F1 and report emission.

#ifndef POLARITY_EVAL_HPP
#define POLARITY_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polarity/types.hpp"

namespace polarity {

/// Positive is the "positive" class: tp counts gold Positive predicted
/// Positive, fp gold Negative predicted Positive, and so on.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  void add(Polarity gold, Polarity predicted);
  /// The same counts with Negative treated as the positive class.
  ConfusionCounts swapped() const { return {tn, fn, tp, fp}; }
};

ConfusionCounts confusion(std::span<const Polarity> gold, std::span<const Polarity> predicted);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// precision = tp/(tp+fp), recall = tp/(tp+fn),
/// F1 = 2pr/(p+r), computed in the equivalent form 2tp/(2tp+fp+fn) so
/// the result is the correctly rounded value of the exact ratio. Any zero
/// denominator yields 0.
Metrics compute_metrics(const ConfusionCounts& counts);

enum class CellMode { Corrected, Standard, Baseline };

std::string_view to_string(CellMode mode);

struct EvalReport {
  std::string model;  // e.g. SVM-Unigram-cor
  std::string kind;   // svm | nb
  std::string domain;
  std::string scheme;
  CellMode mode = CellMode::Standard;
  bool ok = true;
  std::string error;
  ConfusionCounts counts;
  Metrics positive;
  Metrics negative;
  Metrics macro;
  std::size_t n_test = 0;
  std::string config;

  bool corrected() const { return mode == CellMode::Corrected; }
};

/// Fills per-class and macro-averaged metrics from `counts`.
EvalReport make_report(std::string model, const ConfusionCounts& counts);
Metrics macro_average(const Metrics& a, const Metrics& b);

enum class ReportFormat { Csv, Json, Text };

ReportFormat parse_report_format(std::string_view s);

/// CSV columns: model,domain,scheme,corrected,precision,recall,f1,n_test.
void write_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_json(std::ostream& out, std::span<const EvalReport> reports);
/// Model / Pr. / Rc. / F-1 blocks, one per (domain, algorithm).
void write_text_table(std::ostream& out, std::span<const EvalReport> reports);
void emit_report(std::ostream& out, std::span<const EvalReport> reports, ReportFormat format);
/// Throws IoError when `path` cannot be written.
void emit_report(const std::filesystem::path& path, std::span<const EvalReport> reports,
                 ReportFormat format);

/// The metric payload of a report (everything except its identity
/// columns), serialized for byte comparison between pipelines.
std::string metric_payload(const EvalReport& report);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Percentile bootstrap over documents for macro F1.
ConfidenceInterval bootstrap_macro_f1(std::span<const Polarity> gold,
                                      std::span<const Polarity> predicted,
                                      std::size_t replicates = 1000, double level = 0.95,
                                      std::uint64_t seed = 1);

}  // namespace polarity

#endif  // POLARITY_EVAL_HPP
