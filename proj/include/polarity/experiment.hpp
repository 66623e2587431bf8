// experiment.hpp
//
// Train/test experiment over a grid of (algorithm, feature scheme, mode)
// cells for one domain.
//
// Corrected cells: naive sentence model on training sentences, training-set
// correction, naive retrain, consistency filtering of training and test
// reviews, then the review-level model on the filtered reviews.
// Standard cells: the same review-level model on unfiltered reviews.
// Baseline cells: a sentence-granularity unigram model on unfiltered
// reviews, with a review scored by the sum of its sentence scores.

#ifndef POLARITY_EXPERIMENT_HPP
#define POLARITY_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/correction.hpp"
#include "polarity/eval.hpp"
#include "polarity/learn.hpp"

namespace polarity {

struct GridCell {
  ModelKind kind = ModelKind::NaiveBayes;
  FeatureScheme scheme = FeatureScheme::Unigram;
  CellMode mode = CellMode::Standard;

  /// SVM-Bigram-cor, NB-BOWS, SVM-Baseline, ...
  std::string name() const;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Per algorithm: every scheme corrected, every scheme standard, then the
/// baseline. With all three schemes this is the familiar seven-row block.
std::vector<GridCell> default_grid(std::span<const ModelKind> kinds,
                                   std::span<const FeatureScheme> schemes);
std::vector<GridCell> default_grid();

struct ExperimentConfig {
  CorrectionConfig correction;
  bool trainset_correction = true;
  bool sentence_correction = true;
  /// Negation tagging for standard and baseline cells. Corrected cells
  /// always tag with correction.negation_window.
  bool negation_in_uncorrected = false;
  double naive_alpha = 1.0;
  int naive_min_count = 1;
  Hyperparameters hyper;
  double ratio = 0.8;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  bool keep_models = false;
  bool keep_traces = false;

  void validate() const;
  std::string snapshot() const;
};

struct DocumentPrediction {
  std::string id;
  Polarity gold = Polarity::Positive;
  Polarity predicted = Polarity::Positive;
  double score = 0.0;
};

struct CellResult {
  GridCell cell;
  EvalReport report;
  std::vector<DocumentPrediction> predictions;
  std::optional<TrainedModel> model;
};

struct CorrectionSummary {
  std::size_t train_sentences = 0;
  std::size_t moved_to_positive = 0;
  std::size_t moved_to_negative = 0;
  std::size_t train_removed = 0;
  std::size_t test_removed = 0;
};

struct ExperimentResult {
  std::string domain;
  std::vector<CellResult> cells;
  std::optional<CorrectionSummary> correction;
  std::vector<std::string> train_traces;  // JSONL lines when keep_traces
  std::vector<std::string> test_traces;

  std::vector<EvalReport> reports() const;
};

/// `corpus` holds segmented reviews of one domain with both labels. Cells
/// that fail are reported with ok = false; the others still run.
ExperimentResult run_experiment(std::span<const ReviewDocument> corpus,
                                std::span<const GridCell> grid, const ExperimentConfig& cfg);

/// JSONL line {id, gold, predicted, score}.
std::string prediction_json(const DocumentPrediction& p);

}  // namespace polarity

#endif  // POLARITY_EXPERIMENT_HPP
