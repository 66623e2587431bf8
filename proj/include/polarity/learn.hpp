// learn.hpp
//
// Review-level classifiers over sparse feature vectors: multinomial naive
// Bayes and a soft-margin SVM.

#ifndef POLARITY_LEARN_HPP
#define POLARITY_LEARN_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polarity/correction.hpp"
#include "polarity/naive.hpp"
#include "polarity/svm.hpp"
#include "polarity/textproc.hpp"
#include "polarity/types.hpp"

namespace polarity {

enum class ModelKind { NaiveBayes, SVM };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view s);
/// "NB" / "SVM", as used in report model names.
std::string_view display_name(ModelKind kind);

/// Document: one example per review over all its sentences.
/// Sentence: one example per sentence carrying its review's label; a review
/// is scored by summing its sentences' decision values.
enum class Granularity { Document, Sentence };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view s);

struct Hyperparameters {
  double alpha = 1.0;  // NB Laplace smoothing
  double C = 1.0;
  double tolerance = 1e-3;
  Kernel kernel;
  int min_count = 2;
  Granularity granularity = Granularity::Document;
  std::size_t cache_megabytes = 256;
};

/// Named SVM settings: "linear" plus one per product domain, taken from
/// the hyperparameter search reported for the original experiments.
struct KernelPreset {
  std::string name;
  double C = 1.0;
  Kernel kernel;
};

const std::vector<KernelPreset>& kernel_presets();
const KernelPreset& kernel_preset(std::string_view name);

struct ModelMetadata {
  std::string name;  // e.g. SVM-Unigram-cor
  std::string domain = "other";
  bool corrected = false;
  std::optional<int> negation_window;
  CorrectionConfig correction;
};

struct TrainedModel {
  ModelKind kind = ModelKind::NaiveBayes;
  FeatureScheme scheme = FeatureScheme::Unigram;
  Granularity granularity = Granularity::Document;
  Vocabulary vocab;
  ModelMetadata meta;

  // Naive Bayes: log2 P(term | c) per class and log2 P(c).
  double nb_alpha = 1.0;
  std::array<Eigen::VectorXd, 2> nb_log_conditional;
  std::array<double, 2> nb_log_prior{};

  // SVM: f(x) = sum_k coef_k K(sv_k, x) + bias, collapsed to w.x + bias
  // for the linear kernel.
  Kernel kernel;
  double C = 1.0;
  double bias = 0.0;
  Eigen::VectorXd weights;
  std::vector<SparseFeatureVector> support_vectors;
  Eigen::VectorXd dual_coef;
  double kkt_gap = 0.0;

  /// Sentence model used to correct documents before prediction.
  std::optional<NaiveSentenceModel> naive;
};

struct Prediction {
  Polarity label = Polarity::Positive;
  double score = 0.0;  // NB: log2 score difference (pos - neg); SVM: decision value
};

/// Fits the vocabulary on `train_docs` only and trains `kind`. Documents
/// must be tokenized. Throws ConfigError on a single-class corpus or
/// non-positive alpha / C.
TrainedModel train_document_model(std::span<const ReviewDocument> train_docs,
                                  FeatureScheme scheme, ModelKind kind,
                                  const Hyperparameters& hyper);

/// Trains directly on vectors already built against `vocab`.
TrainedModel train_on_vectors(std::span<const SparseFeatureVector> examples,
                              std::span<const Polarity> labels, Vocabulary vocab,
                              ModelKind kind, const Hyperparameters& hyper);

double decision_value(const TrainedModel& model, const SparseFeatureVector& x);
Prediction predict(const TrainedModel& model, const SparseFeatureVector& x);
Prediction predict(const TrainedModel& model, const ReviewDocument& doc);

/// Header `model v1 <kind> <scheme> <domain> corrected=<bool>`, metadata,
/// inline vocabulary, parameter block, optional bundled naive model.
void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in);

}  // namespace polarity

#endif  // POLARITY_LEARN_HPP
