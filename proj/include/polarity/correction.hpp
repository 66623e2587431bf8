// correction.hpp
//
// Training-set polarity correction and sentence-level consistency
// filtering.
//
// The consistency filter partitions a document's predicted sentence
// polarities into maximal runs of equal polarity. Runs of length >= theta
// are consistent and kept; shorter runs are outliers and removed. For
// N N N P N N N P P N and theta = 2 this removes the lone P (index 3) and
// the trailing N (index 9).

#ifndef POLARITY_CORRECTION_HPP
#define POLARITY_CORRECTION_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polarity/naive.hpp"
#include "polarity/types.hpp"

namespace polarity {

/// What to do when no run reaches theta.
enum class Fallback {
  KeepAll,           // keep every sentence
  KeepMajorityRuns,  // keep every run of the polarity covering more sentences
  None,              // keep nothing; the bare run-length rule
};

std::string_view to_string(Fallback f);
Fallback parse_fallback(std::string_view s);

struct CorrectionConfig {
  int theta = 2;
  int negation_window = 3;
  bool retrain_naive_after_trainset_correction = true;
  Fallback fallback = Fallback::KeepAll;

  void validate() const;
};

using PolaritySequence = std::vector<SentencePolarity>;

struct PolarityRun {
  std::size_t start = 0;
  std::size_t length = 0;
  Polarity polarity = Polarity::Positive;

  friend bool operator==(const PolarityRun&, const PolarityRun&) = default;
};

struct ConsistencyResult {
  std::vector<std::size_t> kept;     // ascending
  std::vector<std::size_t> removed;  // ascending
  std::vector<PolarityRun> runs;
  bool fallback_applied = false;
};

std::vector<PolarityRun> polarity_runs(std::span<const Polarity> polarities);

ConsistencyResult filter_consistent(std::span<const Polarity> polarities, int theta,
                                    Fallback fallback);
ConsistencyResult filter_consistent(const PolaritySequence& seq, int theta, Fallback fallback);

struct CorrectedPools {
  std::vector<TokenSeq> positive;
  std::vector<TokenSeq> negative;
  std::size_t moved_to_positive = 0;
  std::size_t moved_to_negative = 0;

  /// The pools as labeled sentences, positive pool first.
  std::vector<LabeledSentence> labeled() const;
};

/// Re-scores every training sentence with `model`. A sentence whose
/// prediction contradicts its document label moves to the pool of the
/// predicted class. Throws std::runtime_error if a pool ends up empty.
CorrectedPools correct_training_set(std::span<const LabeledSentence> train_sentences,
                                    const SentenceScorer& model);

struct CorrectedDocument {
  ReviewDocument document;        // kept sentences, re-indexed from 0
  PolaritySequence polarities;    // per original sentence
  ConsistencyResult consistency;  // indices refer to the original document
  int theta = 2;
};

/// Scores every (tokenized) sentence, filters by run length and returns the
/// kept sentences in their original order. Id, label and raw text are
/// preserved.
CorrectedDocument correct_document(const ReviewDocument& doc, const SentenceScorer& model,
                                   const CorrectionConfig& cfg);

/// One trace line: {id, theta, sentences:[{index, predicted, score_pos,
/// score_neg}], kept, removed}.
std::string correction_trace_json(const CorrectedDocument& corrected);

}  // namespace polarity

#endif  // POLARITY_CORRECTION_HPP
