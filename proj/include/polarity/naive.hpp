// naive.hpp
//
// Sentence-level multinomial classifier scored by joint log probability:
//
//   score(S, C) = log2 P(C) + sum_{t in S} log2 P(t | C)
//   predicted   = argmax_C score(S, C), ties to Positive
//
// with Laplace-smoothed P(t | C) = (count + alpha) / (mass + alpha * |V|).

#ifndef POLARITY_NAIVE_HPP
#define POLARITY_NAIVE_HPP

#include <array>
#include <iosfwd>
#include <span>

#include <Eigen/Core>

#include "polarity/textproc.hpp"
#include "polarity/types.hpp"

namespace polarity {

struct SentencePolarity {
  std::size_t index = 0;
  Polarity predicted = Polarity::Positive;
  double score_pos = 0.0;  // log2 joint probability
  double score_neg = 0.0;
};

/// Anything that can assign a polarity to a tokenized sentence. The
/// correction stages depend only on this.
class SentenceScorer {
 public:
  virtual ~SentenceScorer() = default;
  virtual SentencePolarity score(const TokenSeq& tokens) const = 0;
};

struct LabeledSentence {
  TokenSeq tokens;
  Polarity label = Polarity::Positive;
};

inline constexpr int class_index(Polarity p) { return p == Polarity::Positive ? 0 : 1; }

class NaiveSentenceModel final : public SentenceScorer {
 public:
  NaiveSentenceModel() = default;

  SentencePolarity score(const TokenSeq& tokens) const override;

  double alpha() const { return alpha_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  double prior(Polarity c) const;
  double sentence_count(Polarity c) const { return sentences_[class_index(c)]; }
  double mass(Polarity c) const { return mass_[class_index(c)]; }
  double count(Polarity c, std::uint32_t term) const { return counts_[class_index(c)][term]; }
  /// Smoothed P(term | c).
  double conditional(Polarity c, std::uint32_t term) const;

  /// Header `naive v1 alpha=<a> |V|=<n>`, priors, masses, per-class sparse
  /// count rows, then the inline vocabulary.
  void write(std::ostream& out) const;
  static NaiveSentenceModel read(std::istream& in);

  friend NaiveSentenceModel fit_naive(std::span<const LabeledSentence>, Vocabulary, double);

 private:
  void finalize();

  Vocabulary vocab_;
  double alpha_ = 1.0;
  std::array<double, 2> sentences_{};
  std::array<double, 2> mass_{};
  std::array<Eigen::VectorXd, 2> counts_;
  std::array<Eigen::VectorXd, 2> log_conditional_;
  std::array<double, 2> log_prior_{};
};

/// Counts in-vocabulary token occurrences per labeled class. Priors are
/// class sentence fractions. Throws ConfigError when a class has no
/// sentences, alpha <= 0, or the vocabulary is not a unigram vocabulary.
NaiveSentenceModel fit_naive(std::span<const LabeledSentence> sentences, Vocabulary vocab,
                             double alpha = 1.0);

inline SentencePolarity score_sentence(const SentenceScorer& model, const TokenSeq& tokens) {
  return model.score(tokens);
}

}  // namespace polarity

#endif  // POLARITY_NAIVE_HPP
