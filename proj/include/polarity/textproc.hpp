// textproc.hpp
//
// Tokenization, negation tagging, vocabularies and sparse feature vectors.

#ifndef POLARITY_TEXTPROC_HPP
#define POLARITY_TEXTPROC_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polarity/types.hpp"

namespace polarity {

struct TokenizeOptions {
  /// Emit `, ; : . ! ?` as one-character tokens so that negation scope can
  /// stop at clause punctuation. They are removed by drop_punctuation().
  bool keep_punctuation = false;
};

/// Lowercases and splits on every non-alphanumeric byte except apostrophes
/// between two word characters. Bytes >= 0x80 count as word characters so
/// UTF-8 words stay whole. `xxxn't` becomes `xxx` + `n't`.
TokenSeq tokenize(std::string_view text, const TokenizeOptions& options = {});

bool is_punctuation_token(const Token& token);
bool is_negation_word(std::string_view surface);
TokenSeq drop_punctuation(TokenSeq tokens);

/// Marks up to `window` tokens after each negation word as negated. The
/// scope ends early at another negation word or a punctuation token. The
/// negation word itself is never marked. Throws ConfigError unless
/// 1 <= window <= 3.
TokenSeq tag_negation(TokenSeq tokens, int window);

void validate_negation_window(int window);

/// Tokenization pipeline for one piece of text: tokenize with punctuation,
/// optionally tag negation (window > 0), then drop punctuation.
TokenSeq analyze_text(std::string_view text, std::optional<int> negation_window);

/// Fills Sentence::tokens for every sentence of `doc`.
void analyze_document(ReviewDocument& doc, std::optional<int> negation_window);

enum class FeatureScheme { Unigram, Bigram, BagOfWords };

std::string_view to_string(FeatureScheme scheme);
FeatureScheme parse_feature_scheme(std::string_view s);

/// Feature forms of one sentence under `scheme`. Bigrams are joined with
/// '_' and never cross sentence boundaries.
std::vector<std::string> feature_forms(const TokenSeq& sentence, FeatureScheme scheme);

/// Frozen bijection between feature terms and [0, size). Indices follow
/// lexicographic term order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(FeatureScheme scheme, std::vector<std::string> terms);

  FeatureScheme scheme() const { return scheme_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  std::optional<std::uint32_t> index_of(std::string_view term) const;
  const std::string& term(std::uint32_t index) const { return terms_.at(index); }
  const std::vector<std::string>& terms() const { return terms_; }

  /// `vocab v1 <scheme> <size>` then one `term<TAB>index` line per entry.
  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.scheme_ == b.scheme_ && a.terms_ == b.terms_;
  }

 private:
  FeatureScheme scheme_ = FeatureScheme::Unigram;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// A document is an ordered list of sentences.
using DocumentTokens = std::vector<TokenSeq>;

/// Terms occurring at least `min_count` times over the whole collection.
Vocabulary fit_vocabulary(std::span<const DocumentTokens> documents, FeatureScheme scheme,
                          int min_count);
/// Convenience overload treating each token list as a one-sentence document.
Vocabulary fit_vocabulary(std::span<const TokenSeq> documents, FeatureScheme scheme,
                          int min_count);

/// Sorted (index, value) pairs with strictly increasing indices and
/// positive values.
class SparseFeatureVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseFeatureVector() = default;
  /// Entries in any order; duplicates are summed, non-positive values rejected.
  static SparseFeatureVector from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double sum() const;
  double squared_norm() const;
  double dot(const SparseFeatureVector& other) const;
  double dot(const Eigen::Ref<const Eigen::VectorXd>& dense) const;

  friend bool operator==(const SparseFeatureVector&, const SparseFeatureVector&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Unknown terms are dropped. Throws ConfigError when the vocabulary was
/// fitted under another scheme.
SparseFeatureVector vectorize(std::span<const TokenSeq> sentences, FeatureScheme scheme,
                              const Vocabulary& vocab);
SparseFeatureVector vectorize(const TokenSeq& tokens, FeatureScheme scheme,
                              const Vocabulary& vocab);

DocumentTokens document_tokens(const ReviewDocument& doc);

}  // namespace polarity

#endif  // POLARITY_TEXTPROC_HPP
