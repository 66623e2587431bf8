#include "polarity/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace polarity {
namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

bool is_clause_punct(char c) {
  return c == ',' || c == ';' || c == ':' || c == '.' || c == '!' || c == '?';
}

constexpr std::array<std::string_view, 8> kNegationWords = {
    "not", "n't", "no", "never", "cannot", "neither", "nor", "without"};

void push_word(TokenSeq& out, std::string word) {
  if (word.size() > 3 && word.compare(word.size() - 3, 3, "n't") == 0) {
    out.push_back(Token{word.substr(0, word.size() - 3), false});
    out.push_back(Token{"n't", false});
  } else {
    out.push_back(Token{std::move(word), false});
  }
}

}  // namespace

TokenSeq tokenize(std::string_view input, const TokenizeOptions& options) {
  // Typographic apostrophe (U+2019) behaves like '.
  std::string text;
  text.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input.substr(i, 3) == "\xE2\x80\x99") {
      text += '\'';
      i += 2;
    } else {
      text += input[i];
    }
  }

  TokenSeq out;
  std::string word;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (is_word_byte(c)) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      continue;
    }
    if (c == '\'' && !word.empty() && i + 1 < n && is_word_byte(text[i + 1])) {
      word += c;
      continue;
    }
    if (!word.empty()) push_word(out, std::exchange(word, {}));
    if (options.keep_punctuation && is_clause_punct(c)) out.push_back(Token{std::string(1, c), false});
  }
  if (!word.empty()) push_word(out, std::move(word));
  return out;
}

bool is_punctuation_token(const Token& token) {
  return token.surface.size() == 1 && is_clause_punct(token.surface[0]);
}

bool is_negation_word(std::string_view surface) {
  return std::find(kNegationWords.begin(), kNegationWords.end(), surface) != kNegationWords.end();
}

TokenSeq drop_punctuation(TokenSeq tokens) {
  std::erase_if(tokens, [](const Token& t) { return is_punctuation_token(t); });
  return tokens;
}

void validate_negation_window(int window) {
  if (window < 1 || window > 3)
    throw ConfigError("negation window must be in [1, 3], got " + std::to_string(window));
}

TokenSeq tag_negation(TokenSeq tokens, int window) {
  validate_negation_window(window);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_negation_word(tokens[i].surface)) continue;
    for (std::size_t j = i + 1; j < tokens.size() && j <= i + static_cast<std::size_t>(window); ++j) {
      if (is_negation_word(tokens[j].surface) || is_punctuation_token(tokens[j])) break;
      tokens[j].negated = true;
    }
  }
  return tokens;
}

TokenSeq analyze_text(std::string_view text, std::optional<int> negation_window) {
  TokenSeq tokens = tokenize(text, TokenizeOptions{.keep_punctuation = true});
  if (negation_window) tokens = tag_negation(std::move(tokens), *negation_window);
  return drop_punctuation(std::move(tokens));
}

void analyze_document(ReviewDocument& doc, std::optional<int> negation_window) {
  for (auto& sentence : doc.sentences) sentence.tokens = analyze_text(sentence.text, negation_window);
}

std::string_view to_string(FeatureScheme scheme) {
  switch (scheme) {
    case FeatureScheme::Unigram: return "unigram";
    case FeatureScheme::Bigram: return "bigram";
    case FeatureScheme::BagOfWords: return "bows";
  }
  return "unigram";
}

FeatureScheme parse_feature_scheme(std::string_view s) {
  if (s == "unigram") return FeatureScheme::Unigram;
  if (s == "bigram") return FeatureScheme::Bigram;
  if (s == "bows" || s == "bow" || s == "bag-of-words") return FeatureScheme::BagOfWords;
  throw ConfigError("unknown feature scheme '" + std::string(s) + "' (unigram|bigram|bows)");
}

std::vector<std::string> feature_forms(const TokenSeq& sentence, FeatureScheme scheme) {
  std::vector<std::string> forms;
  if (scheme == FeatureScheme::Bigram) {
    if (sentence.size() < 2) return forms;
    forms.reserve(sentence.size() - 1);
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i)
      forms.push_back(sentence[i].feature_form() + "_" + sentence[i + 1].feature_form());
  } else {
    forms.reserve(sentence.size());
    for (const auto& t : sentence) forms.push_back(t.feature_form());
  }
  return forms;
}

Vocabulary::Vocabulary(FeatureScheme scheme, std::vector<std::string> terms)
    : scheme_(scheme), terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write(std::ostream& out) const {
  out << "vocab v1 " << to_string(scheme_) << ' ' << terms_.size() << '\n';
  for (std::size_t i = 0; i < terms_.size(); ++i) out << terms_[i] << '\t' << i << '\n';
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("vocabulary: missing header");
  std::istringstream header(line);
  std::string magic, version, scheme;
  std::size_t size = 0;
  if (!(header >> magic >> version >> scheme >> size) || magic != "vocab" || version != "v1")
    throw IoError("vocabulary: bad header '" + line + "'");
  std::vector<std::string> terms;
  terms.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!std::getline(in, line)) throw IoError("vocabulary: truncated at entry " + std::to_string(i));
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) throw IoError("vocabulary: bad entry '" + line + "'");
    if (std::stoull(line.substr(tab + 1)) != i) throw IoError("vocabulary: index out of order");
    terms.push_back(line.substr(0, tab));
  }
  Vocabulary vocab(parse_feature_scheme(scheme), terms);
  if (vocab.terms() != terms) throw IoError("vocabulary: terms not in sorted unique order");
  return vocab;
}

Vocabulary fit_vocabulary(std::span<const DocumentTokens> documents, FeatureScheme scheme,
                          int min_count) {
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  std::unordered_map<std::string, long long> counts;
  for (const auto& doc : documents)
    for (const auto& sentence : doc)
      for (auto& form : feature_forms(sentence, scheme)) ++counts[std::move(form)];
  std::vector<std::string> terms;
  for (auto& [term, count] : counts)
    if (count >= min_count) terms.push_back(term);
  return Vocabulary(scheme, std::move(terms));
}

Vocabulary fit_vocabulary(std::span<const TokenSeq> documents, FeatureScheme scheme,
                          int min_count) {
  std::vector<DocumentTokens> wrapped;
  wrapped.reserve(documents.size());
  for (const auto& d : documents) wrapped.push_back(DocumentTokens{d});
  return fit_vocabulary(std::span<const DocumentTokens>(wrapped), scheme, min_count);
}

SparseFeatureVector SparseFeatureVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseFeatureVector v;
  for (const auto& [index, value] : entries) {
    if (!(value > 0.0)) throw std::invalid_argument("sparse feature values must be positive");
    if (!v.entries_.empty() && v.entries_.back().first == index)
      v.entries_.back().second += value;
    else
      v.entries_.emplace_back(index, value);
  }
  return v;
}

double SparseFeatureVector::sum() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

double SparseFeatureVector::squared_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second * e.second;
  return s;
}

double SparseFeatureVector::dot(const SparseFeatureVector& other) const {
  double s = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first < b->first) ++a;
    else if (b->first < a->first) ++b;
    else s += (a++)->second * (b++)->second;
  }
  return s;
}

double SparseFeatureVector::dot(const Eigen::Ref<const Eigen::VectorXd>& dense) const {
  double s = 0.0;
  for (const auto& [index, value] : entries_)
    if (index < dense.size()) s += value * dense[index];
  return s;
}

SparseFeatureVector vectorize(std::span<const TokenSeq> sentences, FeatureScheme scheme,
                              const Vocabulary& vocab) {
  if (vocab.scheme() != scheme)
    throw ConfigError("vocabulary was fitted for '" + std::string(to_string(vocab.scheme())) +
                      "' features, not '" + std::string(to_string(scheme)) + "'");
  std::map<std::uint32_t, double> values;
  for (const auto& sentence : sentences) {
    for (const auto& form : feature_forms(sentence, scheme)) {
      const auto index = vocab.index_of(form);
      if (!index) continue;
      if (scheme == FeatureScheme::BagOfWords) values[*index] += 1.0;
      else values[*index] = 1.0;
    }
  }
  return SparseFeatureVector::from_entries({values.begin(), values.end()});
}

SparseFeatureVector vectorize(const TokenSeq& tokens, FeatureScheme scheme,
                              const Vocabulary& vocab) {
  return vectorize(std::span<const TokenSeq>(&tokens, 1), scheme, vocab);
}

DocumentTokens document_tokens(const ReviewDocument& doc) {
  DocumentTokens out;
  out.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) out.push_back(s.tokens);
  return out;
}

}  // namespace polarity
