#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "polarity/naive.hpp"

using namespace polarity;

namespace {

Vocabulary unigram_vocab(const std::vector<LabeledSentence>& sentences) {
  std::vector<TokenSeq> lists;
  for (const auto& s : sentences) lists.push_back(s.tokens);
  return fit_vocabulary(std::span<const TokenSeq>(lists), FeatureScheme::Unigram, 1);
}

std::vector<LabeledSentence> toy_corpus() {
  return {{make_tokens({"good"}), Polarity::Positive},
          {make_tokens({"good", "fine"}), Polarity::Positive},
          {make_tokens({"bad"}), Polarity::Negative}};
}

}  // namespace

TEST_CASE("priors are sentence fractions") {
  const std::vector<LabeledSentence> s = {{make_tokens({"a"}), Polarity::Positive},
                                          {make_tokens({"b"}), Polarity::Positive},
                                          {make_tokens({"a"}), Polarity::Positive},
                                          {make_tokens({"c"}), Polarity::Negative}};
  const auto m = fit_naive(s, unigram_vocab(s), 1.0);
  CHECK(m.prior(Polarity::Positive) == doctest::Approx(0.75));
  CHECK(m.prior(Polarity::Negative) == doctest::Approx(0.25));
}

TEST_CASE("smoothed conditional on the toy corpus") {
  const auto s = toy_corpus();
  const auto m = fit_naive(s, unigram_vocab(s), 1.0);
  REQUIRE(m.vocabulary().size() == 3);
  CHECK(m.conditional(Polarity::Positive, *m.vocabulary().index_of("good")) == doctest::Approx(0.5));
  CHECK(m.score(make_tokens({"good"})).predicted == Polarity::Positive);
  CHECK(m.score(make_tokens({"bad"})).predicted == Polarity::Negative);
}

TEST_CASE("empty sentence with equal priors ties to Positive") {
  const std::vector<LabeledSentence> s = {{make_tokens({"a"}), Polarity::Positive},
                                          {make_tokens({"b"}), Polarity::Negative}};
  const auto m = fit_naive(s, unigram_vocab(s), 1.0);
  const auto r = m.score({});
  CHECK(r.score_pos == -1.0);
  CHECK(r.score_neg == -1.0);
  CHECK(r.predicted == Polarity::Positive);
  const auto oov = m.score(make_tokens({"zzz", "yyy"}));
  CHECK(oov.score_pos == -1.0);
  CHECK(oov.predicted == Polarity::Positive);
}

TEST_CASE("prior dominance under symmetric likelihoods") {
  const std::vector<LabeledSentence> s = {{make_tokens({"a"}), Polarity::Positive},
                                          {make_tokens({"b"}), Polarity::Positive},
                                          {make_tokens({"a"}), Polarity::Negative},
                                          {make_tokens({"b"}), Polarity::Positive},
                                          {make_tokens({"b"}), Polarity::Negative},
                                          {make_tokens({"a"}), Polarity::Positive}};
  const auto m = fit_naive(s, unigram_vocab(s), 1.0);
  CHECK(m.score(make_tokens({"a", "b"})).predicted == Polarity::Positive);
}

TEST_CASE("disjoint vocabularies classify every training sentence into its own class") {
  const std::vector<LabeledSentence> s = {{make_tokens({"great", "love"}), Polarity::Positive},
                                          {make_tokens({"love"}), Polarity::Positive},
                                          {make_tokens({"awful", "hate"}), Polarity::Negative},
                                          {make_tokens({"hate"}), Polarity::Negative}};
  const auto m = fit_naive(s, unigram_vocab(s), 1.0);
  for (const auto& x : s) CHECK(m.score(x.tokens).predicted == x.label);
}

TEST_CASE("fit preconditions") {
  const std::vector<LabeledSentence> one_class = {{make_tokens({"a"}), Polarity::Positive}};
  CHECK_THROWS_AS(fit_naive(one_class, unigram_vocab(one_class), 1.0), ConfigError);
  const auto s = toy_corpus();
  CHECK_THROWS_AS(fit_naive(s, unigram_vocab(s), 0.0), ConfigError);
  CHECK_THROWS_AS(fit_naive(s, Vocabulary(FeatureScheme::Bigram, {"a_b"}), 1.0), ConfigError);
}

TEST_CASE("scores match a term-by-term oracle on random corpora") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int vocab_size = 1 + static_cast<int>(rng() % 20);
    const int n = 2 + static_cast<int>(rng() % 9);
    const double alpha = 0.25 + static_cast<double>(rng() % 8) * 0.25;
    std::vector<LabeledSentence> sentences;
    std::vector<std::pair<std::vector<std::string>, bool>> raw;
    for (int i = 0; i < n; ++i) {
      const bool pos = i == 0 ? true : i == 1 ? false : (rng() % 2 == 0);
      std::vector<std::string> words;
      const int len = static_cast<int>(rng() % 7);
      for (int k = 0; k < len; ++k) words.push_back("w" + std::to_string(rng() % vocab_size));
      TokenSeq tokens;
      for (const auto& w : words) tokens.push_back(Token{w, false});
      sentences.push_back({tokens, pos ? Polarity::Positive : Polarity::Negative});
      raw.emplace_back(words, pos);
    }
    const Vocabulary vocab = unigram_vocab(sentences);
    const std::set<std::string> vocab_set(vocab.terms().begin(), vocab.terms().end());
    const auto model = fit_naive(sentences, vocab, alpha);
    for (int q = 0; q < 5; ++q) {
      std::vector<std::string> words;
      const int len = static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k) words.push_back("w" + std::to_string(rng() % (vocab_size + 3)));
      TokenSeq tokens;
      for (const auto& w : words) tokens.push_back(Token{w, false});
      const auto expected = oracle::joint_log_probability(raw, vocab_set, alpha, words);
      const auto got = model.score(tokens);
      REQUIRE(std::abs(got.score_pos - expected.pos) <= 1e-9);
      REQUIRE(std::abs(got.score_neg - expected.neg) <= 1e-9);
      REQUIRE(got.predicted == (expected.pos >= expected.neg - 1e-12 ? Polarity::Positive : Polarity::Negative));
    }
  }
}

// Doubling every count leaves (k + a) / (m + a|V|) unchanged only when the
// smoothing constant doubles too.
TEST_CASE("duplicating the training set with doubled smoothing leaves predictions unchanged") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LabeledSentence> s;
    for (int i = 0; i < 8; ++i) {
      TokenSeq t;
      for (int k = 0; k < 3; ++k) t.push_back(Token{"t" + std::to_string(rng() % 6), false});
      s.push_back({t, i % 2 ? Polarity::Positive : Polarity::Negative});
    }
    std::vector<LabeledSentence> doubled = s;
    doubled.insert(doubled.end(), s.begin(), s.end());
    const auto a = fit_naive(s, unigram_vocab(s), 1.0);
    const auto b = fit_naive(doubled, unigram_vocab(s), 2.0);
    for (const auto& x : s) {
      REQUIRE(a.score(x.tokens).predicted == b.score(x.tokens).predicted);
      REQUIRE(a.score(x.tokens).score_pos == doctest::Approx(b.score(x.tokens).score_pos));
    }
  }
}

TEST_CASE("appending a positive-leaning token never flips Positive to Negative") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabeledSentence> s;
    for (int i = 0; i < 10; ++i) {
      TokenSeq t;
      for (int k = 0; k < 4; ++k) t.push_back(Token{"t" + std::to_string(rng() % 8), false});
      s.push_back({t, i % 3 ? Polarity::Positive : Polarity::Negative});
    }
    const auto m = fit_naive(s, unigram_vocab(s), 1.0);
    TokenSeq query = s[rng() % s.size()].tokens;
    if (m.score(query).predicted != Polarity::Positive) continue;
    for (std::uint32_t t = 0; t < m.vocabulary().size(); ++t) {
      if (m.conditional(Polarity::Positive, t) <= m.conditional(Polarity::Negative, t)) continue;
      TokenSeq longer = query;
      longer.push_back(Token{m.vocabulary().term(t), false});
      REQUIRE(m.score(longer).predicted == Polarity::Positive);
    }
  }
}

TEST_CASE("naive model round trip preserves scores") {
  const auto s = toy_corpus();
  const auto m = fit_naive(s, unigram_vocab(s), 0.5);
  std::stringstream ss;
  m.write(ss);
  const auto back = NaiveSentenceModel::read(ss);
  CHECK(back.alpha() == 0.5);
  CHECK(back.vocabulary() == m.vocabulary());
  for (const auto& q : {make_tokens({"good"}), make_tokens({"bad", "fine"}), TokenSeq{}}) {
    CHECK(back.score(q).score_pos == m.score(q).score_pos);
    CHECK(back.score(q).score_neg == m.score(q).score_neg);
  }
  std::stringstream bad("naive v2 alpha=1 |V|=0\n");
  CHECK_THROWS(NaiveSentenceModel::read(bad));
}

TEST_CASE("mirror-image terms tie to Positive regardless of summation order") {
  const std::vector<LabeledSentence> s = {{make_tokens({"a", "a", "c"}), Polarity::Positive},
                                          {make_tokens({"b", "b", "c"}), Polarity::Negative},
                                          {make_tokens({"a", "d"}), Polarity::Positive},
                                          {make_tokens({"b", "e"}), Polarity::Negative}};
  const auto m = fit_naive(s, unigram_vocab(s), 0.7);
  for (const auto& q : {make_tokens({"a", "b"}), make_tokens({"b", "a", "c"}), make_tokens({"c", "a", "b", "a", "b"}),
                        make_tokens({"d", "e"}), make_tokens({"e", "c", "d"})})
    CHECK(m.score(q).predicted == Polarity::Positive);
}
