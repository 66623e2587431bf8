#include <doctest.h>

#include <random>
#include <sstream>

#include "polarity/textproc.hpp"

using namespace polarity;

namespace {

std::vector<std::string> surfaces(const TokenSeq& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.feature_form());
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("tokenize") {
  CHECK(surfaces(tokenize("Don't buy")) == Strings{"do", "n't", "buy"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \t ").empty());
  CHECK(surfaces(tokenize("GREAT great")) == Strings{"great", "great"});
  CHECK(surfaces(tokenize("it\xE2\x80\x99s can't")) == Strings{"it's", "ca", "n't"});
  CHECK(surfaces(tokenize("Wait, what?!", {.keep_punctuation = true})) ==
        Strings{"wait", ",", "what", "?", "!"});
  CHECK(surfaces(tokenize("caf\xc3\xa9 ok")) == Strings{"caf\xc3\xa9", "ok"});
}

TEST_CASE("negation tagging examples") {
  CHECK(surfaces(tag_negation(make_tokens({"is", "not", "good"}), 3)) == Strings{"is", "not", "NOT_good"});
  CHECK(surfaces(tag_negation(make_tokens({"good", "movie"}), 3)) == Strings{"good", "movie"});
  CHECK(surfaces(tag_negation(make_tokens({"not", "very", "good", "at", "all"}), 2)) ==
        Strings{"not", "NOT_very", "NOT_good", "at", "all"});
}

TEST_CASE("negation scope stops at punctuation and at another negation word") {
  CHECK(surfaces(analyze_text("Not good, but fine", 3)) == Strings{"not", "NOT_good", "but", "fine"});
  CHECK(surfaces(tag_negation(make_tokens({"never", "no", "more"}), 3)) == Strings{"never", "no", "NOT_more"});
  CHECK(surfaces(analyze_text("I don't like it at all", 3)) ==
        Strings{"i", "do", "n't", "NOT_like", "NOT_it", "NOT_at", "all"});
  CHECK(surfaces(analyze_text("I don't like it", std::nullopt)) == Strings{"i", "do", "n't", "like", "it"});
}

TEST_CASE("negation window outside 1..3 is a configuration error") {
  CHECK_THROWS_AS(tag_negation(make_tokens({"not", "x"}), 0), ConfigError);
  CHECK_THROWS_AS(tag_negation(make_tokens({"not", "x"}), 4), ConfigError);
}

TEST_CASE("tag_negation is idempotent") {
  std::mt19937_64 rng(5);
  const char* words[] = {"not", "good", "never", "bad", ",", "no", "fine", "."};
  for (int trial = 0; trial < 500; ++trial) {
    TokenSeq seq;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) seq.push_back(Token{words[rng() % 8], false});
    for (int w = 1; w <= 3; ++w) {
      const TokenSeq once = tag_negation(seq, w);
      REQUIRE(tag_negation(once, w) == once);
    }
  }
}

TEST_CASE("vocabulary fitting examples") {
  const std::vector<TokenSeq> ab_a = {make_tokens({"a", "b"}), make_tokens({"a"})};
  const Vocabulary v = fit_vocabulary(std::span<const TokenSeq>(ab_a), FeatureScheme::Unigram, 1);
  CHECK(v.terms() == Strings{"a", "b"});
  CHECK(v.index_of("a") == 0u);
  CHECK(v.index_of("b") == 1u);
  CHECK_FALSE(v.index_of("c").has_value());

  const std::vector<TokenSeq> ab = {make_tokens({"a", "b"})};
  CHECK(fit_vocabulary(std::span<const TokenSeq>(ab), FeatureScheme::Bigram, 1).terms() == Strings{"a_b"});

  const std::vector<TokenSeq> a_b = {make_tokens({"a"}), make_tokens({"b"})};
  CHECK(fit_vocabulary(std::span<const TokenSeq>(a_b), FeatureScheme::Unigram, 2).empty());
  CHECK(fit_vocabulary(std::span<const TokenSeq>(), FeatureScheme::Unigram, 1).empty());
}

TEST_CASE("bigrams do not cross sentence boundaries") {
  const std::vector<DocumentTokens> docs = {{make_tokens({"a", "b"}), make_tokens({"c", "d"})}};
  CHECK(fit_vocabulary(std::span<const DocumentTokens>(docs), FeatureScheme::Bigram, 1).terms() ==
        Strings{"a_b", "c_d"});
}

TEST_CASE("vectorize examples") {
  const Vocabulary bow(FeatureScheme::BagOfWords, {"a", "b"});
  const Vocabulary uni(FeatureScheme::Unigram, {"a", "b"});
  const auto aab = make_tokens({"a", "a", "b"});
  using E = std::vector<SparseFeatureVector::Entry>;
  CHECK(vectorize(aab, FeatureScheme::BagOfWords, bow).entries() == E{{0, 2.0}, {1, 1.0}});
  CHECK(vectorize(aab, FeatureScheme::Unigram, uni).entries() == E{{0, 1.0}, {1, 1.0}});
  CHECK(vectorize(make_tokens({"a", "c"}), FeatureScheme::Unigram, uni).entries() == E{{0, 1.0}});
  CHECK(vectorize(make_tokens({"a", "c"}), FeatureScheme::BagOfWords, bow).entries() == E{{0, 1.0}});
  const Vocabulary bi(FeatureScheme::Bigram, {"a_b"});
  CHECK(vectorize(make_tokens({"a", "b", "a", "b"}), FeatureScheme::Bigram, bi).entries() == E{{0, 1.0}});
  CHECK(vectorize(make_tokens({"x", "y"}), FeatureScheme::Unigram, uni).empty());
  CHECK_THROWS_AS(vectorize(aab, FeatureScheme::Bigram, uni), ConfigError);
}

TEST_CASE("negated tokens contribute only their NOT_ form") {
  const Vocabulary v(FeatureScheme::Unigram, {"NOT_good", "good"});
  const auto tagged = analyze_text("not good", 3);
  using E = std::vector<SparseFeatureVector::Entry>;
  CHECK(vectorize(tagged, FeatureScheme::Unigram, v).entries() == E{{0, 1.0}});
}

TEST_CASE("bag-of-words sum equals in-vocabulary occurrences and order does not matter") {
  std::mt19937_64 rng(3);
  const Strings pool = {"a", "b", "c", "d", "e", "f"};
  const Vocabulary bow(FeatureScheme::BagOfWords, {"a", "c", "e"});
  const Vocabulary uni(FeatureScheme::Unigram, {"a", "c", "e"});
  for (int trial = 0; trial < 500; ++trial) {
    TokenSeq seq;
    const int n = static_cast<int>(rng() % 15);
    int in_vocab = 0;
    for (int i = 0; i < n; ++i) {
      const std::string& w = pool[rng() % pool.size()];
      in_vocab += (w == "a" || w == "c" || w == "e");
      seq.push_back(Token{w, false});
    }
    const auto v = vectorize(seq, FeatureScheme::BagOfWords, bow);
    REQUIRE(v.sum() == doctest::Approx(in_vocab));
    TokenSeq shuffled = seq;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(vectorize(shuffled, FeatureScheme::BagOfWords, bow) == v);
    REQUIRE(vectorize(shuffled, FeatureScheme::Unigram, uni) == vectorize(seq, FeatureScheme::Unigram, uni));
  }
}

TEST_CASE("sparse vector arithmetic") {
  const auto x = SparseFeatureVector::from_entries({{3, 1.0}, {0, 2.0}, {3, 1.0}});
  using E = std::vector<SparseFeatureVector::Entry>;
  CHECK(x.entries() == E{{0, 2.0}, {3, 2.0}});
  const auto y = SparseFeatureVector::from_entries({{1, 5.0}, {3, 0.5}});
  CHECK(x.dot(y) == doctest::Approx(1.0));
  CHECK(x.squared_norm() == doctest::Approx(8.0));
  Eigen::VectorXd w(4);
  w << 1, 2, 3, 4;
  CHECK(x.dot(w) == doctest::Approx(10.0));
  CHECK_THROWS(SparseFeatureVector::from_entries({{0, -1.0}}));
}

TEST_CASE("vocabulary round trip") {
  const Vocabulary v(FeatureScheme::Bigram, {"a_b", "NOT_x_y", "z_\xc3\xa9"});
  std::stringstream ss;
  v.write(ss);
  CHECK(Vocabulary::read(ss) == v);
  std::stringstream bad("vocab v1 unigram 2\na\t0\n");
  CHECK_THROWS(Vocabulary::read(bad));
}

TEST_CASE("scheme names") {
  CHECK(parse_feature_scheme("bows") == FeatureScheme::BagOfWords);
  CHECK(to_string(FeatureScheme::Bigram) == "bigram");
  CHECK_THROWS_AS(parse_feature_scheme("trigram"), ConfigError);
}
