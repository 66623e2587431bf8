#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "polarity/corpus.hpp"

using namespace polarity;

namespace {

std::string blitzer_block(const std::string& text) {
  return "<review>\n<unique_id>\nx\n</unique_id>\n<rating>\n5.0\n</rating>\n<review_text>\n" + text +
         "\n</review_text>\n</review>\n";
}

ReviewDocument doc(const std::string& id, Polarity label, Domain domain = Domain(Domain::Kind::Beauty)) {
  ReviewDocument d;
  d.id = id;
  d.domain = domain;
  d.label = label;
  d.raw_text = "Text of " + id + ".";
  return d;
}

std::string non_space(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

TEST_CASE("blitzer file with 1000 blocks yields 1000 positive documents") {
  std::string text;
  for (int i = 0; i < 1000; ++i) text += blitzer_block("Review number " + std::to_string(i) + ". Fine.");
  const auto r = parse_blitzer_text(text, Domain(Domain::Kind::Beauty), Polarity::Positive);
  REQUIRE(r.documents.size() == 1000);
  CHECK(r.skipped == 0);
  CHECK(std::all_of(r.documents.begin(), r.documents.end(),
                    [](const ReviewDocument& d) { return d.label == Polarity::Positive; }));
  std::set<std::string> ids;
  for (const auto& d : r.documents) ids.insert(d.id);
  CHECK(ids.size() == 1000);
  CHECK(r.documents[7].id == "beauty-positive-8");
}

TEST_CASE("empty input parses to nothing") {
  const auto r = parse_blitzer_text("", Domain(Domain::Kind::Books), Polarity::Negative);
  CHECK(r.documents.empty());
  CHECK(r.warnings.empty());
  CHECK(r.skipped == 0);
}

TEST_CASE("entities are decoded in review text") {
  const auto r = parse_blitzer_text(blitzer_block("A &amp; B."), Domain(Domain::Kind::Kitchen),
                                    Polarity::Positive);
  REQUIRE(r.documents.size() == 1);
  CHECK(r.documents[0].raw_text == "A & B.");
  CHECK(decode_entities("&lt;b&gt; &quot;x&quot; &#39;y&apos; &bogus;") == "<b> \"x\" 'y' &bogus;");
}

TEST_CASE("malformed blocks are skipped with a warning and keep ordinals stable") {
  const std::string text = blitzer_block("First one.") + "<review>\n<rating>1</rating>\n</review>\n" +
                           blitzer_block("Third one.");
  const auto r = parse_blitzer_text(text, Domain(Domain::Kind::Software), Polarity::Negative);
  REQUIRE(r.documents.size() == 2);
  CHECK(r.skipped == 1);
  CHECK(r.warnings.size() == 1);
  CHECK(r.documents[1].id == "software-negative-3");
}

TEST_CASE("invalid utf-8 is replaced and counted") {
  std::size_t replaced = 0;
  const std::string out = sanitize_utf8("ok \xff\xfe end \xc3\xa9", replaced);
  CHECK(replaced == 2);
  CHECK(out == "ok \xEF\xBF\xBD\xEF\xBF\xBD end \xc3\xa9");
}

TEST_CASE("unreadable file is an io error naming the path") {
  try {
    parse_review_records("/nonexistent/dir/positive.review", Domain(Domain::Kind::Beauty),
                         Polarity::Positive);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/positive.review") != std::string::npos);
  }
}

TEST_CASE("jsonl records without ids get generated ids") {
  const auto r = parse_jsonl_text("{\"text\":\"Nice.\"}\nnot json\n{\"id\":\"k\",\"text\":\"Bad.\"}\n",
                                  Domain(Domain::Kind::Books), Polarity::Negative);
  REQUIRE(r.documents.size() == 2);
  CHECK(r.skipped == 1);
  CHECK(r.documents[0].id == "books-negative-1");
  CHECK(r.documents[1].id == "k");
}

TEST_CASE("sentence splitting examples") {
  CHECK(split_sentences("Great blender. Broke in a week!") ==
        std::vector<std::string>{"Great blender.", "Broke in a week!"});
  CHECK(split_sentences("I paid 3.5 stars worth.").size() == 1);
  CHECK(split_sentences("no terminator here") == std::vector<std::string>{"no terminator here"});
  CHECK(split_sentences("Ask Dr. Smith about it. He knows.").size() == 2);
  CHECK(split_sentences("Really?! \"Yes.\" Then what").size() == 3);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   ").empty());
}

TEST_CASE("segment_sentences indexes sentences in order") {
  ReviewDocument d = doc("a", Polarity::Positive);
  d.raw_text = "One. Two! Three?";
  d = segment_sentences(std::move(d));
  REQUIRE(d.sentences.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(d.sentences[i].index == i);
  CHECK(d.sentences[2].text == "Three?");
}

TEST_CASE("segmentation preserves non-whitespace characters") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "abcXYZ .!?\"')(3,\n";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 80);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    std::string joined;
    for (const auto& s : split_sentences(text)) joined += s;
    REQUIRE(non_space(joined) == non_space(text));
  }
}

TEST_CASE("jsonl round trip is an identity on id, domain, label, text") {
  std::vector<ReviewDocument> docs = {doc("a", Polarity::Positive), doc("b", Polarity::Negative),
                                      doc("c", Polarity::Positive, Domain::other("toys"))};
  docs[1].raw_text = "Quotes \" and \\ backslash\nand a newline. Also \xc3\xa9.";
  docs[2] = segment_sentences(std::move(docs[2]));
  std::stringstream ss;
  write_corpus_jsonl(ss, docs);
  const auto back = read_corpus_jsonl(ss);
  REQUIRE(back.documents.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(back.documents[i].id == docs[i].id);
    CHECK(back.documents[i].domain == docs[i].domain);
    CHECK(back.documents[i].label == docs[i].label);
    CHECK(back.documents[i].raw_text == docs[i].raw_text);
  }
  CHECK(back.documents[2].sentences.size() == docs[2].sentences.size());
}

TEST_CASE("stratified split sizes") {
  std::vector<ReviewDocument> corpus;
  for (int i = 0; i < 1000; ++i) corpus.push_back(doc("p" + std::to_string(i), Polarity::Positive));
  for (int i = 0; i < 1000; ++i) corpus.push_back(doc("n" + std::to_string(i), Polarity::Negative));
  const auto s = split_dataset(corpus, 0.8, 42);
  const auto count = [](const std::vector<ReviewDocument>& v, Polarity p) {
    return std::count_if(v.begin(), v.end(), [p](const ReviewDocument& d) { return d.label == p; });
  };
  CHECK(count(s.train, Polarity::Positive) == 800);
  CHECK(count(s.train, Polarity::Negative) == 800);
  CHECK(count(s.test, Polarity::Positive) == 200);
  CHECK(count(s.test, Polarity::Negative) == 200);

  std::vector<ReviewDocument> small;
  for (int i = 0; i < 5; ++i) small.push_back(doc("p" + std::to_string(i), Polarity::Positive));
  for (int i = 0; i < 5; ++i) small.push_back(doc("n" + std::to_string(i), Polarity::Negative));
  const auto t = split_dataset(small, 0.8, 1);
  CHECK(t.train.size() == 8);
  CHECK(t.test.size() == 2);
  CHECK(count(t.test, Polarity::Positive) == 1);
}

TEST_CASE("split is a pure function of corpus, ratio and seed") {
  std::vector<ReviewDocument> corpus;
  for (int i = 0; i < 50; ++i)
    corpus.push_back(doc("d" + std::to_string(i), i % 2 ? Polarity::Positive : Polarity::Negative));
  const auto ids = [](const std::vector<ReviewDocument>& v) {
    std::vector<std::string> out;
    for (const auto& d : v) out.push_back(d.id);
    return out;
  };
  const auto a = split_dataset(corpus, 0.8, 9);
  const auto b = split_dataset(corpus, 0.8, 9);
  CHECK(ids(a.train) == ids(b.train));
  CHECK(ids(a.test) == ids(b.test));
  const auto c = split_dataset(corpus, 0.8, 10);
  CHECK(ids(a.test) != ids(c.test));
}

TEST_CASE("split rejects cells that cannot be stratified and duplicate ids") {
  std::vector<ReviewDocument> corpus = {doc("a", Polarity::Positive), doc("b", Polarity::Negative),
                                        doc("c", Polarity::Negative)};
  CHECK_THROWS(split_dataset(corpus, 0.8, 1));
  corpus = {doc("a", Polarity::Positive), doc("a", Polarity::Positive), doc("b", Polarity::Negative),
            doc("c", Polarity::Negative)};
  CHECK_THROWS(split_dataset(corpus, 0.8, 1));
}

TEST_CASE("parse_review_records reads a file from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "polarity_corpus_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "negative.review";
  {
    std::ofstream out(path);
    out << blitzer_block("Broke fast. Avoid.") << blitzer_block("Meh.");
  }
  const auto r = parse_review_records(path, Domain(Domain::Kind::Kitchen), Polarity::Negative);
  CHECK(r.documents.size() == 2);
  std::filesystem::remove_all(dir);
}
