// corpus.hpp
//
// Review ingestion (Blitzer pseudo-XML and JSONL), rule-based sentence
// segmentation, and stratified train/test splitting.

#ifndef POLARITY_CORPUS_HPP
#define POLARITY_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "polarity/types.hpp"

namespace polarity {

struct ParseResult {
  std::vector<ReviewDocument> documents;
  std::size_t skipped = 0;           // malformed records
  std::size_t invalid_utf8 = 0;      // byte sequences replaced with U+FFFD
  std::vector<std::string> warnings;
};

enum class RecordFormat { Auto, Blitzer, Jsonl };

RecordFormat parse_record_format(std::string_view s);

/// Reads one file of review records that all share `domain` and `label`.
/// Blitzer files are scanned tolerantly for <review>/<review_text> tags
/// since the real files are not well-formed XML. JSONL records carry
/// {id?, text}. Missing ids become `<domain>-<label>-<ordinal>` with 1-based record
/// ordinals.
/// Throws IoError when the file cannot be read.
ParseResult parse_review_records(const std::filesystem::path& path, const Domain& domain,
                                 Polarity label, RecordFormat format = RecordFormat::Auto);

ParseResult parse_blitzer_text(std::string_view text, const Domain& domain, Polarity label);
ParseResult parse_jsonl_text(std::string_view text, const Domain& domain, Polarity label);

/// Decodes &amp; &lt; &gt; &quot; (and &#39; / &apos;). Unknown entities
/// are left as they are.
std::string decode_entities(std::string_view text);

/// Replaces invalid UTF-8 sequences with U+FFFD. Returns the number of
/// replacements through `replaced`.
std::string sanitize_utf8(std::string_view text, std::size_t& replaced);

// Canonical corpus: one JSON object per line with {id, domain, label, text}
// plus an optional "sentences" array of segmented sentence texts.
void write_corpus_jsonl(std::ostream& out, const std::vector<ReviewDocument>& docs);
void write_corpus_jsonl(const std::filesystem::path& path,
                        const std::vector<ReviewDocument>& docs);
ParseResult read_corpus_jsonl(std::istream& in);
ParseResult read_corpus_jsonl(const std::filesystem::path& path);

/// Splits raw_text into sentences. A boundary is a run of `.`, `!` or `?`
/// (plus trailing closing quotes/brackets) followed by whitespace and an
/// uppercase letter, or by end of text. Common abbreviations never end a
/// sentence. Tokens are left empty.
ReviewDocument segment_sentences(ReviewDocument doc);
std::vector<std::string> split_sentences(std::string_view text);

struct DatasetSplit {
  std::vector<ReviewDocument> train;
  std::vector<ReviewDocument> test;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

/// Stratified per (domain, label) cell: each cell of n documents sends
/// round(ratio * n), clamped to [1, n - 1], documents to train. The
/// result depends only on (corpus order, ratio, seed). Documents keep
/// their corpus order inside train and test.
DatasetSplit split_dataset(const std::vector<ReviewDocument>& corpus, double ratio,
                           std::uint64_t seed);

}  // namespace polarity

#endif  // POLARITY_CORPUS_HPP
