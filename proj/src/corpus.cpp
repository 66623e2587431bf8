#include "polarity/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace polarity {
namespace {

using nlohmann::json;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

std::string make_id(const Domain& domain, Polarity label, std::size_t ordinal) {
  return domain.name() + "-" + std::string(to_string(label)) + "-" + std::to_string(ordinal);
}

std::string clean_text(std::string_view raw, std::size_t& invalid) {
  std::size_t replaced = 0;
  std::string text = decode_entities(sanitize_utf8(raw, replaced));
  invalid += replaced;
  return std::string(trim(text));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

const std::array<std::string_view, 8> kAbbreviations = {
    "mr.", "mrs.", "dr.", "st.", "vs.", "e.g.", "i.e.", "etc."};

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// `dot` indexes a '.'; true when the word it terminates is a known abbreviation.
bool ends_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  std::string word(text.substr(begin, dot - begin + 1));
  while (!word.empty() && is_opener(word.front())) word.erase(word.begin());
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

RecordFormat parse_record_format(std::string_view s) {
  if (s == "auto") return RecordFormat::Auto;
  if (s == "blitzer") return RecordFormat::Blitzer;
  if (s == "jsonl") return RecordFormat::Jsonl;
  throw ConfigError("unknown record format '" + std::string(s) + "' (blitzer|jsonl)");
}

std::string decode_entities(std::string_view text) {
  static const std::array<std::pair<std::string_view, std::string_view>, 6> kEntities = {{
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"},
  }};
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '&') {
      bool matched = false;
      for (const auto& [entity, replacement] : kEntities) {
        if (text.substr(i, entity.size()) == entity) {
          out += replacement;
          i += entity.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out += text[i++];
  }
  return out;
}

std::string sanitize_utf8(std::string_view text, std::size_t& replaced) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  replaced = 0;
  std::string out;
  out.reserve(text.size());
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = byte(i);
    std::size_t len = 0;
    std::uint32_t min_cp = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2; min_cp = 0x80; cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3; min_cp = 0x800; cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4; min_cp = 0x10000; cp = c & 0x07;
    }
    bool ok = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      if ((byte(i + k) & 0xC0) != 0x80) ok = false;
      else cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    ok = ok && cp >= min_cp && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    if (ok) {
      out.append(text.substr(i, len));
      i += len;
    } else {
      out += kReplacement;
      ++replaced;
      ++i;
    }
  }
  return out;
}

ParseResult parse_blitzer_text(std::string_view text, const Domain& domain, Polarity label) {
  static constexpr std::string_view kOpen = "<review>";
  static constexpr std::string_view kClose = "</review>";
  static constexpr std::string_view kTextOpen = "<review_text>";
  static constexpr std::string_view kTextClose = "</review_text>";

  ParseResult result;
  std::size_t ordinal = 0;
  std::size_t pos = text.find(kOpen);
  while (pos != std::string_view::npos) {
    ++ordinal;
    const std::size_t body = pos + kOpen.size();
    const std::size_t close = text.find(kClose, body);
    const std::size_t next_open = text.find(kOpen, body);
    if (close == std::string_view::npos || (next_open != std::string_view::npos && next_open < close)) {
      ++result.skipped;
      result.warnings.push_back("record " + std::to_string(ordinal) + ": missing </review>");
      pos = next_open;
      continue;
    }
    const std::string_view block = text.substr(body, close - body);
    const std::size_t t0 = block.find(kTextOpen);
    const std::size_t t1 = t0 == std::string_view::npos ? t0 : block.find(kTextClose, t0);
    std::string content;
    if (t1 != std::string_view::npos)
      content = clean_text(block.substr(t0 + kTextOpen.size(), t1 - t0 - kTextOpen.size()),
                           result.invalid_utf8);
    if (content.empty()) {
      ++result.skipped;
      result.warnings.push_back("record " + std::to_string(ordinal) +
                                ": missing or empty <review_text>");
    } else {
      ReviewDocument doc;
      doc.id = make_id(domain, label, ordinal);
      doc.domain = domain;
      doc.label = label;
      doc.raw_text = std::move(content);
      result.documents.push_back(std::move(doc));
    }
    pos = text.find(kOpen, close + kClose.size());
  }
  return result;
}

ParseResult parse_jsonl_text(std::string_view text, const Domain& domain, Polarity label) {
  ParseResult result;
  std::size_t ordinal = 0;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++ordinal;
    std::size_t replaced = 0;
    const std::string clean = sanitize_utf8(line, replaced);
    result.invalid_utf8 += replaced;
    json record = json::parse(clean, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("text") ||
        !record["text"].is_string()) {
      ++result.skipped;
      result.warnings.push_back("line " + std::to_string(line_no) + ": not a {text} record");
      continue;
    }
    std::string body(trim(record["text"].get<std::string>()));
    if (body.empty()) {
      ++result.skipped;
      result.warnings.push_back("line " + std::to_string(line_no) + ": empty text");
      continue;
    }
    ReviewDocument doc;
    if (record.contains("id") && record["id"].is_string())
      doc.id = record["id"].get<std::string>();
    else if (record.contains("id") && record["id"].is_number_integer())
      doc.id = std::to_string(record["id"].get<long long>());
    else
      doc.id = make_id(domain, label, ordinal);
    doc.domain = domain;
    doc.label = label;
    doc.raw_text = std::move(body);
    result.documents.push_back(std::move(doc));
  }
  return result;
}

ParseResult parse_review_records(const std::filesystem::path& path, const Domain& domain,
                                 Polarity label, RecordFormat format) {
  const std::string text = read_file(path);
  if (format == RecordFormat::Auto) {
    const std::string_view head = trim(text);
    format = (!head.empty() && head.front() == '{') || path.extension() == ".jsonl"
                 ? RecordFormat::Jsonl
                 : RecordFormat::Blitzer;
  }
  return format == RecordFormat::Jsonl ? parse_jsonl_text(text, domain, label)
                                       : parse_blitzer_text(text, domain, label);
}

void write_corpus_jsonl(std::ostream& out, const std::vector<ReviewDocument>& docs) {
  for (const auto& doc : docs) {
    json record = {{"id", doc.id},
                   {"domain", doc.domain.name()},
                   {"label", to_string(doc.label)},
                   {"text", doc.raw_text}};
    if (!doc.sentences.empty()) {
      json sentences = json::array();
      for (const auto& s : doc.sentences) sentences.push_back(s.text);
      record["sentences"] = std::move(sentences);
    }
    out << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

void write_corpus_jsonl(const std::filesystem::path& path,
                        const std::vector<ReviewDocument>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_corpus_jsonl(out, docs);
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

ParseResult read_corpus_jsonl(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::size_t replaced = 0;
    const std::string clean = sanitize_utf8(line, replaced);
    result.invalid_utf8 += replaced;
    const json record = json::parse(clean, nullptr, false);
    const auto bad = [&](const std::string& why) {
      ++result.skipped;
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (record.is_discarded() || !record.is_object()) {
      bad("invalid JSON");
      continue;
    }
    bool complete = true;
    for (const char* key : {"id", "domain", "label", "text"})
      if (!record.contains(key) || !record[key].is_string()) complete = false;
    if (!complete) {
      bad("missing one of id/domain/label/text");
      continue;
    }
    ReviewDocument doc;
    try {
      doc.id = record["id"].get<std::string>();
      doc.domain = Domain::parse(record["domain"].get<std::string>());
      doc.label = parse_polarity(record["label"].get<std::string>());
    } catch (const ConfigError& e) {
      bad(e.what());
      continue;
    }
    doc.raw_text = record["text"].get<std::string>();
    if (record.contains("sentences") && record["sentences"].is_array()) {
      for (const auto& s : record["sentences"]) {
        if (!s.is_string()) continue;
        Sentence sentence;
        sentence.index = doc.sentences.size();
        sentence.text = s.get<std::string>();
        doc.sentences.push_back(std::move(sentence));
      }
    }
    result.documents.push_back(std::move(doc));
  }
  return result;
}

ParseResult read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return read_corpus_jsonl(in);
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const auto emit = [&](std::size_t begin, std::size_t end) {
    const std::string_view piece = trim(text.substr(begin, end - begin));
    if (!piece.empty()) out.emplace_back(piece);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    const bool single_dot = c == '.' && j == i + 1;
    if (single_dot && i > 0 && j < n && is_digit(text[i - 1]) && is_digit(text[j])) {
      i = j;
      continue;
    }
    if (single_dot && ends_abbreviation(text, i)) {
      i = j;
      continue;
    }
    while (j < n && is_closer(text[j])) ++j;

    bool boundary = false;
    if (j == n) {
      boundary = true;
    } else if (is_space(text[j])) {
      std::size_t k = j;
      while (k < n && is_space(text[k])) ++k;
      if (k == n) boundary = true;
      else if (is_upper(text[k])) boundary = true;
      else if (is_opener(text[k]) && k + 1 < n && is_upper(text[k + 1])) boundary = true;
    }
    if (boundary) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, n);
  return out;
}

ReviewDocument segment_sentences(ReviewDocument doc) {
  doc.sentences.clear();
  for (auto& text : split_sentences(doc.raw_text)) {
    Sentence s;
    s.index = doc.sentences.size();
    s.text = std::move(text);
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

DatasetSplit split_dataset(const std::vector<ReviewDocument>& corpus, double ratio,
                           std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  if (corpus.empty()) throw ConfigError("cannot split an empty corpus");

  std::set<std::string> ids;
  std::vector<std::pair<std::string, Polarity>> cell_order;
  std::map<std::pair<std::string, Polarity>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!ids.insert(corpus[i].id).second)
      throw ConfigError("duplicate document id '" + corpus[i].id + "'");
    auto key = std::make_pair(corpus[i].domain.name(), corpus[i].label);
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) cell_order.push_back(key);
    it->second.push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<char> in_train(corpus.size(), 0);
  for (const auto& key : cell_order) {
    std::vector<std::size_t>& members = cells[key];
    const std::size_t n = members.size();
    if (n < 2)
      throw ConfigError("cell (" + key.first + ", " + std::string(to_string(key.second)) +
                        ") has fewer than 2 documents; cannot stratify");
    // Fisher-Yates on raw 64-bit draws; std::shuffle is not portable across
    // standard libraries.
    for (std::size_t k = n - 1; k > 0; --k) {
      const std::size_t r = static_cast<std::size_t>(rng() % (k + 1));
      std::swap(members[k], members[r]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    for (std::size_t k = 0; k < n_train; ++k) in_train[members[k]] = 1;
  }

  DatasetSplit split;
  split.seed = seed;
  split.ratio = ratio;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    (in_train[i] ? split.train : split.test).push_back(corpus[i]);
  return split;
}

}  // namespace polarity
