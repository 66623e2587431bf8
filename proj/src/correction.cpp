#include "polarity/correction.hpp"

#include <stdexcept>

#include <json.hpp>

namespace polarity {

std::string_view to_string(Fallback f) {
  switch (f) {
    case Fallback::KeepAll: return "keep-all";
    case Fallback::KeepMajorityRuns: return "keep-majority-runs";
    case Fallback::None: return "none";
  }
  return "keep-all";
}

Fallback parse_fallback(std::string_view s) {
  if (s == "keep-all" || s == "KeepAll") return Fallback::KeepAll;
  if (s == "keep-majority-runs" || s == "KeepMajorityRuns") return Fallback::KeepMajorityRuns;
  if (s == "none") return Fallback::None;
  throw ConfigError("unknown fallback '" + std::string(s) +
                    "' (keep-all|keep-majority-runs|none)");
}

void CorrectionConfig::validate() const {
  if (theta < 1) throw ConfigError("theta must be >= 1");
  validate_negation_window(negation_window);
}

std::vector<PolarityRun> polarity_runs(std::span<const Polarity> polarities) {
  std::vector<PolarityRun> runs;
  for (std::size_t i = 0; i < polarities.size(); ++i) {
    if (runs.empty() || runs.back().polarity != polarities[i])
      runs.push_back(PolarityRun{i, 1, polarities[i]});
    else
      ++runs.back().length;
  }
  return runs;
}

ConsistencyResult filter_consistent(std::span<const Polarity> polarities, int theta,
                                    Fallback fallback) {
  if (theta < 1) throw ConfigError("theta must be >= 1");
  ConsistencyResult result;
  result.runs = polarity_runs(polarities);
  const auto min_len = static_cast<std::size_t>(theta);

  std::vector<char> keep(polarities.size(), 0);
  bool any_kept = false;
  for (const auto& run : result.runs) {
    if (run.length < min_len) continue;
    std::fill_n(keep.begin() + static_cast<std::ptrdiff_t>(run.start), run.length, 1);
    any_kept = true;
  }

  if (!any_kept && !polarities.empty() && fallback != Fallback::None) {
    result.fallback_applied = true;
    std::size_t pos = 0;
    for (auto p : polarities) pos += p == Polarity::Positive;
    const std::size_t neg = polarities.size() - pos;
    if (fallback == Fallback::KeepAll || pos == neg) {
      std::fill(keep.begin(), keep.end(), 1);
    } else {
      const Polarity majority = pos > neg ? Polarity::Positive : Polarity::Negative;
      for (std::size_t i = 0; i < polarities.size(); ++i) keep[i] = polarities[i] == majority;
    }
  }

  for (std::size_t i = 0; i < polarities.size(); ++i)
    (keep[i] ? result.kept : result.removed).push_back(i);
  return result;
}

ConsistencyResult filter_consistent(const PolaritySequence& seq, int theta, Fallback fallback) {
  std::vector<Polarity> polarities;
  polarities.reserve(seq.size());
  for (const auto& s : seq) polarities.push_back(s.predicted);
  return filter_consistent(std::span<const Polarity>(polarities), theta, fallback);
}

std::vector<LabeledSentence> CorrectedPools::labeled() const {
  std::vector<LabeledSentence> out;
  out.reserve(positive.size() + negative.size());
  for (const auto& t : positive) out.push_back(LabeledSentence{t, Polarity::Positive});
  for (const auto& t : negative) out.push_back(LabeledSentence{t, Polarity::Negative});
  return out;
}

CorrectedPools correct_training_set(std::span<const LabeledSentence> train_sentences,
                                    const SentenceScorer& model) {
  CorrectedPools pools;
  for (const auto& s : train_sentences) {
    const Polarity predicted = model.score(s.tokens).predicted;
    if (predicted != s.label)
      ++(predicted == Polarity::Positive ? pools.moved_to_positive : pools.moved_to_negative);
    (predicted == Polarity::Positive ? pools.positive : pools.negative).push_back(s.tokens);
  }
  if (pools.positive.empty() || pools.negative.empty())
    throw std::runtime_error("training-set correction left the " +
                             std::string(pools.positive.empty() ? "positive" : "negative") +
                             " pool empty");
  return pools;
}

CorrectedDocument correct_document(const ReviewDocument& doc, const SentenceScorer& model,
                                   const CorrectionConfig& cfg) {
  CorrectedDocument out;
  out.theta = cfg.theta;
  out.polarities.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    SentencePolarity sp = model.score(doc.sentences[i].tokens);
    sp.index = i;
    out.polarities.push_back(sp);
  }
  out.consistency = filter_consistent(out.polarities, cfg.theta, cfg.fallback);

  out.document.id = doc.id;
  out.document.domain = doc.domain;
  out.document.label = doc.label;
  out.document.raw_text = doc.raw_text;
  for (std::size_t i : out.consistency.kept) {
    Sentence s = doc.sentences[i];
    s.index = out.document.sentences.size();
    out.document.sentences.push_back(std::move(s));
  }
  return out;
}

std::string correction_trace_json(const CorrectedDocument& corrected) {
  using nlohmann::ordered_json;
  ordered_json sentences = ordered_json::array();
  for (const auto& sp : corrected.polarities)
    sentences.push_back({{"index", sp.index},
                         {"predicted", to_string(sp.predicted)},
                         {"score_pos", sp.score_pos},
                         {"score_neg", sp.score_neg}});
  ordered_json trace = {{"id", corrected.document.id},
                        {"theta", corrected.theta},
                        {"sentences", std::move(sentences)},
                        {"kept", corrected.consistency.kept},
                        {"removed", corrected.consistency.removed}};
  return trace.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

}  // namespace polarity
