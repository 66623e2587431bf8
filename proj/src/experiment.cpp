#include "polarity/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "polarity/corpus.hpp"

namespace polarity {
namespace {

std::string_view scheme_label(FeatureScheme s) {
  switch (s) {
    case FeatureScheme::Unigram: return "Unigram";
    case FeatureScheme::Bigram: return "Bigram";
    case FeatureScheme::BagOfWords: return "BOWS";
  }
  return "Unigram";
}

std::vector<ReviewDocument> prepare(std::vector<ReviewDocument> docs, std::optional<int> negation) {
  for (auto& doc : docs) {
    if (doc.sentences.empty()) doc = segment_sentences(std::move(doc));
    analyze_document(doc, negation);
  }
  return docs;
}

struct CorrectedCorpus {
  NaiveSentenceModel naive;
  std::vector<ReviewDocument> train;
  std::vector<ReviewDocument> test;
  CorrectionSummary summary;
  std::vector<std::string> train_traces;
  std::vector<std::string> test_traces;
};

CorrectedCorpus build_corrected(const std::vector<ReviewDocument>& train,
                                const std::vector<ReviewDocument>& test,
                                const ExperimentConfig& cfg) {
  std::vector<LabeledSentence> sentences;
  for (const auto& doc : train)
    for (const auto& s : doc.sentences) sentences.push_back(LabeledSentence{s.tokens, doc.label});

  std::vector<TokenSeq> token_lists;
  token_lists.reserve(sentences.size());
  for (const auto& s : sentences) token_lists.push_back(s.tokens);
  Vocabulary vocab = fit_vocabulary(std::span<const TokenSeq>(token_lists), FeatureScheme::Unigram,
                                    cfg.naive_min_count);

  CorrectedCorpus out;
  out.summary.train_sentences = sentences.size();
  out.naive = fit_naive(sentences, vocab, cfg.naive_alpha);
  if (cfg.trainset_correction) {
    const CorrectedPools pools = correct_training_set(sentences, out.naive);
    out.summary.moved_to_positive = pools.moved_to_positive;
    out.summary.moved_to_negative = pools.moved_to_negative;
    if (cfg.correction.retrain_naive_after_trainset_correction)
      out.naive = fit_naive(pools.labeled(), std::move(vocab), cfg.naive_alpha);
  }

  const auto correct_all = [&](const std::vector<ReviewDocument>& docs, std::size_t& removed,
                               std::vector<std::string>& traces) {
    if (!cfg.sentence_correction) return docs;
    std::vector<ReviewDocument> kept;
    kept.reserve(docs.size());
    for (const auto& doc : docs) {
      CorrectedDocument c = correct_document(doc, out.naive, cfg.correction);
      removed += c.consistency.removed.size();
      if (cfg.keep_traces) traces.push_back(correction_trace_json(c));
      kept.push_back(std::move(c.document));
    }
    return kept;
  };
  out.train = correct_all(train, out.summary.train_removed, out.train_traces);
  out.test = correct_all(test, out.summary.test_removed, out.test_traces);
  return out;
}

}  // namespace

std::string GridCell::name() const {
  std::string n(display_name(kind));
  if (mode == CellMode::Baseline) return n + "-Baseline";
  n += "-";
  n += scheme_label(scheme);
  if (mode == CellMode::Corrected) n += "-cor";
  return n;
}

std::vector<GridCell> default_grid(std::span<const ModelKind> kinds,
                                   std::span<const FeatureScheme> schemes) {
  std::vector<GridCell> grid;
  for (auto kind : kinds) {
    for (auto scheme : schemes) grid.push_back({kind, scheme, CellMode::Corrected});
    for (auto scheme : schemes) grid.push_back({kind, scheme, CellMode::Standard});
    grid.push_back({kind, FeatureScheme::Unigram, CellMode::Baseline});
  }
  return grid;
}

std::vector<GridCell> default_grid() {
  static constexpr ModelKind kKinds[] = {ModelKind::SVM, ModelKind::NaiveBayes};
  static constexpr FeatureScheme kSchemes[] = {FeatureScheme::Bigram, FeatureScheme::BagOfWords,
                                               FeatureScheme::Unigram};
  return default_grid(kKinds, kSchemes);
}

void ExperimentConfig::validate() const {
  correction.validate();
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  if (!(naive_alpha > 0.0) || !(hyper.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(hyper.C > 0.0)) throw ConfigError("C must be positive");
  if (!(hyper.tolerance > 0.0)) throw ConfigError("SVM tolerance must be positive");
  if (hyper.min_count < 1 || naive_min_count < 1) throw ConfigError("min_count must be >= 1");
}

std::string ExperimentConfig::snapshot() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "ratio=%.17g seed=%llu theta=%d negation_window=%d fallback=%s trainset_correction=%d "
                "sentence_correction=%d retrain_naive=%d negation_in_uncorrected=%d naive_alpha=%.17g "
                "alpha=%.17g C=%.17g tolerance=%.17g kernel=%s exponent=%.17g lower_order=%d "
                "sigma=%.17g omega=%.17g min_count=%d",
                ratio, static_cast<unsigned long long>(seed), correction.theta,
                correction.negation_window, std::string(to_string(correction.fallback)).c_str(),
                trainset_correction, sentence_correction,
                correction.retrain_naive_after_trainset_correction, negation_in_uncorrected,
                naive_alpha, hyper.alpha, hyper.C, hyper.tolerance,
                std::string(to_string(hyper.kernel.type)).c_str(), hyper.kernel.exponent,
                hyper.kernel.lower_order, hyper.kernel.sigma, hyper.kernel.omega, hyper.min_count);
  return buf;
}

std::vector<EvalReport> ExperimentResult::reports() const {
  std::vector<EvalReport> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.report);
  return out;
}

std::string prediction_json(const DocumentPrediction& p) {
  nlohmann::ordered_json j = {{"id", p.id},
                              {"gold", to_string(p.gold)},
                              {"predicted", to_string(p.predicted)},
                              {"score", p.score}};
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

ExperimentResult run_experiment(std::span<const ReviewDocument> corpus,
                                std::span<const GridCell> grid, const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.domain = corpus.empty() ? "other" : corpus.front().domain.name();
  const DatasetSplit split =
      split_dataset(std::vector<ReviewDocument>(corpus.begin(), corpus.end()), cfg.ratio, cfg.seed);

  const bool need_corrected = std::any_of(grid.begin(), grid.end(), [](const GridCell& c) {
    return c.mode == CellMode::Corrected;
  });
  const bool need_plain = std::any_of(grid.begin(), grid.end(), [](const GridCell& c) {
    return c.mode != CellMode::Corrected;
  });
  const std::optional<int> plain_negation =
      cfg.negation_in_uncorrected ? std::optional<int>(cfg.correction.negation_window) : std::nullopt;

  std::vector<ReviewDocument> plain_train, plain_test;
  if (need_plain) {
    plain_train = prepare(split.train, plain_negation);
    plain_test = prepare(split.test, plain_negation);
  }
  std::optional<CorrectedCorpus> corrected;
  std::string corrected_error;
  if (need_corrected) {
    try {
      corrected = build_corrected(prepare(split.train, cfg.correction.negation_window),
                                  prepare(split.test, cfg.correction.negation_window), cfg);
      result.correction = corrected->summary;
      result.train_traces = std::move(corrected->train_traces);
      result.test_traces = std::move(corrected->test_traces);
    } catch (const std::exception& e) {
      corrected_error = std::string("correction stage failed: ") + e.what();
    }
  }

  const std::string snapshot = cfg.snapshot();
  result.cells.resize(grid.size());
  const auto run_cell = [&](std::size_t index) {
    const GridCell& cell = grid[index];
    CellResult& out = result.cells[index];
    out.cell = cell;
    const FeatureScheme scheme = cell.mode == CellMode::Baseline ? FeatureScheme::Unigram : cell.scheme;
    const auto fail = [&](const std::string& why) {
      out.report = EvalReport{};
      out.report.ok = false;
      out.report.error = why;
    };
    try {
      if (cell.mode == CellMode::Corrected && !corrected) {
        fail(corrected_error);
      } else {
        const bool cor = cell.mode == CellMode::Corrected;
        const auto& train = cor ? corrected->train : plain_train;
        const auto& test = cor ? corrected->test : plain_test;
        Hyperparameters hyper = cfg.hyper;
        if (cell.mode == CellMode::Baseline) hyper.granularity = Granularity::Sentence;
        TrainedModel model = train_document_model(train, scheme, cell.kind, hyper);
        model.meta.name = cell.name();
        model.meta.domain = result.domain;
        model.meta.corrected = cor;
        model.meta.correction = cfg.correction;
        model.meta.negation_window = cor ? std::optional<int>(cfg.correction.negation_window) : plain_negation;
        if (cor && cfg.sentence_correction) model.naive = corrected->naive;

        ConfusionCounts counts;
        out.predictions.reserve(test.size());
        for (const auto& doc : test) {
          const Prediction p = predict(model, doc);
          counts.add(doc.label, p.label);
          out.predictions.push_back({doc.id, doc.label, p.label, p.score});
        }
        out.report = make_report(cell.name(), counts);
        if (cfg.keep_models) out.model = std::move(model);
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
    out.report.model = cell.name();
    out.report.kind = std::string(to_string(cell.kind));
    out.report.domain = result.domain;
    out.report.scheme = std::string(to_string(scheme));
    out.report.mode = cell.mode;
    out.report.config = snapshot;
  };

  const std::size_t workers = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(1, grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) run_cell(i);
      });
    for (auto& t : pool) t.join();
  }
  return result;
}

}  // namespace polarity
